import copy
import json
import os
import subprocess
import sys

import pytest

from fatpoints import cli
from fatpoints import engine as E

F3_ABO = {"builder": "all_but_one", "N": 2, "excluded": [1, 0, 0]}
REQUIRED_CLAIMS = {
    "cor-2.3-bounds",
    "prop-2.5-rho",
    "prop-3.1-fermat-j3",
    "prop-3.2-p3",
    "prop-3.2-p5",
    "lemma-4.2-orders",
    "thm-4.10-p5",
    "thm-4.11-p5N2",
    "ehs-scaled",
}


def scenario(tasks, field=None, conf=None, **extra):
    return {
        "schema_version": 1,
        "name": "t",
        "field": field or {"kind": "prime", "p": 3},
        "configuration": copy.deepcopy(conf or F3_ABO),
        "tasks": tasks,
        **extra,
    }


def run_main(tmp_path, obj, *args, capsys=None):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    E.clear_views()
    code = cli.main(["run", str(path), "--no-cache", *args])
    return code


def test_containment_fails_as_expected(tmp_path, capsys):
    obj = scenario([{"type": "containment", "left": {"kind": "symbolic", "m": 3}, "right": {"kind": "power", "r": 2}, "expect": "fails"}])
    assert run_main(tmp_path, obj) == 0
    report = json.loads(capsys.readouterr().out)
    task = report["tasks"][0]
    assert task["status"] == "match" and task["result"]["witness_degree"] == 9
    assert task["certificate"]["witness"]["degree"] == 9
    assert report["scenario"] == obj and "versions" in report


def test_cyclotomic_alpha(tmp_path, capsys):
    obj = scenario(
        [{"type": "invariant", "name": "alpha", "m": 3, "expect": 9}],
        field={"kind": "cyclotomic", "j": 3},
        conf={"builder": "fermat", "j": 3},
    )
    assert run_main(tmp_path, obj) == 0


def test_serialized_field_spec(tmp_path, capsys):
    obj = scenario(
        [{"type": "invariant", "name": "points", "expect": 12}],
        field={"kind": "extension", "base": {"kind": "rational"}, "modulus": [1, 1, 1]},
        conf={"builder": "fermat", "j": 3},
    )
    assert run_main(tmp_path, obj) == 0


@pytest.mark.parametrize(
    "field,fragment",
    [
        ({"kind": "prime", "p": "three"}, "field.p"),
        ({"kind": "prime", "p": 4}, "field"),
        ({"kind": "extension", "base": {"kind": "prime", "p": 3}, "modulus": [2, 0, 1]}, "field"),
        ({"kind": "marmalade"}, "field.kind"),
    ],
)
def test_malformed_field_exits_2_naming_path(tmp_path, capsys, field, fragment):
    obj = scenario([{"type": "invariant", "name": "points", "expect": 12}], field=field)
    assert run_main(tmp_path, obj) == 2
    err = capsys.readouterr().err
    assert fragment in err


@pytest.mark.parametrize(
    "mutate,fragment",
    [
        (lambda s: s.update(schema_version=7), "schema_version"),
        (lambda s: s["tasks"][0].update(type="dance"), "tasks[0].type"),
        (lambda s: s["tasks"][0].pop("expect"), "tasks[0]"),
        (lambda s: s["configuration"].update(builder="spiral"), "configuration.builder"),
        (lambda s: s["configuration"].update(excluded=[0, 0, 0]), "configuration.excluded"),
        (lambda s: s.update(degree_cap=-1), "degree_cap"),
        (lambda s: s["tasks"][0].update(tier="eventually"), "tasks[0].tier"),
    ],
)
def test_invalid_scenarios_exit_2(tmp_path, capsys, mutate, fragment):
    obj = scenario([{"type": "invariant", "name": "points", "expect": 12}])
    mutate(obj)
    assert run_main(tmp_path, obj) == 2
    assert fragment in capsys.readouterr().err


def test_invalid_json_exit_2(tmp_path, capsys):
    assert run_main(tmp_path, "{ nope") == 2
    assert "invalid JSON" in capsys.readouterr().err


def test_missing_file_exit_2(tmp_path, capsys):
    assert cli.main(["run", str(tmp_path / "absent.json"), "--no-cache"]) == 2


def test_task_level_bad_reference_is_an_error(tmp_path, capsys):
    obj = scenario([{"type": "membership", "form": {"named": "nonsense"}, "ideal": {"kind": "symbolic", "m": 1}, "expect": True}])
    assert run_main(tmp_path, obj) == 2
    report = json.loads(capsys.readouterr().out)
    assert report["tasks"][0]["status"] == "invalid"
    assert "tasks[0].form.named" in report["tasks"][0]["error"]


def test_mismatch_exit_1(tmp_path, capsys):
    obj = scenario([{"type": "invariant", "name": "alpha", "expect": 5}])
    assert run_main(tmp_path, obj) == 1
    assert json.loads(capsys.readouterr().out)["tasks"][0]["result"] == 4


def test_degree_cap_marks_inconclusive_exit_1(tmp_path, capsys):
    obj = scenario(
        [{"type": "containment", "left": {"kind": "symbolic", "m": 6}, "right": {"kind": "power", "r": 3}, "expect": "holds"}],
        degree_cap=10,
    )
    assert run_main(tmp_path, obj) == 1
    assert json.loads(capsys.readouterr().out)["tasks"][0]["status"] == "inconclusive"


def test_report_file_and_tiers(tmp_path, capsys):
    obj = scenario(
        [
            {"id": "quick", "type": "invariant", "name": "alpha", "expect": 4},
            {"id": "slow", "type": "invariant", "name": "alpha", "m": 3, "expect": 9, "tier": "long"},
        ]
    )
    out = tmp_path / "report.json"
    assert run_main(tmp_path, obj, "--report", str(out), "--tier", "standard") == 0
    report = json.loads(out.read_text())
    assert [t["id"] for t in report["tasks"]] == ["quick"]
    assert [t["id"] for t in report["skipped"]] == ["slow"]


def test_jobs_do_not_change_the_report(tmp_path, capsys):
    tasks = [
        {"type": "invariant", "name": "alpha", "m": 1, "expect": 4},
        {"type": "invariant", "name": "alpha", "m": 3, "expect": 9},
        {"type": "invariant", "name": "beta", "m": 3, "expect": 12},
    ]
    obj = scenario(tasks)
    assert run_main(tmp_path, obj, "--jobs", "3") == 0
    a = cli.strip_timings(json.loads(capsys.readouterr().out))
    assert run_main(tmp_path, obj, "--jobs", "1") == 0
    b = cli.strip_timings(json.loads(capsys.readouterr().out))
    assert a == b


def test_monomial_and_linkage_tasks(tmp_path, capsys):
    obj = scenario(
        [
            {"type": "monomial", "monomials": [[2, 1, 0], [0, 2, 1], [1, 0, 2], [1, 1, 1]], "m": 3, "r": 2, "k": 1, "expect": "fails"},
            {"type": "linkage", "N": 2, "expect": True},
        ],
        conf={"builder": "none"},
    )
    assert run_main(tmp_path, obj) == 0


def test_list_claims(capsys):
    assert cli.main(["list-claims"]) == 0
    out = capsys.readouterr().out
    for key in REQUIRED_CLAIMS:
        assert key in out


def test_unknown_claim_lists_keys(capsys):
    assert cli.main(["reproduce", "no-such-claim", "--no-cache"]) == 2
    err = capsys.readouterr().err
    assert "no-such-claim" in err and "prop-3.2-p3" in err


def test_reproduce_fast_claim(capsys):
    E.clear_views()
    assert cli.main(["reproduce", "prop-3.2-p3", "--no-cache"]) == 0
    report = json.loads(capsys.readouterr().out)
    results = {t["id"]: t["result"] for t in report["tasks"]}
    assert results["alpha"] == 4 and results["least-nonvanishing"] == 5
    assert results["line-product-not-in-power"] is False


def test_registry_scenarios_all_parse():
    reg = cli.load_registry()
    assert REQUIRED_CLAIMS <= set(reg)
    for cid, claim in reg.items():
        assert claim["tier"] in cli.TIERS
        scenarios = cli.claim_scenarios(cid)
        assert len(scenarios) == len(claim["scenarios"])


def _subprocess_report(path, env):
    res = subprocess.run(
        [sys.executable, "-m", "fatpoints.cli", "run", str(path), "--no-cache"],
        capture_output=True,
        text=True,
        env=env,
        timeout=600,
    )
    assert res.returncode == 0, res.stderr
    return res.stdout


@pytest.mark.property
def test_reports_are_deterministic_across_processes(tmp_path):
    obj = scenario(
        [
            {"type": "containment", "left": {"kind": "symbolic", "m": 3}, "right": {"kind": "power", "r": 2}, "expect": "fails"},
            {"type": "bounds", "noncontainments": [[3, 2]], "family": {"witness": {"named": "line_product", "point": [1, 0, 0]}, "m": 3, "point": [1, 0, 0]}, "expect": {"value": "5/3"}},
            {"type": "invariant", "name": "generator_degrees", "expect": {"degrees": [4, 4, 4, 5]}},
        ]
    )
    path = tmp_path / "s.json"
    path.write_text(json.dumps(obj))
    env = dict(os.environ)
    env.pop("FATPOINTS_CACHE_DIR", None)
    a = cli.dump_report(cli.strip_timings(json.loads(_subprocess_report(path, env))))
    b = cli.dump_report(cli.strip_timings(json.loads(_subprocess_report(path, env))))
    assert a == b


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "fatpoints.cli", "list-claims"], capture_output=True, text=True, timeout=120)
    assert res.returncode == 0 and "intro-bch" in res.stdout
