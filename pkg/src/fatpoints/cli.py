"""Scenario runner and registry of reproducible claims.

A scenario is a JSON document::

    {"schema_version": 1,
     "name": "...",
     "field": {"kind": "prime", "p": 3},
     "configuration": {"builder": "all_but_one", "N": 2, "excluded": [1, 0, 0]},
     "degree_cap": null,
     "tasks": [{"id": "...", "type": "containment", ..., "expect": "fails"}]}

Every task carries an ``expect`` field; the exit status is 0 when all
results match, 1 on a mismatch or an inconclusive task, 2 on invalid input
or an execution error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from . import __version__, asymptotics, engine, geometry
from .cache import DiskStore, default_directory
from .engine import Certificate
from .geometry import FatScheme, Point
from .poly import Form, parse_form, vanishing_order
from .scalar import FieldError, FieldSpec, cyclotomic_field, field_make, finite_field

log = logging.getLogger("fatpoints")

SCHEMA_VERSION = 1
TIERS = ("fast", "standard", "long")
EXIT_OK, EXIT_MISMATCH, EXIT_ERROR = 0, 1, 2


class ScenarioError(ValueError):
    """Invalid scenario; the message names the offending path."""


def _fail(path: str, msg: str):
    raise ScenarioError(f"{path}: {msg}")


def _need(obj: dict, key: str, path: str, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        _fail(path, f"missing '{key}'")
    val = obj[key]
    if kind is int and (not isinstance(val, int) or isinstance(val, bool)):
        _fail(f"{path}.{key}", "expected an integer")
    if kind is list and not isinstance(val, list):
        _fail(f"{path}.{key}", "expected a list")
    if kind is str and not isinstance(val, str):
        _fail(f"{path}.{key}", "expected a string")
    return val


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def parse_field(obj, path: str = "field"):
    """Field from a serialized spec, or the shorthands finite(p, s) and cyclotomic(j)."""
    try:
        if isinstance(obj, dict) and obj.get("kind") == "finite":
            return finite_field(_need(obj, "p", path, int), obj.get("s", 1))
        if isinstance(obj, dict) and obj.get("kind") == "cyclotomic":
            return cyclotomic_field(_need(obj, "j", path, int))
        return field_make(FieldSpec.from_json(obj, path))
    except FieldError as exc:
        msg = str(exc)
        raise ScenarioError(msg if msg.startswith(path) else f"{path}: {msg}") from exc


def _point(field, coords, path) -> Point:
    try:
        return Point.from_json(field, coords, path)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def build_configuration(field, obj, path: str = "configuration") -> FatScheme | None:
    builder = _need(obj, "builder", path, str)
    try:
        if builder == "none":
            return None
        if builder == "explicit":
            return FatScheme.from_json(field, obj, path)
        if builder == "all_but_one":
            scheme = geometry.all_but_one(_need(obj, "N", path, int), field, _point(field, _need(obj, "excluded", path), f"{path}.excluded"))
        elif builder == "fermat":
            scheme = geometry.fermat_config(_need(obj, "j", path, int), field)
        elif builder == "projective_space":
            N = _need(obj, "N", path, int)
            scheme = FatScheme(field, N + 1, geometry.enumerate_projective_points(N, field))
        elif builder == "affine_chart":
            ex = obj.get("excluded")
            excluded = _point(field, ex, f"{path}.excluded") if ex is not None else None
            scheme = geometry.affine_chart_points(_need(obj, "N", path, int), field, excluded)
        elif builder == "hyperplane":
            scheme = geometry.hyperplane_points(_need(obj, "N", path, int), field)
        else:
            _fail(f"{path}.builder", f"unknown builder {builder!r}")
    except (ValueError, FieldError) as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(f"{path}: {exc}") from exc
    mult = obj.get("mult", 1)
    if not isinstance(mult, int) or mult < 1:
        _fail(f"{path}.mult", "expected a positive integer")
    if mult != 1:
        scheme = scheme.with_points((P, mult) for P, _ in scheme.points)
    return scheme


@dataclass
class Scenario:
    name: str
    field: Any
    scheme: FatScheme | None
    tasks: list
    degree_cap: int | None
    raw: dict


def parse_scenario(obj, source: str = "scenario") -> Scenario:
    if not isinstance(obj, dict):
        _fail(source, "expected a JSON object")
    version = obj.get("schema_version")
    if version != SCHEMA_VERSION:
        _fail("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")
    field = parse_field(_need(obj, "field", source), "field")
    scheme = build_configuration(field, _need(obj, "configuration", source), "configuration")
    cap = obj.get("degree_cap")
    if cap is not None and (not isinstance(cap, int) or cap < 0):
        _fail("degree_cap", "expected a nonnegative integer")
    tasks = _need(obj, "tasks", source, list)
    for i, task in enumerate(tasks):
        path = f"tasks[{i}]"
        kind = _need(task, "type", path, str)
        if kind not in TASKS:
            _fail(f"{path}.type", f"unknown task type {kind!r}; known: {', '.join(sorted(TASKS))}")
        if "expect" not in task:
            _fail(path, "missing 'expect'")
        tier = task.get("tier", "fast")
        if tier not in TIERS:
            _fail(f"{path}.tier", f"expected one of {TIERS}")
        needs_scheme = kind not in ("vanishing_order", "schedule", "containment", "membership", "linkage", "monomial")
        if needs_scheme and scheme is None:
            _fail(path, f"task type {kind!r} needs a point configuration")
    return Scenario(obj.get("name", source), field, scheme, tasks, cap, obj)


def load_scenario(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc.strerror or exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_scenario(obj, str(path))


# ---------------------------------------------------------------------------
# building objects named in tasks
# ---------------------------------------------------------------------------


class _Context:
    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.field = scenario.field
        self.scheme = scenario.scheme
        self.cap = scenario.degree_cap

    def need_scheme(self, path) -> FatScheme:
        if self.scheme is None:
            _fail(path, "needs a point configuration")
        return self.scheme

    def nvars(self, spec, path) -> int:
        if isinstance(spec, dict) and "nvars" in spec:
            return _need(spec, "nvars", path, int)
        return self.need_scheme(path).nvars

    def point(self, coords, path) -> Point:
        return _point(self.field, coords, path)

    def form(self, spec, path) -> Form:
        F = self.field
        if isinstance(spec, str):
            try:
                return parse_form(spec, F, self.need_scheme(path).nvars)
            except (ValueError, SyntaxError) as exc:
                raise ScenarioError(f"{path}: {exc}") from exc
        if not isinstance(spec, dict):
            _fail(path, "expected a form string or an object")
        if "expr" in spec:
            try:
                f = parse_form(_need(spec, "expr", path, str), F, self.nvars(spec, path))
            except (ValueError, SyntaxError) as exc:
                raise ScenarioError(f"{path}.expr: {exc}") from exc
        else:
            name = _need(spec, "named", path, str)
            try:
                if name == "line_product":
                    f = geometry.line_product_avoiding(F, self.point(_need(spec, "point", path), f"{path}.point"))
                elif name == "fermat_witness":
                    f = geometry.fermat_witness(_need(spec, "j", path, int), F)
                elif name == "q_form":
                    f = geometry.q_form(_need(spec, "p", path, int), _need(spec, "N", path, int), F)
                elif name == "g_form":
                    f = geometry.g_form(_need(spec, "p", path, int), F)
                elif name == "f_form":
                    f = geometry.f_form(_need(spec, "p", path, int), _need(spec, "N", path, int), F)
                else:
                    _fail(f"{path}.named", f"unknown form {name!r}")
            except (ValueError, FieldError) as exc:
                if isinstance(exc, ScenarioError):
                    raise
                raise ScenarioError(f"{path}: {exc}") from exc
        e = spec.get("exponent", 1)
        if not isinstance(e, int) or e < 1:
            _fail(f"{path}.exponent", "expected a positive integer")
        return f**e if e != 1 else f

    def generators(self, spec, path) -> list:
        if spec in (None, "minimal"):
            return engine.ideal_generators(engine.symbolic(self.need_scheme(path), 1, self.cap))
        if isinstance(spec, dict) and "named" in spec:
            name = spec["named"]
            if name == "bch":
                return geometry.bch_generators(self.field)
            if name == "fermat":
                return geometry.fermat_generators(_need(spec, "j", path, int), self.field)
            _fail(f"{path}.named", f"unknown generator set {name!r}")
        if isinstance(spec, dict) and "forms" in spec:
            return [self.form(f, f"{path}.forms[{i}]") for i, f in enumerate(_need(spec, "forms", path, list))]
        if isinstance(spec, list):
            return [self.form(f, f"{path}[{i}]") for i, f in enumerate(spec)]
        _fail(path, "expected 'minimal', a named set, or a list of forms")

    def ideal(self, spec, path) -> engine.IdealView:
        kind = _need(spec, "kind", path, str)
        if kind == "symbolic":
            return engine.symbolic(self.need_scheme(path), _need(spec, "m", path, int), self.cap)
        if kind == "power":
            gens = self.generators(spec.get("generators"), f"{path}.generators")
            return engine.power(gens, _need(spec, "r", path, int), spec.get("k", 0))
        if kind in ("monomial", "monomial_symbolic", "monomial_power"):
            monos = [tuple(u) for u in _need(spec, "monomials", path, list)]
            if kind == "monomial_symbolic":
                monos = engine.monomial_symbolic(monos, _need(spec, "m", path, int))
            elif kind == "monomial_power":
                return engine.power([_monomial_form(self.field, u) for u in monos], _need(spec, "r", path, int), spec.get("k", 0))
            return engine.MonomialIdeal(self.field, monos)
        _fail(f"{path}.kind", f"unknown ideal kind {kind!r}")


def _monomial_form(field, u) -> Form:
    return Form(field, len(u), sum(u), {tuple(u): field.one})


# ---------------------------------------------------------------------------
# tasks
# ---------------------------------------------------------------------------


def _frac(x) -> str | None:
    return asymptotics.fraction_json(Fraction(x)) if x is not None else None


def _match_value(result, expect) -> bool:
    """Exact comparison; fractions compare as rationals, dicts compare the expected keys only."""
    if isinstance(expect, dict) and isinstance(result, dict):
        return all(k in result and _match_value(result[k], v) for k, v in expect.items())
    if isinstance(expect, str) and "/" in expect and isinstance(result, str) and "/" in result:
        return Fraction(expect) == Fraction(result)
    if isinstance(expect, list) and isinstance(result, list):
        return len(expect) == len(result) and all(_match_value(a, b) for a, b in zip(result, expect))
    return result == expect


def task_containment(ctx: _Context, task: dict, path: str):
    left = ctx.ideal(_need(task, "left", path), f"{path}.left")
    right = ctx.ideal(_need(task, "right", path), f"{path}.right")
    cert = engine.contains(left, right, ctx.cap)
    result: dict = {"verdict": cert.verdict}
    if cert.fails:
        result["witness_degree"] = cert.witness_degree
        result["verified"] = engine.verify_certificate(cert, left, right)
        if "witness" in task:
            ref = ctx.form(task["witness"], f"{path}.witness")
            result["witness_matches"] = cert.witness.is_proportional(ref)
    return result, cert


def task_membership(ctx, task, path):
    f = ctx.form(_need(task, "form", path), f"{path}.form")
    view = ctx.ideal(_need(task, "ideal", path), f"{path}.ideal")
    ok = engine.membership(f, view)
    cert = Certificate(
        {"kind": "membership", "ideal": view.describe(), "degree": f.degree},
        "holds" if ok else "fails",
        witness=f,
        witness_degree=f.degree,
    )
    return ok, cert


def task_invariant(ctx, task, path):
    scheme = ctx.need_scheme(path)
    name = _need(task, "name", path, str)
    m = task.get("m", 1)
    view = engine.symbolic(scheme, m, ctx.cap)
    if name == "alpha":
        value = view.alpha()
    elif name == "beta":
        value = engine.beta(scheme, m)
    elif name == "regularity":
        value = view.regularity()
    elif name == "fat_degree":
        value = scheme.fat_degree(m)
    elif name == "points":
        value = len(scheme)
    elif name == "h_vector":
        value = engine.h_vector(scheme, m)
    elif name == "hilbert_function":
        value = [view.rank(t) for t in range(_need(task, "up_to", path, int) + 1)]
    elif name == "generator_degrees":
        degs = engine.generator_degrees(view)
        value = {"degrees": degs, "distinct": sorted(set(degs)), "count_at": {str(d): degs.count(d) for d in sorted(set(degs))}}
    elif name == "least_nonvanishing_degree":
        value = view.least_nonvanishing_degree(ctx.point(_need(task, "point", path), f"{path}.point"))
    elif name == "waldschmidt":
        w = asymptotics.waldschmidt(scheme, task.get("m_list", [1, 2, 3]))
        return {"upper": _frac(w.upper), "exact": _frac(w.exact)}, w.certificate
    else:
        _fail(f"{path}.name", f"unknown invariant {name!r}")
    return value, None


def task_vanishing_order(ctx, task, path):
    f = ctx.form(_need(task, "form", path), f"{path}.form")
    P = _point(ctx.field, _need(task, "point", path), f"{path}.point")
    cap = task.get("cap")
    return vanishing_order(f, P, cap), None


def task_power_vanishes(ctx, task, path):
    scheme = ctx.need_scheme(path)
    q = ctx.point(_need(task, "point", path), f"{path}.point")
    cert = engine.power_vanishes_at(engine.symbolic(scheme, 1, ctx.cap), _need(task, "r", path, int), _need(task, "t", path, int), q)
    return cert.verdict, cert


def task_power_equals_symbolic(ctx, task, path):
    cert = engine.equals_power_symbolic(ctx.need_scheme(path), _need(task, "k", path, int), _need(task, "t_max", path, int))
    return cert.verdict, cert


def _schedule_args(task, path):
    c, d, a, b = (_need(task, k, path, int) for k in ("c", "d", "a", "b"))
    N = task.get("N", 2)
    try:
        pairs = asymptotics.resurgence_schedule(c, d, a, b, N)
    except ValueError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc
    return (c, d, a, b, N), pairs


def task_schedule(ctx, task, path):
    params, pairs = _schedule_args(task, path)
    result: dict = {"pairs": [list(p) for p in pairs], "pruned": [list(p) for p in asymptotics.prune_schedule(pairs)]}
    if not task.get("execute"):
        return result, None
    max_r = task.get("max_r")
    todo = [p for p in asymptotics.prune_schedule(pairs) if max_r is None or p[0] <= max_r]
    certs = asymptotics.run_schedule(ctx.need_scheme(path), todo, jobs=ctx.jobs, degree_cap=ctx.cap)
    result["executed"] = [[c.claim["r"], c.claim["m"], c.verdict] for c in certs]
    result["all_hold"] = all(any(c.holds and c.claim["r"] == r for c in certs) for r, _ in todo)
    cert = Certificate(
        {"kind": "schedule", "params": list(params), "max_r": max_r},
        "holds" if result["all_hold"] else "fails",
        details={"certificates": [c.to_json() for c in certs]},
    )
    return result, cert


def task_bounds(ctx, task, path):
    scheme = ctx.need_scheme(path)
    gens = ctx.generators(task.get("generators"), f"{path}.generators")
    noncont = []
    for i, pair in enumerate(task.get("noncontainments", [])):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, int) for x in pair)):
            _fail(f"{path}.noncontainments[{i}]", "expected [m, r]")
        m, r = pair
        noncont.append(engine.contains(engine.symbolic(scheme, m, ctx.cap), engine.power(gens, r), ctx.cap))
    sched = task.get("schedule")
    sched_params, sched_certs = None, []
    if sched is not None:
        sched_params, pairs = _schedule_args(sched, f"{path}.schedule")
        sched_certs = asymptotics.run_schedule(scheme, asymptotics.prune_schedule(pairs), gens, jobs=ctx.jobs, degree_cap=ctx.cap)
    family = None
    fam = task.get("family")
    if fam is not None:
        fp = f"{path}.family"
        family = asymptotics.family_lower_bound(
            scheme, ctx.form(_need(fam, "witness", fp), f"{fp}.witness"), _need(fam, "m", fp, int), ctx.point(_need(fam, "point", fp), f"{fp}.point")
        )
    report = asymptotics.resurgence_bounds(
        scheme, noncont, sched_params, sched_certs, task.get("waldschmidt_m"), family
    )
    js = report.to_json()
    result = {k: js[k] for k in ("lower", "upper", "upper_method", "family_limit", "value")}
    cert = Certificate({"kind": "resurgence-bounds"}, "holds", details=js)
    return result, cert


def task_linkage(ctx, task, path):
    N = _need(task, "N", path, int)
    F = ctx.field
    q = Point(F, [1] + [0] * N)
    x0, B, J = engine.linkage_data(N, F)
    linked = engine.power(engine.basic_double_link(x0, B, J), 1)
    target = engine.symbolic(geometry.all_but_one(N, F, q), 1)
    reg = target.regularity()
    dims = [[linked.dim(t), target.dim(t)] for t in range(reg + 1)]
    agree = all(a == b for a, b in dims)
    cert = Certificate({"kind": "linkage", "N": N}, "holds" if agree else "fails", checked_degrees=list(range(reg + 1)), details={"dims": dims})
    return agree, cert


def task_monomial(ctx, task, path):
    """Which generators of a monomial symbolic power fall outside M^k·I^r."""
    monos = [tuple(u) for u in _need(task, "monomials", path, list)]
    if not monos or any(len(u) != len(monos[0]) for u in monos):
        _fail(f"{path}.monomials", "expected exponent vectors of equal length")
    m, r, k = _need(task, "m", path, int), _need(task, "r", path, int), task.get("k", 0)
    target = engine.power([_monomial_form(ctx.field, u) for u in monos], r, k)
    outside = [list(u) for u in engine.monomial_symbolic(monos, m) if not engine.membership(_monomial_form(ctx.field, u), target)]
    verdict = "fails" if outside else "holds"
    cert = Certificate(
        {"kind": "monomial-containment", "m": m, "r": r, "k": k},
        verdict,
        witness=_monomial_form(ctx.field, outside[0]) if outside else None,
        witness_degree=sum(outside[0]) if outside else None,
        details={"outside": outside},
    )
    return {"verdict": verdict, "outside": outside}, cert


TASKS = {
    "monomial": task_monomial,
    "containment": task_containment,
    "membership": task_membership,
    "invariant": task_invariant,
    "vanishing_order": task_vanishing_order,
    "power_vanishes": task_power_vanishes,
    "power_equals_symbolic": task_power_equals_symbolic,
    "schedule": task_schedule,
    "bounds": task_bounds,
    "linkage": task_linkage,
}


def _schedule_includes(result, expect) -> bool:
    pairs = {tuple(p) for p in result.get("pairs", [])}
    return all(tuple(p) in pairs for p in expect)


def _evaluate(task, result) -> bool:
    expect = task["expect"]
    if task["type"] == "schedule" and isinstance(expect, dict):
        ok = True
        if "includes" in expect:
            ok &= _schedule_includes(result, expect["includes"])
        rest = {k: v for k, v in expect.items() if k != "includes"}
        return ok and _match_value(result, rest)
    if task["type"] in ("containment", "monomial") and isinstance(expect, str):
        return result["verdict"] == expect
    return _match_value(result, expect)


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------


def _versions() -> dict:
    import numpy

    from . import _kernels

    out = {"fatpoints": __version__, "numpy": numpy.__version__, "kernels": _kernels.BACKEND}
    try:
        import flint

        out["python-flint"] = flint.__version__
    except ImportError:
        out["python-flint"] = None
    return out


def _tier_index(tier: str) -> int:
    return TIERS.index(tier)


def run_scenario(scenario: Scenario, tier: str = "standard", jobs: int = 1) -> dict:
    """Execute the tasks at or below ``tier``; returns the report dictionary."""
    ctx = _Context(scenario)
    ctx.jobs = jobs
    start = time.perf_counter()
    selected = [(i, t) for i, t in enumerate(scenario.tasks) if _tier_index(t.get("tier", "fast")) <= _tier_index(tier)]

    def one(item):
        i, task = item
        path = f"tasks[{i}]"
        t0 = time.perf_counter()
        entry = {"index": i, "id": task.get("id", path), "type": task["type"], "expect": task["expect"]}
        try:
            result, cert = TASKS[task["type"]](ctx, task, path)
            entry["result"] = result
            if cert is not None:
                entry["certificate"] = cert.to_json()
            inconclusive = cert is not None and cert.verdict == "inconclusive" and task["type"] in ("containment", "power_vanishes")
            if inconclusive and task["expect"] != "inconclusive":
                entry["status"] = "inconclusive"
            else:
                entry["status"] = "match" if _evaluate(task, result) else "mismatch"
        except ScenarioError as exc:
            entry["status"] = "invalid"
            entry["error"] = str(exc)
        except engine.DegreeCapExceeded as exc:
            entry["status"] = "inconclusive"
            entry["error"] = str(exc)
        except Exception as exc:  # reported per task, the run goes on
            entry["status"] = "error"
            entry["error"] = f"{type(exc).__name__}: {exc}"
            log.debug("task %s failed:\n%s", path, traceback.format_exc())
        entry["timings"] = {"seconds": round(time.perf_counter() - t0, 3)}
        return entry

    if jobs > 1 and len(selected) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(one, selected))
    else:
        entries = [one(item) for item in selected]
    skipped = [{"index": i, "id": t.get("id", f"tasks[{i}]"), "tier": t.get("tier", "fast")} for i, t in enumerate(scenario.tasks) if (i, t) not in selected]
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario": scenario.raw,
        "tier": tier,
        "tasks": entries,
        "skipped": skipped,
        "summary": _summary(entries),
        "versions": _versions(),
        "timings": {"seconds": round(time.perf_counter() - start, 3)},
    }


def _summary(entries) -> dict:
    counts: dict = {}
    for e in entries:
        counts[e["status"]] = counts.get(e["status"], 0) + 1
    return dict(sorted(counts.items()))


def exit_code(report: dict) -> int:
    statuses = {e["status"] for e in report["tasks"]}
    if statuses & {"error", "invalid"}:
        return EXIT_ERROR
    if statuses & {"mismatch", "inconclusive"}:
        return EXIT_MISMATCH
    return EXIT_OK


def strip_timings(obj):
    """Copy of a report without timing fields, for determinism checks."""
    if isinstance(obj, dict):
        return {k: strip_timings(v) for k, v in obj.items() if k != "timings"}
    if isinstance(obj, list):
        return [strip_timings(v) for v in obj]
    return obj


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# claims
# ---------------------------------------------------------------------------


def _claims_dir():
    return resources.files("fatpoints") / "claims"


def load_registry() -> dict:
    reg = json.loads((_claims_dir() / "registry.json").read_text())
    return {c["id"]: c for c in reg["claims"]}


def claim_scenarios(claim_id: str) -> list:
    reg = load_registry()
    if claim_id not in reg:
        raise KeyError(f"unknown claim {claim_id!r}; available: {', '.join(sorted(reg))}")
    out = []
    for name in reg[claim_id]["scenarios"]:
        obj = json.loads((_claims_dir() / name).read_text())
        out.append(parse_scenario(obj, name))
    return out


def reproduce(claim_id: str, tier: str | None = None, jobs: int = 1) -> dict:
    reg = load_registry()
    claim = reg.get(claim_id)
    if claim is None:
        raise KeyError(f"unknown claim {claim_id!r}; available: {', '.join(sorted(reg))}")
    tier = tier or claim["tier"]
    start = time.perf_counter()
    reports = [run_scenario(s, tier, jobs) for s in claim_scenarios(claim_id)]
    tasks = [dict(e, scenario=r["scenario"].get("name")) for r in reports for e in r["tasks"]]
    return {
        "schema_version": SCHEMA_VERSION,
        "claim": {k: claim[k] for k in ("id", "tier", "description")},
        "tier": tier,
        "reports": reports,
        "tasks": tasks,
        "summary": _summary(tasks),
        "versions": _versions(),
        "timings": {"seconds": round(time.perf_counter() - start, 3)},
    }


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------


def _install_cache(args):
    directory = args.cache or default_directory()
    if args.no_cache or directory is None or args.cache_mode == "off":
        engine.set_store(None)
        return None
    store = DiskStore(directory, args.cache_mode)
    engine.set_store(store)
    return store


def _emit(report: dict, args) -> int:
    text = dump_report(report)
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text)
    for e in report["tasks"]:
        label = f"{e['scenario']}/{e['id']}" if e.get("scenario") else e["id"]
        line = f"[{e['status']}] {label}"
        if "error" in e:
            line += f": {e['error']}"
        print(line, file=sys.stderr)
    return exit_code(report)


def _add_run_options(p):
    p.add_argument("--report", help="also write the report to this file")
    p.add_argument("--cache", help="cache directory (default: $FATPOINTS_CACHE_DIR)")
    p.add_argument("--cache-mode", choices=["read-write", "read-only", "off"], default="read-write")
    p.add_argument("--no-cache", action="store_true", help="ignore any configured cache")
    p.add_argument("--jobs", type=int, default=1, help="tasks evaluated concurrently")
    p.add_argument("--tier", choices=TIERS, default=None, help="highest tier of tasks to run")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fatpoints", description="Containment experiments for symbolic powers of fat points.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario")
    _add_run_options(run)
    rep = sub.add_parser("reproduce", help="run the stored scenario of a registered claim")
    rep.add_argument("claim")
    _add_run_options(rep)
    lst = sub.add_parser("list-claims", help="list registered claims")
    lst.add_argument("--tier", choices=TIERS, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if args.command == "list-claims":
        for cid, claim in sorted(load_registry().items()):
            if args.tier is None or claim["tier"] == args.tier:
                print(f"{cid:28s} {claim['tier']:9s} {claim['description']}")
        return EXIT_OK
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        _install_cache(args)
    except (OSError, ValueError) as exc:
        print(f"error: cache: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        if args.command == "run":
            report = run_scenario(load_scenario(args.scenario), args.tier or "standard", args.jobs)
        else:
            report = reproduce(args.claim, args.tier, args.jobs)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_ERROR
    finally:
        engine.set_store(None)
    return _emit(report, args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
