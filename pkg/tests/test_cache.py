import json
import threading

import numpy as np
import pytest

from fatpoints import cli
from fatpoints import engine as E
from fatpoints.cache import CacheWarning, DiskStore

SCENARIO = {
    "schema_version": 1,
    "name": "cache-check",
    "field": {"kind": "prime", "p": 3},
    "configuration": {"builder": "all_but_one", "N": 2, "excluded": [1, 0, 0]},
    "tasks": [
        {"id": "gens", "type": "invariant", "name": "generator_degrees", "expect": {"degrees": [4, 4, 4, 5]}},
        {"id": "fail", "type": "containment", "left": {"kind": "symbolic", "m": 3}, "right": {"kind": "power", "r": 2}, "expect": "fails"},
        {"id": "beta", "type": "invariant", "name": "beta", "m": 3, "expect": 12},
    ],
}


def _run(store):
    E.clear_views()
    E.STATS.reset()
    E.set_store(store)
    try:
        report = cli.run_scenario(cli.parse_scenario(json.loads(json.dumps(SCENARIO))))
    finally:
        E.set_store(None)
    return cli.strip_timings(report), E.STATS.snapshot()


def _verdicts(report):
    return [(t["id"], t["status"], t["result"], (t.get("certificate") or {}).get("witness")) for t in report["tasks"]]


def test_warm_cache_recomputes_nothing(tmp_path):
    store = DiskStore(tmp_path / "c")
    cold, cold_stats = _run(store)
    assert sum(cold_stats["computed"].values()) > 0
    assert store.entries()
    warm, warm_stats = _run(DiskStore(tmp_path / "c"))
    assert warm_stats["computed"] == {}
    assert sum(warm_stats["loaded"].values()) > 0
    assert _verdicts(cold) == _verdicts(warm)
    assert all(t["status"] == "match" for t in warm["tasks"])


def test_cache_off_and_cold_give_identical_reports(tmp_path):
    off, _ = _run(None)
    cold, _ = _run(DiskStore(tmp_path / "c"))
    warm, _ = _run(DiskStore(tmp_path / "c"))
    assert off["tasks"] == cold["tasks"] == warm["tasks"]


def test_tampered_entry_is_discarded_and_recomputed(tmp_path):
    store = DiskStore(tmp_path / "c")
    clean, _ = _run(store)
    victim = store.entries()[0]
    doc = json.loads(victim.read_text())
    doc["body"]["meta"] = {"tampered": True}
    victim.write_text(json.dumps(doc))
    with pytest.warns(CacheWarning):
        again, stats = _run(DiskStore(tmp_path / "c"))
    assert sum(stats["computed"].values()) >= 1
    assert _verdicts(again) == _verdicts(clean)


def test_garbage_file_is_discarded(tmp_path):
    store = DiskStore(tmp_path / "c")
    key = "ab" * 32
    store.save(key, {"meta": {"x": 1}, "array": np.arange(6, dtype=np.int64).reshape(2, 3)})
    path = store._path(key)
    path.write_text("{not json")
    with pytest.warns(CacheWarning):
        assert store.load(key) is None
    assert not path.exists()


def test_roundtrip_is_bit_identical(tmp_path):
    store = DiskStore(tmp_path)
    a = np.array([[1, -2, 3], [2**40, 0, -(2**50)]], dtype=np.int64)
    store.save("0f" * 32, {"meta": {"rows": [[1, 2]]}, "array": a})
    got = store.load("0f" * 32)
    assert got["meta"] == {"rows": [[1, 2]]}
    assert got["array"].dtype == np.int64 and (got["array"] == a).all()
    assert store.stats()["hits"] == 1


def test_read_only_never_writes(tmp_path):
    d = tmp_path / "ro"
    d.mkdir()
    store = DiskStore(d, "read-only")
    store.save("aa" * 32, {"meta": {}})
    assert store.entries() == []
    assert store.load("aa" * 32) is None


def test_bad_mode_and_key(tmp_path):
    with pytest.raises(ValueError):
        DiskStore(tmp_path, "sometimes")
    with pytest.raises(ValueError):
        DiskStore(tmp_path).load("../etc/passwd")


def test_concurrent_writers(tmp_path):
    store = DiskStore(tmp_path)
    keys = [f"{i:02x}" * 32 for i in range(16)]

    def work(k):
        for _ in range(5):
            store.save(k, {"meta": {"k": k}})
            assert store.load(k)["meta"] == {"k": k}

    threads = [threading.Thread(target=work, args=(k,)) for k in keys]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(store.entries()) == 16
    assert not list(tmp_path.glob("*/.tmp-*"))
