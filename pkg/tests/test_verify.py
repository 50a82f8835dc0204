import json
import time

import pytest

from pdrecon import verify
from pdrecon.errors import UnknownCheckId

QUICK = ["AC01_FAMILY_NUMBERS", "AC05_MINIMAL_CENSUS", "GN_THEOREM_N3", "K33_ORDER"]


def test_one_check_per_criterion():
    by_criterion = {}
    for c in verify.CHECKS.values():
        if c.criterion is not None:
            by_criterion.setdefault(c.criterion, []).append(c.check_id)
    assert sorted(by_criterion) == list(range(1, 12))
    assert all(len(v) == 1 for v in by_criterion.values())


def test_provenance_tags():
    assert {c.provenance for c in verify.CHECKS.values()} <= {"PAPER", "DERIVED", "TRIVIAL"}


@pytest.mark.parametrize("cid", ["GN_THEOREM_N3", "K33_ORDER", "GRID_TJ_5_12"])
def test_named_examples_pass(cid):
    (r,) = verify.run_suite([cid])
    assert r.status == "pass", r


def test_gn3_values():
    (r,) = verify.run_suite(["GN_THEOREM_N3"])
    assert r.observed == {"pd": 2, "upper_pd": 2, "under_pd0": 4, "pd0": 4}


def test_sorted_and_deterministic():
    a = verify.run_suite(list(reversed(QUICK)))
    b = verify.run_suite(QUICK)
    assert [r.check_id for r in a] == sorted(QUICK)
    strip = lambda rs: [(r.check_id, r.status, json.dumps(r.observed, sort_keys=True, default=str)) for r in rs]
    assert strip(a) == strip(b)


def test_unknown_id():
    with pytest.raises(UnknownCheckId):
        verify.run_suite(["NO_SUCH_CHECK"])


def test_budget_timeout(monkeypatch):
    def slow():
        time.sleep(5)
        return True, 1, 1

    monkeypatch.setitem(verify.CHECKS, "ZZ_SLOW", verify.Check("ZZ_SLOW", slow, "TRIVIAL", None, "sleeps"))
    res = verify.run_suite(["ZZ_SLOW", "K33_ORDER"], budget=1.0, workers=2)
    by_id = {r.check_id: r for r in res}
    assert by_id["ZZ_SLOW"].status == "skipped" and by_id["ZZ_SLOW"].reason == "timeout"
    assert by_id["K33_ORDER"].status == "pass"


def test_crashing_check_fails(monkeypatch):
    def boom():
        raise RuntimeError("kaput")

    monkeypatch.setitem(verify.CHECKS, "ZZ_BOOM", verify.Check("ZZ_BOOM", boom, "TRIVIAL", None, "raises"))
    (r,) = verify.run_suite(["ZZ_BOOM"])
    assert r.status == "fail" and "kaput" in r.reason


def test_reports():
    res = verify.run_suite(["K33_ORDER", "GN_THEOREM_N3"])
    lines = verify.to_jsonl(res).splitlines()
    objs = [json.loads(x) for x in lines]
    assert [o["check_id"] for o in objs] == ["GN_THEOREM_N3", "K33_ORDER"]
    assert set(objs[0]) >= {"check_id", "status", "observed", "expected", "provenance", "runtime_ms"}
    table = verify.format_table(res)
    assert "K33_ORDER" in table and "pass" in table


def test_named_family_sample_bounded():
    gs = verify.named_family_sample()
    assert gs and all(g.n <= 12 for g in gs)
    names = {g.name for g in gs}
    assert "K3,3" in names and "G3" in names
