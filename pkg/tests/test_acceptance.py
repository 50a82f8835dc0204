"""Acceptance gate: one check per acceptance criterion, exact values, runtime targets.

Run directly (``python tests/test_acceptance.py``) for a bare pass/fail listing.
"""
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conftest import ACCEPTANCE_LINES  # noqa: E402
from pdrecon.verify import CHECKS, run_suite  # noqa: E402

# criterion -> (check id, runtime target in seconds)
CRITERIA = {
    1: ("AC01_FAMILY_NUMBERS", 1),
    2: ("AC02_GN_NUMBERS", 120),
    3: ("AC03_TAR_STRUCTURE", 600),
    4: ("AC04_KAB_THRESHOLDS", 60),
    5: ("AC05_MINIMAL_CENSUS", 1),
    6: ("AC06_UPPER_PD_CLASSIFICATION", 900),
    7: ("AC07_TAR_UNIQUENESS", 300),
    8: ("AC08_TJ_REALIZATIONS", 120),
    9: ("AC09_TJ_DISCONNECTED", 60),
    10: ("AC10_UNIVERSAL_FRAMEWORK", 600),
    11: ("AC11_TAR_ORACLE_EQUIVALENCE", 300),
}


def evaluate(criterion):
    cid, limit = CRITERIA[criterion]
    (r,) = run_suite([cid])
    ok = r.status == "pass" and r.runtime_ms <= limit * 1000
    line = f"criterion {criterion:2d} {cid:<30} {'PASS' if ok else 'FAIL'}  ({r.runtime_ms / 1000:.2f}s, limit {limit}s)"
    return ok, line, r


def test_every_criterion_has_a_check():
    assert sorted(c.criterion for c in CHECKS.values() if c.criterion is not None) == sorted(CRITERIA)
    assert all(CHECKS[cid].criterion == k for k, (cid, _) in CRITERIA.items())


@pytest.mark.parametrize("criterion", sorted(CRITERIA))
def test_criterion(criterion):
    ok, line, r = evaluate(criterion)
    ACCEPTANCE_LINES.append(line)
    print(line)
    if not ok:
        failed = {k: v for k, v in r.observed.items() if r.expected.get(k) != v} if isinstance(r.observed, dict) and isinstance(r.expected, dict) else r.observed
        pytest.fail(f"{line}\nobserved (differing): {failed}\nexpected: {r.expected}\n{r.reason}")


if __name__ == "__main__":
    results = [evaluate(c) for c in sorted(CRITERIA)]
    for _, line, _ in results:
        print(line)
    sys.exit(0 if all(ok for ok, _, _ in results) else 1)
