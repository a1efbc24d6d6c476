import math

import pytest

from peocalc.errors import DomainError
from peocalc.verify import CheckResult, SUITES, run_suite


def test_every_suite_passes():
    for name in SUITES:
        results = run_suite(name)
        assert results, name
        for r in results:
            assert r.passed, f"{name}: {r.line()}"


def test_all_chains_every_suite():
    total = sum(len(run_suite(name)) for name in SUITES)
    assert len(run_suite("all")) == total


def test_unknown_suite_raises():
    with pytest.raises(DomainError):
        run_suite("nosuch")


def test_check_result_line_format():
    ok = CheckResult("some identity", True, 1.5e-14, "tol 1e-12")
    assert ok.line() == "PASS  some identity  residual=1.500e-14  (tol 1e-12)"
    bad = CheckResult("broken", False, math.inf)
    assert bad.line().startswith("FAIL  broken")
