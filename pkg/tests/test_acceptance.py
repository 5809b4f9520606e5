"""Acceptance gate: every criterion at its stated tolerance, one line each."""

import pytest

from alblab.acceptance import ALL_CRITERIA, run_acceptance
from alblab.integrals import DEFAULT_CONFIG


@pytest.mark.parametrize("criterion", ALL_CRITERIA,
                         ids=lambda fn: fn.__name__.replace("criterion_", ""))
def test_criterion(criterion):
    needs_cfg = criterion.__name__ not in (
        "criterion_orbit_criterion", "criterion_rmf",
        "criterion_malcev_exactness", "criterion_mhs_morphism")
    result = criterion(DEFAULT_CONFIG) if needs_cfg else criterion()
    print(result.line())
    assert result.passed, result.line()


def test_quick_suite_is_green():
    results = run_acceptance("quick")
    for r in results:
        print(r.line())
    assert all(r.passed for r in results)


def test_corrupted_tolerance_reports_failures():
    # abs_tol = 1 degrades the transport accuracy; the suite must report
    # quantified nonzero failure counts instead of raising
    from alblab.acceptance import criterion_shuffle_suite
    from alblab.integrals import QuadratureConfig
    bad = QuadratureConfig(abs_tol=1.0)
    result = criterion_shuffle_suite(bad, n_paths=4)
    assert not result.passed
    assert result.failures > 0
    assert result.max_error > result.tolerance
