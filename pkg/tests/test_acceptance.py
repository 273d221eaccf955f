"""The acceptance criteria, one test per criterion.

Each test runs the corresponding suite function at its pinned resolutions
and tolerances and prints the pass/fail line; `cornerlab verify fast`
executes exactly the same functions.
"""

import pytest

from cornerlab import acceptance


@pytest.fixture(scope="module", autouse=True)
def _warm():
    acceptance.warmup_kernels()


def _run(fn):
    result = fn()
    print(result.summary())
    for label, value, tol, ok in result.checks:
        print(f"    {'ok  ' if ok else 'FAIL'} {label}: {value:.6g} (tol {tol:.6g})")
    failing = [c for c in result.checks if not c[3]]
    assert not failing, f"failing checks: {failing}"
    assert result.budget_s <= 0 or result.runtime_s <= result.budget_s, (
        f"runtime {result.runtime_s:.1f}s over budget {result.budget_s:.0f}s")


def test_criterion_1_polynomial_lifts():
    _run(acceptance.criterion_1_polylift)


def test_criterion_2_solver_oracles():
    _run(acceptance.criterion_2_solver)


def test_criterion_3_three_way_agreement():
    _run(acceptance.criterion_3_three_way)


def test_criterion_4_mellin_analytics():
    _run(acceptance.criterion_4_mellin)


def test_criterion_5_endpoint_exponents():
    _run(acceptance.criterion_5_endpoint_exponents)


def test_criterion_6_k_slopes():
    _run(acceptance.criterion_6_k_slopes)


def test_criterion_7_dilation_homogeneity():
    _run(acceptance.criterion_7_dilation)


def test_criterion_8_convergence_orders():
    _run(acceptance.criterion_8_convergence)
