import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cornerlab.geometry import (BoundaryCondition, SectorGeometry, build_spectrum,
                                eigenfunction, eigenfunction_norm_sq)


def test_dirichlet_spectrum_matches_table():
    geom = SectorGeometry.from_pi_fraction(3, 2, bc="dirichlet")
    spec = build_spectrum(geom, 3)
    np.testing.assert_allclose(spec.lambdas, [2 / 3, 4 / 3, 2.0], rtol=1e-14)
    assert all(k == "sine" for k in spec.kinds)
    assert not spec.includes_zero


def test_mixed_spectrum_quarter_sector():
    geom = SectorGeometry.from_pi_fraction(1, 2, bc="mixed")
    spec = build_spectrum(geom, 1)
    np.testing.assert_allclose(spec.lambdas, [1.0], rtol=1e-14)
    assert spec.kinds[0] == "sine"


def test_neumann_half_plane_spectrum():
    geom = SectorGeometry.from_pi_fraction(1, 1, bc="neumann")
    spec = build_spectrum(geom, 3)
    np.testing.assert_allclose(spec.lambdas, [0.0, 1.0, 2.0], rtol=1e-14)
    assert all(k == "cosine" for k in spec.kinds)
    assert spec.includes_zero


def test_invalid_geometry_rejected():
    with pytest.raises(ValueError):
        SectorGeometry(0.0)
    with pytest.raises(ValueError):
        SectorGeometry(2 * math.pi)
    with pytest.raises(ValueError):
        SectorGeometry(1.0, radius=-1.0)


def test_eigenfunction_boundary_values():
    geom = SectorGeometry.from_pi_fraction(3, 2, bc="dirichlet")
    spec = build_spectrum(geom, 2)
    assert eigenfunction(spec, 0, 0.0) == 0.0
    assert abs(eigenfunction(spec, 0, geom.omega)) < 1e-15

    geom_n = SectorGeometry.from_pi_fraction(3, 2, bc="neumann")
    spec_n = build_spectrum(geom_n, 1)
    assert eigenfunction(spec_n, 0, 0.7) == 1.0   # constant mode

    geom_m = SectorGeometry.from_pi_fraction(3, 2, bc="mixed")
    spec_m = build_spectrum(geom_m, 1)
    # Neumann side: value sin(pi/2) = 1, derivative vanishes
    assert eigenfunction(spec_m, 0, geom_m.omega) == pytest.approx(1.0)


def test_eigenfunction_index_guard():
    spec = build_spectrum(SectorGeometry.from_pi_fraction(3, 2), 2)
    with pytest.raises(IndexError):
        eigenfunction(spec, 5, 0.1)


@given(st.integers(min_value=1, max_value=40), st.integers(min_value=1, max_value=7),
       st.integers(min_value=1, max_value=7),
       st.sampled_from(list(BoundaryCondition)))
def test_spectrum_increasing_with_uniform_gap(n_max, num, den, bc):
    if num >= 2 * den:   # omega must stay below 2 pi
        num = 2 * den - 1
    geom = SectorGeometry.from_pi_fraction(num, den, bc=bc)
    spec = build_spectrum(geom, n_max)
    gaps = np.diff(spec.lambdas)
    assert np.all(gaps > 0)
    if n_max > 1:
        np.testing.assert_allclose(gaps, math.pi / geom.omega, rtol=1e-12)


@given(st.floats(min_value=0.2, max_value=6.0), st.integers(min_value=0, max_value=5))
def test_mixed_eigenfunctions_satisfy_both_leg_conditions(omega, n):
    geom = SectorGeometry(omega, bc="mixed")
    spec = build_spectrum(geom, n + 1)
    lam = spec.lambdas[n]
    assert math.sin(lam * 0.0) == 0.0
    # Neumann side: derivative lam * cos(lam * omega) = 0
    assert abs(lam * math.cos(lam * omega)) < 1e-9 * max(lam, 1.0)


def test_norm_constants():
    geom = SectorGeometry.from_pi_fraction(3, 2, bc="neumann")
    spec = build_spectrum(geom, 3)
    assert eigenfunction_norm_sq(spec, 0) == pytest.approx(geom.omega)
    assert eigenfunction_norm_sq(spec, 1) == pytest.approx(geom.omega / 2)
