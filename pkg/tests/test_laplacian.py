import math

import numpy as np
import pytest

from cornerlab.geometry import SectorGeometry
from cornerlab.grids import Grid, ScalarField
from cornerlab.laplacian import laplacian_residual


@pytest.fixture(scope="module")
def geom():
    return SectorGeometry.from_pi_fraction(3, 2)


def _fields(geom, n_r, n_phi, u_fn, f_fn):
    grid = Grid.make(geom, n_r, n_phi, r_min_ratio=1e-4)
    return (ScalarField.from_function(grid, u_fn),
            ScalarField.from_function(grid, f_fn))


def test_radial_quadratic_machine_exact(geom):
    # the non-uniform radial stencil is exact for quadratics in r and the
    # angular term vanishes for radial fields: -Delta(-r^2/4) = 1 to rounding
    u, f = _fields(geom, 200, 64,
                   lambda r, p: -(r**2) / 4.0,
                   lambda r, p: np.ones_like(r * p))
    assert laplacian_residual(u, f) < 1e-10


def test_harmonic_quadratic_second_order(geom):
    # x^2 - y^2 is angularly cos(2 phi): the 3-point phi stencil leaves an
    # O(dphi^2) residual that must shrink at second order
    zero = lambda r, p: np.zeros_like(r * p)
    u_fn = lambda r, p: r**2 * np.cos(2 * p)
    res = []
    for n_phi in (64, 128, 256):
        u, f = _fields(geom, 100, n_phi, u_fn, zero)
        res.append(laplacian_residual(u, f))
    rate = math.log2(res[0] / res[2]) / 2.0
    assert rate > 1.9
    assert res[2] < 1e-3


def test_singular_harmonic_rate_away_from_corner(geom):
    lam = 2.0 / 3.0
    zero = lambda r, p: np.zeros_like(r * p)
    u_fn = lambda r, p: r**lam * np.sin(lam * p)
    res = []
    for n in (100, 200, 400):
        u, f = _fields(geom, n, n // 2, u_fn, zero)
        res.append(laplacian_residual(u, f, r_window=(1e-2, 1.0)))
    rate = math.log2(res[0] / res[2]) / 2.0
    assert rate > 1.9


def test_grid_mismatch_guard(geom):
    g1 = Grid.make(geom, 20, 20)
    g2 = Grid.make(geom, 30, 20)
    u = ScalarField(g1, np.zeros(g1.shape))
    f = ScalarField(g2, np.zeros(g2.shape))
    with pytest.raises(ValueError):
        laplacian_residual(u, f)


def test_empty_window_guard(geom):
    grid = Grid.make(geom, 20, 20)
    u = ScalarField(grid, np.zeros(grid.shape))
    with pytest.raises(ValueError):
        laplacian_residual(u, u, r_window=(2.0, 3.0))
