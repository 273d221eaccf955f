import math

import numpy as np
import pytest

from cornerlab.geometry import SectorGeometry, build_spectrum, eigenfunction
from cornerlab.grids import Grid, ScalarField
from cornerlab.quadrature import (angular_inner, angular_quadrature, field_l2,
                                  integrate_field, radial_quadrature)


@pytest.fixture(scope="module")
def geom():
    return SectorGeometry.from_pi_fraction(3, 2, bc="dirichlet")


def test_grid_is_log_uniform(geom):
    grid = Grid.make(geom, 200, 64)
    dt = np.diff(grid.t)
    np.testing.assert_allclose(dt, dt[0], rtol=1e-12)
    assert grid.r[0] > 0
    assert grid.r[-1] == pytest.approx(geom.radius)


def test_grid_rejects_origin_and_nonuniform():
    with pytest.raises(ValueError):
        Grid(np.array([0.0, 0.5, 1.0]), np.linspace(0, 1, 5))
    with pytest.raises(ValueError):
        Grid(np.array([0.1, 0.3, 0.5]), np.linspace(0, 1, 5))   # linear spacing


def test_field_shape_guard(geom):
    grid = Grid.make(geom, 10, 10)
    with pytest.raises(ValueError):
        ScalarField(grid, np.zeros((3, 3)))


def test_angular_sine_square_integral(geom):
    # discrete trapezoid orthogonality makes this one exact
    spec = build_spectrum(geom, 5)
    phi = np.linspace(0.0, geom.omega, 513)
    dphi = phi[1] - phi[0]
    for n in range(5):
        val = angular_quadrature(eigenfunction(spec, n, phi) ** 2, dphi)
        assert abs(val - geom.omega / 2) < 1e-8


def test_angular_orthogonality_all_bcs():
    for bc in ("dirichlet", "neumann", "mixed"):
        geom = SectorGeometry.from_pi_fraction(7, 4, bc=bc)
        spec = build_spectrum(geom, 6)
        phi = np.linspace(0.0, geom.omega, 257)
        dphi = phi[1] - phi[0]
        for n in range(6):
            for m in range(6):
                val = angular_inner(eigenfunction(spec, n, phi),
                                    eigenfunction(spec, m, phi), dphi)
                if n != m:
                    assert abs(val) < 1e-8
                else:
                    norm = geom.omega if (bc == "neumann" and n == 0) else geom.omega / 2
                    assert abs(val - norm) < 1e-8


def test_radial_monomial(geom):
    grid = Grid.make(geom, 400, 8)
    val = radial_quadrature(grid.r, grid.r)           # Int r * r dr = R^3/3
    assert abs(val - 1.0 / 3.0) < 1e-6


def test_radial_fractional_power(geom):
    grid = Grid.make(geom, 400, 8)
    val = radial_quadrature(grid.r**0.3, grid.r)      # Int r^0.3 r dr = 1/2.3
    assert abs(val - 1.0 / 2.3) / (1.0 / 2.3) < 1e-6


def test_integrate_field_area(geom):
    grid = Grid.make(geom, 400, 128)
    one = ScalarField(grid, np.ones(grid.shape))
    # area of the truncated sector: omega R^2 / 2
    assert integrate_field(one) == pytest.approx(geom.omega / 2, rel=1e-6)


def test_field_l2_power(geom):
    grid = Grid.make(geom, 400, 64)
    beta = 0.4
    u = ScalarField.from_function(grid, lambda r, p: r**beta)
    want = math.sqrt(geom.omega / (2 * beta + 2))
    assert field_l2(u) == pytest.approx(want, rel=1e-6)
