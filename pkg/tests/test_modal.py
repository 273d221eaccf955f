import math

import numpy as np
import pytest

from cornerlab.cutoffs import SmoothCutoff
from cornerlab.geometry import SectorGeometry, build_spectrum, eigenfunction
from cornerlab.grids import Grid, ScalarField
from cornerlab.laplacian import laplacian_residual
from cornerlab.modal import (neumann_log_coefficient, project, reconstruct,
                             solve_modal, solve_poisson, solve_radial_mode,
                             tail_energy)
from cornerlab.quadrature import field_l2, relative_l2
from cornerlab.sources import (gaussian_bump, manufactured_solution, modal_bump,
                               radial_bump, sample)


@pytest.fixture(scope="module")
def geom():
    return SectorGeometry.from_pi_fraction(3, 2, bc="dirichlet")


@pytest.fixture(scope="module")
def grid(geom):
    return Grid.make(geom, 400, 128, r_min_ratio=1e-6)


def test_projection_orthogonality(geom, grid):
    spec = build_spectrum(geom, 8)
    g = radial_bump(0.2, 0.8)(grid.r)
    f = ScalarField(grid, g[:, None] * eigenfunction(spec, 2, grid.phi)[None, :])
    fm = project(f, spec, 8)
    np.testing.assert_allclose(fm.coeffs[2], g, atol=1e-12)
    for n in (0, 1, 3, 4):
        assert np.max(np.abs(fm.coeffs[n])) < 1e-12


def test_projection_of_constant_is_sine_series(geom):
    # the discrete coefficients approach the Fourier-sine series of 1 at the
    # trapezoid rate, so this check needs a fine angular grid
    grid = Grid.make(geom, 10, 16384, r_min_ratio=1e-4)
    spec = build_spectrum(geom, 6)
    one = ScalarField(grid, np.ones(grid.shape))
    fm = project(one, spec, 6)
    for n in range(6):
        lam = spec.lambdas[n]
        want = 2.0 * (1.0 - math.cos((n + 1) * math.pi)) / (geom.omega * lam)
        assert fm.coeffs[n][5] == pytest.approx(want, rel=1e-6, abs=1e-8)


def test_round_trip_band_limited(geom, grid):
    spec = build_spectrum(geom, 6)
    f = ScalarField.from_function(
        grid, lambda r, p: np.sin(spec.lambdas[0] * p) + 0.3 * np.sin(spec.lambdas[3] * p))
    back = reconstruct(project(f, spec, 6))
    assert relative_l2(back - f, f) < 1e-12


def test_radial_mode_power_oracle(geom):
    grid = Grid.make(geom, 800, 8)
    for lam in (2.0 / 3.0, 2.0, 7.5):
        u = solve_radial_mode(grid.r**lam, lam, grid)
        want = (grid.r**lam - grid.r ** (lam + 2.0)) / (4.0 * (lam + 1.0))
        assert np.max(np.abs(u - want)) / np.max(np.abs(want)) < 5e-5


def test_radial_mode_zero_input(geom):
    grid = Grid.make(geom, 100, 8)
    u = solve_radial_mode(np.zeros(len(grid.r)), 1.0, grid)
    assert np.all(u == 0)


def test_radial_mode_ode_residual(geom):
    # finite-difference check of the mode ODE, -(u_tt - lam^2 u) = r^2 f in t
    grid = Grid.make(geom, 1200, 8, r_min_ratio=1e-5)
    lam = 2.0 / 3.0
    f_n = radial_bump(0.2, 0.8)(grid.r)
    u = solve_radial_mode(f_n, lam, grid)
    r = grid.r[1:-1]
    d2 = (u[2:] - 2 * u[1:-1] + u[:-2]) / grid.dt**2
    resid = np.max(np.abs(-(d2 - lam**2 * u[1:-1]) - r**2 * f_n[1:-1]))
    assert resid < 2e-3 * np.max(np.abs(r**2 * f_n[1:-1]))


def test_solver_rejects_bad_inputs(geom):
    grid = Grid.make(geom, 50, 8)
    with pytest.raises(ValueError):
        solve_radial_mode(np.zeros(len(grid.r)), -1.0, grid)
    with pytest.raises(ValueError):
        solve_radial_mode(np.zeros(len(grid.r)), 1.0, grid, outer="weird")


def test_manufactured_solution_recovery(geom):
    grid = Grid.make(geom, 600, 128, r_min_ratio=1e-6)
    chi = SmoothCutoff(0.25, 0.75, order=6)
    u_fn, f_fn = manufactured_solution(geom, chi, {0: 1.0, 1: -0.4})
    u = solve_poisson(sample(f_fn, grid), geom, n_modes=8)
    assert relative_l2(u - sample(u_fn, grid), sample(u_fn, grid)) < 3e-5


def test_zero_source_zero_solution(geom, grid):
    u = solve_poisson(ScalarField(grid, np.zeros(grid.shape)), geom, n_modes=4)
    assert field_l2(u) == 0.0


def test_linearity(geom, grid):
    f1 = sample(modal_bump(geom, 0, 0.2, 0.5), grid)
    f2 = sample(gaussian_bump(geom, 0.5, 0.7, 0.1), grid)
    u1 = solve_poisson(f1, geom, n_modes=8)
    u2 = solve_poisson(f2, geom, n_modes=8)
    u12 = solve_poisson(ScalarField(grid, 2.0 * f1.values - 0.5 * f2.values),
                        geom, n_modes=8)
    combo = ScalarField(grid, 2.0 * u1.values - 0.5 * u2.values)
    assert relative_l2(u12 - combo, u12) < 1e-12


def test_mode_decoupling(geom, grid):
    f = sample(modal_bump(geom, 1, 0.3, 0.7), grid)
    um = solve_modal(f, geom, n_modes=6)
    energies = np.array([np.max(np.abs(um.coeffs[n])) for n in range(6)])
    assert energies[1] > 0
    others = np.delete(energies, 1)
    assert np.max(others) < 1e-10 * energies[1]


def test_discrete_maximum_principle(geom, grid):
    f = sample(gaussian_bump(geom, 0.5, 0.6, 0.15), grid)   # f >= 0
    u = solve_poisson(f, geom, n_modes=24)
    assert u.values.min() > -1e-6 * u.values.max()


def test_solution_satisfies_fd_equation(geom):
    grid = Grid.make(geom, 500, 200, r_min_ratio=1e-5)
    f = sample(modal_bump(geom, 0, 0.3, 0.7), grid)
    u = solve_poisson(f, geom, n_modes=4)
    resid = laplacian_residual(u, f, r_window=(0.05, 1.0), norm="l2")
    assert resid < 5e-3 * field_l2(f)


def test_outer_arc_and_leg_values(geom, grid):
    f = sample(gaussian_bump(geom), grid)
    u = solve_poisson(f, geom, n_modes=16)
    assert np.max(np.abs(u.values[-1, :])) < 1e-12        # outer arc
    assert np.max(np.abs(u.values[:, 0])) < 1e-12         # Dirichlet legs
    assert np.max(np.abs(u.values[:, -1])) < 1e-12


def test_neumann_leg_derivative():
    geom = SectorGeometry.from_pi_fraction(3, 2, bc="neumann")
    grid = Grid.make(geom, 300, 256, r_min_ratio=1e-5)
    f = sample(gaussian_bump(geom, phi0=0.4 * geom.omega), grid)
    u = solve_poisson(f, geom, n_modes=16)
    dphi = grid.dphi
    leg = (-3 * u.values[:, 0] + 4 * u.values[:, 1] - u.values[:, 2]) / (2 * dphi)
    interior = (u.values[:, 2:] - u.values[:, :-2]) / (2 * dphi)
    grad_scale = np.max(np.abs(interior))
    assert np.max(np.abs(leg)) < 1e-2 * grad_scale   # O(dphi^2) one-sided trace


def test_tail_energy_flag(geom, grid):
    f = sample(gaussian_bump(geom, 0.5, 0.5 * geom.omega, 0.12), grid)
    with pytest.raises(ValueError):
        solve_poisson(f, geom, n_modes=2, tail_tol=1e-6)
    assert tail_energy(f, build_spectrum(geom, 64), 64) < 1e-3


def test_neumann_log_coefficient_examples():
    geom = SectorGeometry.from_pi_fraction(3, 2, bc="neumann")
    grid = Grid.make(geom, 400, 128, r_min_ratio=1e-6)
    one = ScalarField(grid, np.ones(grid.shape))
    # (1/omega) * area = (1/omega)(omega/2) = 1/2
    assert neumann_log_coefficient(one, geom) == pytest.approx(0.5, rel=1e-5)
    f1 = sample(modal_bump(geom, 1, 0.3, 0.7), grid)
    assert abs(neumann_log_coefficient(f1, geom)) < 1e-10
    with pytest.raises(ValueError):
        neumann_log_coefficient(one, SectorGeometry.from_pi_fraction(3, 2))
