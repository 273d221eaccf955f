import math

import numpy as np
import pytest
from scipy.integrate import quad

from cornerlab.cutoffs import Cutoff, SmoothCutoff
from cornerlab.geometry import SectorGeometry
from cornerlab.grids import Grid, ScalarField
from cornerlab.modal import solve_poisson
from cornerlab.polylift import assemble_P, kernel_harmonic
from cornerlab.quadrature import relative_l2
from cornerlab.sif import (admissible_terms, corner_taylor_fit, decompose,
                           default_epsilon, sample_term, singular_function,
                           stress_intensity_direct, stress_intensity_dual)
from cornerlab.sources import (dilated, gaussian_bump, manufactured_solution,
                               modal_bump, radial_bump, sample)


@pytest.fixture(scope="module")
def geom():
    return SectorGeometry.from_pi_fraction(3, 2, bc="dirichlet")


@pytest.fixture(scope="module")
def grid(geom):
    return Grid.make(geom, 1200, 96, r_min_ratio=1e-8)


def test_singular_term_harmonic_and_bc(geom):
    term = singular_function(geom, 1)
    from cornerlab.zfield import ZField

    zf = ZField.power_trig(term.lam, term.kind)
    assert abs(zf.laplacian().eval(0.5, 0.7)) < 1e-12
    assert abs(term.eval(0.5, 0.0)) < 1e-15
    assert abs(term.eval(0.5, geom.omega)) < 1e-14


def test_direct_orthogonal_mode_is_zero(geom, grid):
    f = sample(modal_bump(geom, 1, 0.3, 0.6), grid)    # mode-2 content only
    assert abs(stress_intensity_direct(f, geom, 1)) < 1e-8


def test_direct_collapses_to_radial_quadrature(geom):
    # f = s_1-shaped source: S_1 = (omega / (2 pi)) Int w r dr for Dirichlet
    grid = Grid.make(geom, 4800, 64, r_min_ratio=1e-8)
    w = radial_bump(0.25, 0.65)
    lam = geom.first_exponent()
    f = ScalarField.from_function(grid, lambda r, p: r**lam * np.sin(lam * p) * w(r))
    val, _ = quad(lambda r: w(r) * r, 0.25, 0.65, epsabs=1e-14)
    want = geom.omega / (2.0 * math.pi) * val
    assert stress_intensity_direct(f, geom, 1) == pytest.approx(want, rel=1e-6)


def test_direct_dilation_identity(geom):
    # octave-aligned grid: dilation by powers of two is an exact index shift
    n_oct = 48
    r = 2.0 ** (-np.arange(26 * n_oct + 1, dtype=float)[::-1] / n_oct)
    grid = Grid(r, np.linspace(0.0, geom.omega, 97))
    f_fn = modal_bump(geom, 0, 0.3, 0.6)
    s1 = stress_intensity_direct(sample(f_fn, grid), geom, 1)
    lam = geom.first_exponent()
    for delta in (0.5, 0.25):
        s_d = stress_intensity_direct(sample(dilated(f_fn, delta), grid), geom, 1)
        assert s_d == pytest.approx(delta ** (2.0 - lam) * s1, rel=1e-6)


def test_direct_integrability_guard(geom, grid):
    # data without corner decay under a large exponent must be refused
    geom4 = SectorGeometry.from_pi_fraction(1, 4, bc="dirichlet")
    grid4 = Grid.make(geom4, 600, 64, r_min_ratio=1e-6)
    lam1 = geom4.first_exponent()
    assert lam1 == pytest.approx(4.0)
    f = ScalarField.from_function(grid4, lambda r, p: np.sin(lam1 * p) * np.exp(-r))
    with pytest.raises(ValueError):
        stress_intensity_direct(f, geom4, 1)


def test_dual_smooth_solution_gives_zero(geom, grid):
    # u smooth, supported away from corner and arc: no singular content
    w = radial_bump(0.3, 0.7)
    u = ScalarField.from_function(grid, lambda r, p: w(r) * np.sin(math.pi * p / geom.omega * 3))
    from cornerlab.laplacian import laplacian_apply

    f = ScalarField(grid, -laplacian_apply(u).values)
    c = stress_intensity_dual(u, f, geom, 1, eta=SmoothCutoff(0.2, 0.8))
    assert abs(c) < 1e-6


def test_dual_matches_direct_and_cutoff_free(geom):
    grid = Grid.make(geom, 2400, 96, r_min_ratio=1e-8)
    f = sample(modal_bump(geom, 0, 0.3, 0.6), grid)
    s_direct = stress_intensity_direct(f, geom, 1)
    u = solve_poisson(f, geom, n_modes=6, outer="free")
    c_a = stress_intensity_dual(u, f, geom, 1, eta=SmoothCutoff(0.2, 0.7))
    c_b = stress_intensity_dual(u, f, geom, 1, eta=SmoothCutoff(0.35, 0.9))
    assert c_a == pytest.approx(s_direct, rel=1e-4)
    assert c_a == pytest.approx(c_b, rel=2e-5)


def test_dual_rejects_cutoff_touching_arc(geom, grid):
    f = sample(modal_bump(geom, 0, 0.3, 0.6), grid)
    u = solve_poisson(f, geom, n_modes=4)
    with pytest.raises(ValueError):
        stress_intensity_dual(u, f, geom, 1, eta=SmoothCutoff(0.5, 1.05))


def test_manufactured_coefficients(geom):
    grid = Grid.make(geom, 800, 192, r_min_ratio=1e-7)
    chi = SmoothCutoff(0.25, 0.75, order=6)
    u_fn, f_fn = manufactured_solution(geom, chi, {0: 1.0, 1: 0.5})
    u, f = sample(u_fn, grid), sample(f_fn, grid)
    assert stress_intensity_dual(u, f, geom, 1) == pytest.approx(1.0, abs=1e-4)
    assert stress_intensity_dual(u, f, geom, 2) == pytest.approx(0.5, abs=1e-4)
    assert stress_intensity_direct(f, geom, 1) == pytest.approx(1.0, abs=1e-4)


def test_lift_kernel_invariance():
    # adding a harmonic kernel polynomial to the lift must not move S_1
    geom = SectorGeometry.from_pi_fraction(2, 3, bc="dirichlet")   # lambda_1 = 3/2
    grid = Grid.make(geom, 1600, 96, r_min_ratio=1e-8)
    chi = Cutoff(0.25, 0.75)
    f = sample(gaussian_bump(geom, 0.45, 0.3 * geom.omega, 0.15), grid)
    taylor, _ = corner_taylor_fit(f, 0)
    lift_a = assemble_P(taylor, 1, geom)
    lift_b = lift_a + kernel_harmonic(geom, 3)
    s_a = stress_intensity_direct(f, geom, 1, lift=lift_a, chi=chi)
    s_b = stress_intensity_direct(f, geom, 1, lift=lift_b, chi=chi)
    assert s_a == pytest.approx(s_b, rel=1e-6)


def test_admissible_terms_windows():
    geom_small = SectorGeometry.from_pi_fraction(1, 4, bc="dirichlet")
    assert admissible_terms(geom_small, 0, 0.5) == []     # lambda_1 = 4 > 1.5

    geom_mixed = SectorGeometry.from_pi_fraction(7, 4, bc="mixed")
    eps = default_epsilon(geom_mixed, 0)
    assert admissible_terms(geom_mixed, 0, eps) == [1, 2]

    with pytest.raises(ValueError):
        admissible_terms(geom_mixed, 0, (geom_mixed.first_exponent() - 1.0) + 1e-9)
    with pytest.raises(ValueError):
        admissible_terms(geom_mixed, 3, 0.5)              # beyond the window


def test_decompose_empty_list_small_angle():
    geom = SectorGeometry.from_pi_fraction(1, 4, bc="dirichlet")
    grid = Grid.make(geom, 400, 64, r_min_ratio=1e-6)
    f = sample(modal_bump(geom, 0, 0.3, 0.6), grid)
    dec = decompose(f, geom, k=0, chi=Cutoff(0.3, 0.8), n_modes=8)
    assert dec.terms == ()
    assert relative_l2(dec.reconstruct() - dec.solution, dec.solution) < 1e-12


def test_decompose_mixed_two_terms():
    geom = SectorGeometry.from_pi_fraction(7, 4, bc="mixed")
    grid = Grid.make(geom, 800, 96, r_min_ratio=1e-7)
    f = sample(gaussian_bump(geom, 0.45, 0.3 * geom.omega, 0.15), grid)
    dec = decompose(f, geom, k=0, chi=Cutoff(0.3, 0.8), n_modes=16)
    lams = sorted(t.lam for t in dec.terms)
    np.testing.assert_allclose(lams, [2.0 / 7.0, 6.0 / 7.0], rtol=1e-12)
    assert relative_l2(dec.reconstruct() - dec.solution, dec.solution) < 1e-12


def test_decompose_manufactured_unit_coefficient(geom):
    grid = Grid.make(geom, 800, 192, r_min_ratio=1e-7)
    chi_src = SmoothCutoff(0.25, 0.75, order=6)
    u_fn, f_fn = manufactured_solution(geom, chi_src, {0: 1.0, 1: 0.5})
    dec = decompose(sample(f_fn, grid), geom, k=0, chi=Cutoff(0.3, 0.8), n_modes=16)
    assert len(dec.terms) == 1
    assert dec.terms[0].coefficient == pytest.approx(1.0, abs=1e-4)


def test_corner_taylor_fit():
    geom = SectorGeometry.from_pi_fraction(3, 2, bc="dirichlet")
    grid = Grid.make(geom, 600, 96, r_min_ratio=1e-6)
    f = ScalarField.from_function(
        grid, lambda r, p: 2.0 + 3.0 * r * np.cos(p) - 1.5 * r * np.sin(p)
                           + 0.7 * (r * np.cos(p)) ** 2)
    taylor, cond = corner_taylor_fit(f, 2)
    assert taylor[(0, 0)] == pytest.approx(2.0, abs=1e-6)
    assert taylor[(1, 0)] == pytest.approx(3.0, abs=1e-4)
    assert taylor[(0, 1)] == pytest.approx(-1.5, abs=1e-4)
    assert taylor[(2, 0)] == pytest.approx(1.4, abs=1e-2)   # 2! * 0.7
    assert cond < 1e4


def test_sample_term_with_cutoff(geom, grid):
    term = singular_function(geom, 1, 2.0)
    chi = Cutoff(0.2, 0.6)
    field = sample_term(term, grid, chi)
    outer = grid.r > 0.6
    assert np.all(field.values[outer, :] == 0.0)
