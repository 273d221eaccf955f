"""The acceptance suite: every headline property as a pass/fail criterion.

Each criterion function performs its own computation at pinned resolutions
and tolerances and returns a CriterionResult; run_suite executes a named
subset ('fast' runs all eight at standard resolution, 'full' adds the
higher-resolution and cross-bracket variants) and prints one line per
criterion.  tests/test_acceptance.py asserts the same functions, so the
CLI `verify` command and pytest exercise identical code.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._kernels import backend, polar_laplacian, exp_scan, smoothstep_quintic
from .besov import k_curve, regularity_exponent, sif_functional_bound_probe
from .cutoffs import Cutoff, SmoothCutoff
from .fdsolve import solve_poisson_fd_richardson
from .geometry import BoundaryCondition, SectorGeometry
from .grids import Grid, ScalarField
from .laplacian import laplacian_residual
from .mellin import (default_residue_lines, mellin_eval, mellin_forward,
                     mellin_inverse, mellin_norm_sq, two_line_residue)
from .modal import project, solve_poisson
from .polylift import build_pij, boundary_residual, pde_residual
from .quadrature import relative_l2
from .sif import decompose, stress_intensity_direct, stress_intensity_dual
from .sources import (gaussian_bump, manufactured_solution, modal_bump,
                      radial_bump, sample)
from .zfield import ZField


@dataclass
class CriterionResult:
    name: str
    budget_s: float
    runtime_s: float = 0.0
    checks: list = field(default_factory=list)   # (label, value, tol, passed)

    def check(self, label, value, tol):
        self.checks.append((label, float(value), float(tol), bool(value <= tol)))

    def check_true(self, label, flag):
        self.checks.append((label, float(bool(flag)), 1.0, bool(flag)))

    @property
    def passed(self) -> bool:
        return (all(c[3] for c in self.checks)
                and (self.budget_s <= 0 or self.runtime_s <= self.budget_s))

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        n_bad = sum(1 for c in self.checks if not c[3])
        extra = "" if n_bad == 0 else f"  ({n_bad} failing checks)"
        return f"[{status}] {self.name}  ({self.runtime_s:.1f}s{extra})"


def warmup_kernels():
    """Trigger JIT compilation outside the timed criteria."""
    x = np.linspace(0.0, 1.0, 64)
    smoothstep_quintic(x, 1)
    exp_scan(x, 0.5)
    polar_laplacian(np.outer(x + 1, x), x + 1.0, 0.1)


OMEGAS = [(1, 4), (1, 2), (2, 3), (3, 2), (7, 4)]
BCS = (BoundaryCondition.DIRICHLET, BoundaryCondition.NEUMANN, BoundaryCondition.MIXED)


def criterion_1_polylift() -> CriterionResult:
    """Lift PDE/boundary residuals and exact resonance sets on the lattice."""
    res = CriterionResult("1 polynomial lifts (PDE 1e-8, boundary 1e-9, resonance sets)", 5.0)
    t0 = time.perf_counter()
    worst_pde, worst_bnd = 0.0, 0.0
    sets_ok = True
    for num, den in OMEGAS:
        for bc in BCS:
            geom = SectorGeometry.from_pi_fraction(num, den, bc=bc)
            ratio = Fraction(num, den)
            for i in range(4):
                for j in range(4 - i):
                    lift = build_pij(i, j, geom)
                    worst_pde = max(worst_pde, pde_residual(lift))
                    worst_bnd = max(worst_bnd, boundary_residual(lift))
                    budget = i + j + 2
                    if bc is BoundaryCondition.MIXED:
                        want = {n for n in range(1, budget + 1)
                                if (n * ratio + Fraction(1, 2)).denominator == 1}
                    else:
                        want = {n for n in range(2, budget + 1)
                                if (n * ratio).denominator == 1}
                    sets_ok &= lift.resonance_set == frozenset(want)
    res.check("max relative PDE residual", worst_pde, 1e-8)
    res.check("max relative boundary residual", worst_bnd, 1e-9)
    res.check_true("resonance sets match the membership tests", sets_ok)
    res.runtime_s = time.perf_counter() - t0
    return res


def criterion_2_solver() -> CriterionResult:
    """Manufactured recovery at pinned resolution and FD cross-check."""
    res = CriterionResult("2 solver oracle equivalence (manufactured 1e-5, FD 1e-4)", 30.0)
    t0 = time.perf_counter()
    geom = SectorGeometry.from_pi_fraction(3, 2, bc="dirichlet")
    grid = Grid.make(geom, 800, 256, r_min_ratio=1e-6)
    chi = SmoothCutoff(0.25, 0.75, order=6)
    u_fn, f_fn = manufactured_solution(geom, chi, {0: 1.0})
    u_num = solve_poisson(sample(f_fn, grid), geom, n_modes=32)
    err = relative_l2(u_num - sample(u_fn, grid), sample(u_fn, grid))
    res.check("manufactured chi*s1 L2 relative error (N_r=800, 32 modes)", err, 1e-5)

    one = lambda r, p: np.ones(np.broadcast(np.asarray(r), np.asarray(p)).shape)
    u_fd = solve_poisson_fd_richardson(one, geom, 1024, 512, r_min_ratio=1e-9)
    u_modal = solve_poisson(sample(one, u_fd.grid), geom, n_modes=96)
    res.check("f=1 modal vs FD reference L2 relative difference",
              relative_l2(u_modal - u_fd, u_fd), 1e-4)
    res.runtime_s = time.perf_counter() - t0
    return res


def _corpus_cases():
    for bc in BCS:
        for num, den in [(1, 4), (2, 3), (3, 2), (7, 4)]:
            yield SectorGeometry.from_pi_fraction(num, den, bc=bc)


def criterion_3_three_way(n_r: int = 3200) -> CriterionResult:
    """Direct vs dual vs Mellin-residue coefficients on the 12-case corpus."""
    res = CriterionResult("3 three-way stress-intensity agreement (1e-4; cutoffs 1e-5)", 180.0)
    t0 = time.perf_counter()
    worst_pair, worst_cut = 0.0, 0.0
    for geom in _corpus_cases():
        grid = Grid.make(geom, n_r, 96, r_min_ratio=1e-8)
        mode = 1 if geom.bc is BoundaryCondition.NEUMANN else 0
        f = sample(modal_bump(geom, mode, 0.3, 0.6), grid)
        s_direct = stress_intensity_direct(f, geom, 1)
        u_free = solve_poisson(f, geom, n_modes=6, outer="free")
        s_dual = stress_intensity_dual(u_free, f, geom, 1, eta=SmoothCutoff(0.25, 0.75))
        eta_hi, eta_lo = default_residue_lines(geom, 1)
        terms = two_line_residue(f, geom, eta_hi, eta_lo, n_modes=4)
        s_mellin = next(t.coefficient for t in terms if t.lam > 0)
        scale = abs(s_direct)
        worst_pair = max(worst_pair, abs(s_direct - s_dual) / scale,
                         abs(s_direct - s_mellin) / scale,
                         abs(s_dual - s_mellin) / scale)
        s_a = stress_intensity_dual(u_free, f, geom, 1, eta=SmoothCutoff(0.2, 0.65))
        s_b = stress_intensity_dual(u_free, f, geom, 1, eta=SmoothCutoff(0.35, 0.9))
        worst_cut = max(worst_cut, abs(s_a - s_b) / scale)
    res.check("worst pairwise relative disagreement (12 cases)", worst_pair, 1e-4)
    res.check("worst dual cutoff-dependence", worst_cut, 1e-5)
    res.runtime_s = time.perf_counter() - t0
    return res


def criterion_4_mellin() -> CriterionResult:
    """Mellin transform analytics, round trip and norm equivalence."""
    res = CriterionResult("4 Mellin analytics (1e-4 / round trip 1e-8 / ratio < 10)", 60.0)
    t0 = time.perf_counter()
    geom = SectorGeometry.from_pi_fraction(3, 2)
    grid = Grid.make(geom, 2000, 8, r_min_ratio=1e-9)
    worst = 0.0
    for j in (1, 2, 3):
        u = np.where(grid.r <= 1.0, grid.r ** float(j), 0.0)
        for eta in (0.0, 0.35 * j):
            xi = np.linspace(-20.0, 20.0, 41)
            zeta = xi - 1j * eta
            got = mellin_eval(u, grid, zeta)
            want = 1.0 / (math.sqrt(2.0 * math.pi) * (j - 1j * zeta))
            worst = max(worst, float(np.max(np.abs(got - want) / np.abs(want))))
    res.check("M[r^j 1_(0,1)] vs 1/(sqrt(2pi)(j - i zeta)), |zeta|<=20", worst, 1e-4)

    bump = radial_bump(0.2, 0.7)(grid.r)
    back = mellin_inverse(mellin_forward(bump, grid, 0.4))
    res.check("forward/inverse round trip",
              float(np.max(np.abs(back - bump)) / np.max(np.abs(bump))), 1e-8)

    from .besov import WeightedNormSpec, weighted_norm
    from .geometry import build_spectrum

    grid2 = Grid.make(geom, 800, 64, r_min_ratio=1e-7)
    f = sample(modal_bump(geom, 0, 0.2, 0.7), grid2)
    mf = project(f, build_spectrum(geom, 4), 4)
    ratios = []
    for gamma in (-0.3, 0.0, 0.4):
        phys = weighted_norm(f, WeightedNormSpec(0, gamma, 2.0)) ** 2
        ratios.append(mellin_norm_sq(mf, 0, gamma) / phys)
    ratio_spread = max(max(ratios), 1.0 / min(ratios))
    res.check("K^0_gamma norm equivalence constant ratio", ratio_spread, 10.0)
    res.runtime_s = time.perf_counter() - t0
    return res


def criterion_5_endpoint_exponents() -> CriterionResult:
    """Measured Besov exponents 1 + pi/omega (D, N) and 1 + pi/(2 omega) (M)."""
    res = CriterionResult("5 endpoint shift exponents (+-0.05; remainder >= 1.9)", 300.0)
    t0 = time.perf_counter()
    cases = [("dirichlet", 2, 3, (0, 3)), ("dirichlet", 3, 2, (0, 2)),
             ("neumann", 2, 3, (0, 3)), ("neumann", 3, 2, (0, 2)),
             ("mixed", 3, 4, (0, 2)), ("mixed", 7, 4, (0, 2))]
    for bc, num, den, levels in cases:
        geom = SectorGeometry.from_pi_fraction(num, den, bc=bc)
        target = 1.0 + geom.first_exponent()
        grid = Grid.make(geom, 700, 192, r_min_ratio=1e-7)
        f = sample(gaussian_bump(geom, r0=0.45, phi0=0.3 * geom.omega, width=0.15), grid)
        s1 = stress_intensity_direct(f, geom, 1)
        u = solve_poisson(f, geom, n_modes=32)
        expo, _ = regularity_exponent(u, levels=levels, geom=geom, n_list=(8, 32))
        res.check_true(f"{bc} omega={num}/{den}pi: S1(f) != 0", abs(s1) > 1e-6)
        res.check(f"{bc} omega={num}/{den}pi exponent error (target {target:.4f})",
                  abs(expo - target), 0.05)

    geom = SectorGeometry.from_pi_fraction(3, 2, bc="dirichlet")
    grid = Grid.make(geom, 700, 192, r_min_ratio=1e-7)
    f = sample(gaussian_bump(geom, r0=0.45, phi0=0.3 * geom.omega, width=0.15), grid)
    dec = decompose(f, geom, k=0, chi=Cutoff(0.3, 0.8), n_modes=32)
    expo0, _ = regularity_exponent(dec.regular, levels=(0, 2), geom=geom, n_list=(8, 32))
    res.check("decomposition remainder exponent shortfall below 1.9",
              max(0.0, 1.9 - expo0), 0.0 + 1e-12)
    res.runtime_s = time.perf_counter() - t0
    return res


def criterion_6_k_slopes() -> CriterionResult:
    """K-curve decay orders of the canonical singular functions."""
    res = CriterionResult("6 singularity K-functional slopes (+-0.05)", 120.0)
    t0 = time.perf_counter()
    geom = SectorGeometry.from_pi_fraction(3, 2)
    grid = Grid.make(geom, 600, 96, r_min_ratio=1e-8)
    for beta in (0.5, 2.0 / 3.0, 1.5):
        s2 = int(math.floor(beta)) + 2
        target = (1.0 + beta) / s2
        curve = k_curve(ZField.power_trig(beta, "sine"), (0, s2), grid=grid)
        res.check(f"slope error for r^{beta:.4g} sin (levels (0,{s2}))",
                  abs(curve.slope - target), 0.05)
    curve = k_curve(ZField.r_power(2.0) * ZField.ln_r(), (0, 4), grid=grid)
    res.check("slope error for r^2 ln r (levels (0,4), target 3/4)",
              abs(curve.slope - 0.75), 0.05)
    res.runtime_s = time.perf_counter() - t0
    return res


def criterion_7_dilation() -> CriterionResult:
    """Homogeneity of the coefficient functional under dilations."""
    res = CriterionResult("7 functional dilation homogeneity (slope err < 1e-3)", 60.0)
    t0 = time.perf_counter()
    geom = SectorGeometry.from_pi_fraction(3, 2)
    n_oct, octaves = 48, 30
    r = 2.0 ** (-np.arange(octaves * n_oct + 1, dtype=float)[::-1] / n_oct)
    grid = Grid(r, np.linspace(0.0, geom.omega, 65))
    w = radial_bump(0.25, 0.65)
    lam = geom.first_exponent()

    def f_fn(rr, pp):
        return w(rr) * np.sin(lam * pp)

    probe = sif_functional_bound_probe(geom, f_fn, grid, j=1, p_values=(4.0 / 3.0, 4.0))
    res.check("fitted dilation slope error vs 2 - lambda_1",
              abs(probe["fitted_slope"] - probe["expected_slope"]), 1e-3)
    for key, vals in probe["ratio_checks"].items():
        v = np.abs(np.array(vals))
        res.check(f"S/{key} dilation invariance spread",
                  float((v.max() - v.min()) / v.mean()), 1e-6)
    res.runtime_s = time.perf_counter() - t0
    return res


def criterion_8_convergence() -> CriterionResult:
    """Interior residual order and manufactured-solution L2 rate."""
    res = CriterionResult("8 convergence orders (residual h^2; L2 rate >= floor)", 120.0)
    t0 = time.perf_counter()
    geom = SectorGeometry.from_pi_fraction(3, 2, bc="dirichlet")
    lam = geom.first_exponent()

    residuals = []
    for n in (200, 400, 800):
        grid = Grid.make(geom, n, n // 2, r_min_ratio=1e-4)
        u = ScalarField.from_function(grid, lambda r, p: r**lam * np.sin(lam * p))
        zero = ScalarField(grid, np.zeros(grid.shape))
        residuals.append(laplacian_residual(u, zero, r_window=(1e-2, 1.0)))
    rate_res = math.log2(residuals[0] / residuals[2]) / 2.0
    res.check("interior Laplacian residual order shortfall below 1.9",
              max(0.0, 1.9 - rate_res), 1e-12)

    chi = SmoothCutoff(0.25, 0.75, order=6)
    u_fn, f_fn = manufactured_solution(geom, chi, {0: 1.0})
    errors = []
    for n in (200, 400, 800):
        grid = Grid.make(geom, n, 128, r_min_ratio=1e-6)
        u_num = solve_poisson(sample(f_fn, grid), geom, n_modes=8)
        errors.append(relative_l2(u_num - sample(u_fn, grid), sample(u_fn, grid)))
    rate_l2 = math.log2(errors[0] / errors[2]) / 2.0
    floor = min(2.0, lam + 1.0) - 0.1
    res.check(f"manufactured L2 rate shortfall below {floor:.3f} (measured {rate_l2:.2f})",
              max(0.0, floor - rate_l2), 1e-12)
    res.runtime_s = time.perf_counter() - t0
    return res


FAST = (criterion_1_polylift, criterion_2_solver, criterion_3_three_way,
        criterion_4_mellin, criterion_5_endpoint_exponents, criterion_6_k_slopes,
        criterion_7_dilation, criterion_8_convergence)


def _criterion_3_full():
    return criterion_3_three_way(n_r=4800)


def _criterion_5_brackets() -> CriterionResult:
    """Bracket consistency of the exponent estimate (full suite extra)."""
    res = CriterionResult("5b bracket consistency of exponent estimates (0.1)", 120.0)
    t0 = time.perf_counter()
    geom = SectorGeometry.from_pi_fraction(3, 2)
    grid = Grid.make(geom, 600, 96, r_min_ratio=1e-8)
    splus = ZField.power_trig(2.0 / 3.0, "sine")
    e1, _ = regularity_exponent(splus, levels=(0, 2), grid=grid)
    e2, _ = regularity_exponent(splus, levels=(0, 3), grid=grid)
    res.check("exponent difference between level pairs (0,2) and (0,3)",
              abs(e1 - e2), 0.1)
    res.runtime_s = time.perf_counter() - t0
    return res


FULL = (criterion_1_polylift, criterion_2_solver, _criterion_3_full,
        criterion_4_mellin, criterion_5_endpoint_exponents, _criterion_5_brackets,
        criterion_6_k_slopes, criterion_7_dilation, criterion_8_convergence)


def run_suite(suite: str = "fast", printer=print):
    """Run the named suite; returns (all_passed, [CriterionResult])."""
    if suite == "fast":
        criteria = FAST
    elif suite == "full":
        criteria = FULL
    else:
        raise ValueError(f"unknown suite {suite!r} (use 'fast' or 'full')")
    warmup_kernels()
    printer(f"cornerlab acceptance suite '{suite}' (kernel backend: {backend()})")
    results = []
    for fn in criteria:
        result = fn()
        results.append(result)
        printer(result.summary())
        for label, value, tol, ok in result.checks:
            if not ok:
                printer(f"    FAILING: {label}: {value:.6g} > {tol:.6g}")
    ok = all(r.passed for r in results)
    printer("suite result: " + ("PASS" if ok else "FAIL"))
    return ok, results
