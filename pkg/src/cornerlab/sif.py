"""Stress-intensity coefficients and the corner solution decomposition.

The solution of -Delta u = f near the corner splits as

    u = u_0  +  chi * P_(k-1)  +  sum_j S_j * chi * s_j,
    s_j = r^lambda_j * e_j(phi),

with u_0 two orders smoother than f.  The coefficient S_j multiplying s_j
is computed by three independent routes, which the test corpus checks
against each other:

* direct: S_j = 1/(lambda_j omega) * Int r^(-lambda_j) e_j(phi)
  (f + Delta(chi P)) dx -- a pure functional of the data, equal to the
  coefficient of the decaying infinite-cone solution;
* dual: S_j = 1/(lambda_j omega) * [Int f s_j^- eta dx
  + Int u Delta(s_j^- eta) dx] with the dual singular function
  s_j^- = r^(-lambda_j) e_j(phi) and any radial cutoff eta that is 1 near
  the corner and 0 before the outer arc -- reads the coefficient off an
  already-computed solution, whatever its outer boundary condition;
* Mellin: the two-line residue extraction in the mellin module.

The prefactor 1/(lambda_j omega) normalizes the residue of the mode-j pole
(it equals 1/pi for the leading Dirichlet/Neumann term and
2/((2j-1) pi) for the mixed-case terms), and its sign is fixed so that
S_j is literally the coefficient of s_j in u: for u = chi * s_j the three
routes all return +1.

decompose() therefore pairs the truncated-domain solve with the dual
extraction (the direct integral of raw data measures the infinite-cone
expansion, which differs from the truncated one by a smooth reflection
term), subtracts lift and singular terms, and hands back a remainder whose
measured smoothness is the package's headline observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cutoffs import Cutoff, SmoothCutoff
from .geometry import (BoundaryCondition, SectorGeometry, SINE,
                       build_spectrum, eigenfunction_norm_sq)
from .grids import Grid, ScalarField, same_grid
from .modal import project, solve_poisson
from .polylift import Lift, assemble_P, eval_lift, eval_laplacian_of_cutoff_lift
from .quadrature import radial_quadrature_t


@dataclass(frozen=True)
class SingularTerm:
    """One corner expansion term c * r^lambda (ln r)^log_power trig(lambda phi).

    With ``phi_factor`` set, the term is the harmonic log pair
    r^lambda (ln r trig + phi trig') instead (resonant exponents); the bare
    ln r factor without phi_factor is harmonic only for lambda = 0 (the
    Neumann double pole).
    """

    lam: float
    kind: str
    log_power: int = 0
    phi_factor: bool = False
    coefficient: float = 1.0

    def eval(self, r, phi):
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        if self.kind == SINE:
            trig, cotrig = np.sin(self.lam * phi), np.cos(self.lam * phi)
        else:
            trig, cotrig = np.cos(self.lam * phi), -np.sin(self.lam * phi)
        radial = r**self.lam
        if self.log_power == 0 and not self.phi_factor:
            return self.coefficient * radial * trig
        if self.phi_factor:
            return self.coefficient * radial * (np.log(r) * trig + phi * cotrig)
        return self.coefficient * radial * np.log(r) ** self.log_power * trig


def singular_function(geom: SectorGeometry, j: int, coefficient: float = 1.0) -> SingularTerm:
    """The j-th corner singularity term s_j = r^lambda_j e_j(phi) (j >= 1)."""
    spec = build_spectrum(geom, j + 1)
    idx = j if geom.bc is BoundaryCondition.NEUMANN else j - 1
    return SingularTerm(float(spec.lambdas[idx]), spec.kinds[idx],
                        coefficient=coefficient)


def sample_term(term: SingularTerm, grid: Grid, chi: Cutoff | None = None) -> ScalarField:
    rr, pp = grid.meshes()
    vals = term.eval(rr, pp)
    if chi is not None:
        vals = vals * chi(rr)
    return ScalarField(grid, vals)


def _mode_index(geom: SectorGeometry, j: int) -> int:
    """Spectrum index of the j-th singular term (Neumann counts from 1)."""
    if j < 1:
        raise ValueError("term index starts at 1")
    return j if geom.bc is BoundaryCondition.NEUMANN else j - 1


def _mode_profile(F: ScalarField, geom: SectorGeometry, idx: int) -> np.ndarray:
    spec = build_spectrum(geom, idx + 1)
    return project(F, spec, idx + 1).coeffs[idx]


def _integrability_check(profile_t: np.ndarray, edge_frac: float = 0.05,
                         tol: float = 1e-3):
    """The t-integrand must decay toward the corner window edge."""
    n_edge = max(int(edge_frac * profile_t.size), 2)
    scale = np.max(np.abs(profile_t))
    if scale == 0.0:
        return
    if np.max(np.abs(profile_t[:n_edge])) > tol * scale:
        raise ValueError("singular-weight integrand does not decay toward the corner: "
                         "data lacks the required Taylor cancellation "
                         "(or the grid window is too short)")


def stress_intensity_direct(f: ScalarField, geom: SectorGeometry, j: int = 1,
                            lift: Lift | None = None, chi: Cutoff | None = None,
                            check: bool = True) -> float:
    """Coefficient of s_j from the data integral.

    S_j = 1/(lambda_j omega) Int r^(-lambda_j) e_j(phi) (f + Delta(chi P)) dx,
    reduced by angular orthogonality to a single radial quadrature of the
    mode-j profile with weight r^(1-lambda_j).
    """
    grid = f.grid
    idx = _mode_index(geom, j)
    spec = build_spectrum(geom, idx + 1)
    lam = float(spec.lambdas[idx])
    if lam <= 0.0:
        raise ValueError("coefficient extraction needs a positive exponent")
    F = f
    if lift is not None and not lift.is_zero():
        if chi is None:
            raise ValueError("a cutoff is required with a lift")
        F = f + eval_laplacian_of_cutoff_lift(lift, chi, grid)
    profile = _mode_profile(F, geom, idx)
    integrand_t = profile * grid.r ** (2.0 - lam)
    if check:
        _integrability_check(integrand_t)
    radial = radial_quadrature_t(integrand_t, grid.dt)
    return eigenfunction_norm_sq(spec, idx) * radial / (lam * geom.omega)


def stress_intensity_dual(u: ScalarField, f: ScalarField, geom: SectorGeometry,
                          j: int = 1, eta: Cutoff | None = None,
                          lift: Lift | None = None, chi: Cutoff | None = None) -> float:
    """Coefficient of s_j read off a computed solution u of -Delta u = f.

    S_j = 1/(lambda_j omega) [ Int (f + Delta(chi P)) s_j^- eta dx
                             + Int (u - chi P) Delta(s_j^- eta) dx ],
    s_j^- = r^(-lambda_j) e_j(phi).  The cutoff eta must be identically 1
    near the corner and vanish before the outer arc; the result does not
    depend on it.  The optional lift supplies the Taylor cancellation that
    makes the first integral convergent when lambda_j >= 2.
    """
    grid = same_grid(u, f)
    if eta is None:
        # C^4 profile: Simpson over the quintic's chi'' kinks would cap the
        # extraction accuracy near 1e-4
        eta = SmoothCutoff(0.25 * geom.radius, 0.75 * geom.radius)
    if eta.outer_radius >= geom.radius:
        raise ValueError("dual cutoff must vanish before the outer arc")
    idx = _mode_index(geom, j)
    spec = build_spectrum(geom, idx + 1)
    lam = float(spec.lambdas[idx])
    if lam <= 0.0:
        raise ValueError("coefficient extraction needs a positive exponent")

    F = f
    U = u
    if lift is not None and not lift.is_zero():
        if chi is None:
            raise ValueError("a cutoff is required with a lift")
        F = f + eval_laplacian_of_cutoff_lift(lift, chi, grid)
        U = u - eval_lift(lift, grid, chi)

    r = grid.r
    f_j = _mode_profile(F, geom, idx)
    u_j = _mode_profile(U, geom, idx)
    # area integrals against e_j collapse to radial ones times omega/2
    term_f = radial_quadrature_t(f_j * eta(r) * r ** (2.0 - lam), grid.dt)
    # Delta(s^- eta) = r^(-lam) (eta'' + (1 - 2 lam) eta'/r) e_j(phi)
    lap_weight = eta.deriv2(r) + (1.0 - 2.0 * lam) * eta.deriv(r) / r
    term_u = radial_quadrature_t(u_j * lap_weight * r ** (2.0 - lam), grid.dt)
    return eigenfunction_norm_sq(spec, idx) * (term_f + term_u) / (lam * geom.omega)


def corner_taylor_fit(f: ScalarField, order: int, r_cut: float | None = None):
    """Taylor derivatives of f at the corner by least-squares polynomial fit.

    Fits sum c_ij x^i y^j (i+j <= order) on the nodes with r < r_cut
    (default 0.05 R) and returns ({(i,j): i! j! c_ij}, condition_number).
    """
    grid = f.grid
    if r_cut is None:
        r_cut = 0.05 * grid.radius
    mask = grid.r < r_cut
    if mask.sum() < 4 * (order + 1) ** 2:
        raise ValueError("too few nodes below r_cut for a stable corner fit")
    rr, pp = grid.meshes()
    x = (rr[mask, :] * np.cos(pp[mask, :])).ravel() / r_cut
    y = (rr[mask, :] * np.sin(pp[mask, :])).ravel() / r_cut
    cols, index = [], []
    for i in range(order + 1):
        for jj in range(order + 1 - i):
            cols.append(x**i * y**jj)
            index.append((i, jj))
    A = np.stack(cols, axis=1)
    rhs = f.values[mask, :].ravel()
    coef, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    cond = float(np.linalg.cond(A))
    taylor = {}
    for (i, jj), c in zip(index, coef):
        taylor[(i, jj)] = c * math.factorial(i) * math.factorial(jj) / r_cut ** (i + jj)
    return taylor, cond


@dataclass(frozen=True)
class Decomposition:
    """u = regular + chi*P + sum_j S_j chi s_j with the pieces retained."""

    geom: SectorGeometry
    k: int
    epsilon: float
    chi: Cutoff
    lift: Lift
    terms: tuple
    regular: ScalarField
    solution: ScalarField
    meta: dict = field(default_factory=dict)

    def reconstruct(self) -> ScalarField:
        grid = self.solution.grid
        total = self.regular + eval_lift(self.lift, grid, self.chi)
        for term in self.terms:
            total = total + sample_term(term, grid, self.chi)
        return total


def default_epsilon(geom: SectorGeometry, k: int) -> float:
    """Epsilon placing k+1+epsilon mid-gap below the admissible window end."""
    n_window = 3 if geom.bc is BoundaryCondition.MIXED else 2
    spec = build_spectrum(geom, n_window + 1)
    lam_end = float(spec.lambdas[_mode_index(geom, n_window)])
    eps = 0.5 * (lam_end - (k + 1.0))
    if eps <= 0.0:
        raise ValueError(f"k = {k} lies beyond the admissible window for this geometry")
    return min(max(eps, 0.05), 0.95)


def admissible_terms(geom: SectorGeometry, k: int, epsilon: float,
                     margin: float = 1e-6):
    """Indices j whose exponents fall below k+1+epsilon, with window checks.

    Raises when k+1+epsilon sits within ``margin`` of an exponent (the
    expansion is discontinuous there) or beyond the window covered by the
    expansion lemmas (lambda_2 for Dirichlet/Neumann, lambda_3 mixed).
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    s = k + 1.0 + epsilon
    n_window = 3 if geom.bc is BoundaryCondition.MIXED else 2
    spec = build_spectrum(geom, n_window + 1)
    exponents = [float(spec.lambdas[_mode_index(geom, jj)]) for jj in range(1, n_window + 1)]
    for lam in exponents:
        if abs(s - lam) < margin:
            raise ValueError(f"k+1+epsilon = {s} too close to exponent {lam}")
    if s > exponents[-1]:
        raise ValueError(f"k+1+epsilon = {s} beyond the admissible window "
                         f"(< {exponents[-1]})")
    return [jj for jj in range(1, n_window) if exponents[jj - 1] < s]


def decompose(f: ScalarField, geom: SectorGeometry, k: int, chi: Cutoff,
              epsilon: float | None = None, n_modes: int = 32,
              taylor: dict | None = None, eta: Cutoff | None = None,
              solution: ScalarField | None = None) -> Decomposition:
    """Solve and split off lift and singular terms.

    The singular list contains exactly the exponents below k+1+epsilon (at
    most one for Dirichlet/Neumann, two for mixed), with coefficients
    extracted from the computed solution by the dual formula; the regular
    part is what remains.  Corner Taylor data for the lift is fitted from f
    unless supplied.  epsilon defaults to the mid-gap value for (geom, k).
    """
    if epsilon is None:
        epsilon = default_epsilon(geom, k)
    term_ids = admissible_terms(geom, k, epsilon)
    u = solve_poisson(f, geom, n_modes) if solution is None else solution
    grid = same_grid(u, f)

    meta = {"k": k, "epsilon": epsilon, "n_modes": n_modes}
    if k >= 1:
        if taylor is None:
            taylor, cond = corner_taylor_fit(f, k - 1)
            meta["taylor_fit_condition"] = cond
        lift = assemble_P(taylor, k, geom)
    else:
        lift = assemble_P({}, 0, geom)

    terms = []
    for jj in term_ids:
        s_j = stress_intensity_dual(u, f, geom, jj, eta=eta, lift=lift, chi=chi)
        terms.append(singular_function(geom, jj, s_j))

    remainder = u - eval_lift(lift, grid, chi)
    for term in terms:
        remainder = remainder - sample_term(term, grid, chi)
    return Decomposition(geom, k, epsilon, chi, lift, tuple(terms), remainder, u, meta)
