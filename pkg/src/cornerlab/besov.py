"""Weighted norms, K-functional curves and regularity-exponent estimation.

Membership of u in the Besov space B^s_(p,infty) between two Sobolev
levels s0 < s2 is equivalent to the decay K(t, u) = O(t^theta) with
theta = (s - s0)/(s2 - s0) of the K-functional

    K(t, u) = inf_v ||u - v||_(s0,p) + t ||v||_(s2,p).

The infimum is upper-bounded over a structured two-parameter family: a
corner cutoff at radius rho (smooth, vanishing inside rho/2) times an
angular mode truncation at level N.  That family is exactly how the sharp
memberships of corner singularity functions are proved, so the measured
log-log slope of the upper bound reproduces the true decay order; the
fitted slope between dyadic t values, restricted to the window where the
optimizing rho stays inside the lattice, turns smoothness into a number.

Norms: K^(s,p)_gamma carries the radial weight r^(|alpha|-s+gamma) on each
derivative order; W^(s,p) is the plain Sobolev norm (gamma chosen to cancel
the weight).  Derivative stacks come from closed forms where available
(ZField inputs) and from log-polar finite differences for grid fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cutoffs import SmoothCutoff
from .derivatives import derivative_table, derivative_table_analytic
from .geometry import SectorGeometry, build_spectrum
from .grids import Grid, ScalarField
from .modal import project, reconstruct
from .quadrature import radial_quadrature
from .zfield import ZField


@dataclass(frozen=True)
class WeightedNormSpec:
    """Smoothness s, radial weight exponent gamma, integrability p."""

    s: int
    gamma: float = 0.0
    p: float = 2.0

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("smoothness must be nonnegative")
        if not 1.0 < self.p < math.inf:
            raise ValueError("p must lie in (1, inf)")


def _norm_from_table(table: dict, grid: Grid, s: int, gamma: float, p: float,
                     weighted: bool) -> float:
    total = 0.0
    for (i, j), dvals in table.items():
        order = i + j
        if order > s:
            continue
        w = grid.r[:, None] ** (order - s + gamma) if weighted else 1.0
        integrand = np.abs(w * dvals) ** p
        ang = np.trapezoid(integrand, dx=grid.dphi, axis=1)
        total += radial_quadrature(ang, grid.r)
    return total ** (1.0 / p)


def _table_of(u, grid: Grid | None, s: int) -> tuple:
    if isinstance(u, ScalarField):
        return derivative_table(u.values, u.grid, s), u.grid
    if isinstance(u, ZField):
        if grid is None:
            raise ValueError("a grid is required for closed-form fields")
        return derivative_table_analytic(u, grid, s), grid
    raise TypeError("expected ScalarField or ZField")


def weighted_norm(u, spec: WeightedNormSpec, grid: Grid | None = None) -> float:
    """K^(s,p)_gamma norm: (sum_(|a|<=s) ||r^(|a|-s+gamma) D^a u||_p^p)^(1/p)."""
    table, g = _table_of(u, grid, spec.s)
    return _norm_from_table(table, g, spec.s, spec.gamma, spec.p, weighted=True)


def sobolev_norm(u, s: int, p: float = 2.0, grid: Grid | None = None) -> float:
    """Plain W^(s,p) norm over the sector."""
    table, g = _table_of(u, grid, s)
    return _norm_from_table(table, g, s, 0.0, p, weighted=False)


# ------------------------------------------------------- splitting family

def _truncations(u, grid: Grid, geom: SectorGeometry | None, n_list):
    """Candidate smooth-direction fields u_N (angular truncations of u)."""
    if isinstance(u, ZField) or geom is None:
        return {None: u}
    out = {}
    spec = build_spectrum(geom, max(n_list))
    modal = project(u, spec, max(n_list))
    for n in n_list:
        if n >= modal.n_modes:
            out[n] = u
        else:
            from .modal import ModalField

            out[n] = reconstruct(ModalField(spec, grid, modal.coeffs[:n]))
    return out


def _values_of(u, grid: Grid) -> np.ndarray:
    if isinstance(u, ScalarField):
        return u.values
    rrm, ppm = grid.meshes()
    return np.asarray(u.eval(rrm, ppm), dtype=float)


def _split_pair(u_vals: np.ndarray, core_vals: np.ndarray, grid: Grid,
                rho: float, levels, p: float):
    """(||u - v||_(s0,p), ||v||_(s2,p)) for v = (1 - cut_rho) * u_N,
    where cut_rho is the C^4 cutoff that is 1 inside rho/2 and 0 outside rho."""
    s0, s2 = levels
    cut = SmoothCutoff(0.5 * rho, rho)
    v_vals = (1.0 - cut(grid.r))[:, None] * core_vals
    a = sobolev_norm(ScalarField(grid, u_vals - v_vals), s0, p)
    b = sobolev_norm(ScalarField(grid, v_vals), s2, p)
    return a, b


@dataclass(frozen=True)
class KCurve:
    """Sampled K-functional decay between two smoothness levels."""

    t: np.ndarray
    K: np.ndarray
    levels: tuple
    p: float
    slope: float
    window: tuple           # (first index, last index) of the fit window
    fit_residual: float
    argmin_rho: np.ndarray

    @property
    def exponent(self) -> float:
        s0, s2 = self.levels
        return s0 + self.slope * (s2 - s0)


def k_functional(u, levels, t: float, p: float = 2.0, grid: Grid | None = None,
                 geom: SectorGeometry | None = None, rho_list=None,
                 n_list=(8, 32)) -> float:
    """Upper bound on K(t, u) over the splitting family (single t)."""
    curve = k_curve(u, levels, p=p, grid=grid, geom=geom,
                    t_list=np.array([t]), rho_list=rho_list, n_list=n_list,
                    fit=False)
    return float(curve.K[0])


def k_curve(u, levels, p: float = 2.0, grid: Grid | None = None,
            geom: SectorGeometry | None = None, t_list=None, rho_list=None,
            n_list=(8, 32), fit: bool = True, window_trim: int = 2,
            deep_fraction: float = 0.5, subtract_corner_mean: bool = True) -> KCurve:
    """K(t) samples over dyadic t with a least-squares log-log slope.

    The candidate lattice always contains the uncut splittings (rho = 0,
    i.e. v = u_N), so smooth fields saturate at slope 1 instead of hitting
    an artificial floor.  The fit window keeps the t values whose optimizing
    cutoff radius lies strictly inside the rho lattice (or at rho = 0),
    drops the near-floor plateau, trims ``window_trim`` points at both ends,
    and then fits on the deep-t fraction of what remains -- slowly varying
    prefactors (the ln r of resonant terms) bias the local slope by
    O(1/|ln t|), so deep windows measure the true decay order.

    Grid fields have their corner mean removed before splitting (constants
    are smooth; a Neumann solution's nonzero corner value would otherwise
    drown the r^lambda content of the cutoff family).  The angular mean of
    the leading eigenfunction vanishes, so the estimate does not bite into
    the singular content.
    """
    s0, s2 = levels
    if not (isinstance(s0, int) and isinstance(s2, int) and 0 <= s0 < s2 <= 4):
        raise ValueError("levels must be integers with 0 <= s0 < s2 <= 4")
    if isinstance(u, ScalarField):
        grid = u.grid
        if subtract_corner_mean:
            rows = max(2, int(0.02 * len(grid.r)))
            c0 = float(np.mean(np.trapezoid(u.values[:rows], dx=grid.dphi, axis=1))
                       / grid.omega)
            u = ScalarField(grid, u.values - c0)
    if grid is None:
        raise ValueError("a grid is required")
    if rho_list is None:
        r_lo = grid.r[0] * 16.0
        r_hi = 0.5 * grid.radius
        count = max(int(math.log2(r_hi / r_lo) * 2), 4)
        rho_list = np.exp(np.linspace(math.log(r_lo), math.log(r_hi), count))
    rho_list = np.asarray(rho_list, dtype=float)
    if t_list is None:
        m_max = min(int(s2 * math.log2(rho_list.max() / rho_list.min())) + 2, 120)
        t_list = 2.0 ** (-np.arange(0, m_max, dtype=float))
    t_list = np.asarray(t_list, dtype=float)

    u_vals = _values_of(u, grid)
    pairs = []   # (a, b, rho) over the lattice; rho = 0 means no cutoff
    for u_n in _truncations(u, grid, geom, n_list).values():
        core = _values_of(u_n, grid)
        a0 = sobolev_norm(ScalarField(grid, u_vals - core), s0, p)
        b0 = sobolev_norm(ScalarField(grid, core), s2, p)
        pairs.append((a0, b0, 0.0))
        for rho in rho_list:
            a, b = _split_pair(u_vals, core, grid, float(rho), levels, p)
            pairs.append((a, b, float(rho)))
    a_arr = np.array([q[0] for q in pairs])
    b_arr = np.array([q[1] for q in pairs])
    rho_arr = np.array([q[2] for q in pairs])

    costs = a_arr[None, :] + t_list[:, None] * b_arr[None, :]
    best = np.argmin(costs, axis=1)
    K = costs[np.arange(len(t_list)), best]
    arg_rho = rho_arr[best]

    slope, resid, window = math.nan, math.nan, (0, 0)
    if fit and len(t_list) > 2 * window_trim + 3:
        # the scaling window is where the optimizing cutoff radius moves
        # strictly inside the lattice; fields that never leave the uncut
        # candidate are at (or above) the bracket ceiling, slope 1
        interior = ((arg_rho > rho_list.min() * 1.0001)
                    & (arg_rho < rho_list.max() * 0.9999))
        floor = np.min(a_arr)
        above_floor = K > 3.0 * floor
        idx = np.where(interior & above_floor)[0]
        if idx.size <= 2 * window_trim + 3:
            idx = np.where((arg_rho == 0.0) & above_floor)[0]
        if idx.size > 2 * window_trim + 3:
            idx = idx[window_trim:-window_trim] if window_trim else idx
            keep = max(int(len(idx) * deep_fraction), min(6, len(idx)))
            idx = idx[-keep:]
            lt, lk = np.log(t_list[idx]), np.log(K[idx])
            coef = np.polyfit(lt, lk, 1)
            slope = float(coef[0])
            resid = float(np.max(np.abs(np.polyval(coef, lt) - lk)))
            window = (int(idx[0]), int(idx[-1]))
    return KCurve(t_list, K, (s0, s2), p, slope, window, resid, arg_rho)


def expected_endpoint_exponent(geom: SectorGeometry):
    """The shift-theorem ceiling 1 + pi/omega (1 + pi/(2 omega) mixed).

    Returns (exponent, smooth_case): for the Dirichlet/Neumann half-plane
    the corner is no corner, the solution is as smooth as the data permits,
    and no finite endpoint applies (exponent is inf, smooth_case True).
    """
    from .geometry import BoundaryCondition

    if geom.is_half_plane and geom.bc is not BoundaryCondition.MIXED:
        return math.inf, True
    return 1.0 + geom.first_exponent(), False


def regularity_exponent(u, p: float = 2.0, levels=(0, 2), grid: Grid | None = None,
                        geom: SectorGeometry | None = None, n_list=(8, 32),
                        residual_tol: float = 0.35):
    """sup{s : u in B^s_(p,infty)} estimated from the K-curve slope.

    Returns (exponent, KCurve).  A slope near 1 means the true exponent
    sits at or above the bracket ceiling s2.  Raises ValueError when the
    log-log curve is too far from linear to trust ("inconclusive").
    """
    curve = k_curve(u, levels, p=p, grid=grid, geom=geom, n_list=n_list)
    if math.isnan(curve.slope):
        raise ValueError("inconclusive: no usable fit window on the K-curve")
    if curve.fit_residual > residual_tol:
        raise ValueError(f"inconclusive: log-log fit residual {curve.fit_residual:.3f} "
                         f"exceeds {residual_tol}")
    return curve.exponent, curve


def check_curve_shape(curve: KCurve, tol: float = 1e-9) -> bool:
    """K nondecreasing and K(t)/t nonincreasing (concavity proxies)."""
    k, t = curve.K, curve.t
    order = np.argsort(t)
    k, t = k[order], t[order]
    ok_up = bool(np.all(np.diff(k) >= -tol * k[:-1]))
    ratio = k / t
    ok_down = bool(np.all(np.diff(ratio) <= tol * ratio[:-1]))
    return ok_up and ok_down


def sif_functional_bound_probe(geom: SectorGeometry, f_fn, grid: Grid,
                               deltas=None, j: int = 1, p_values=(2.0,)):
    """Dilation table of the stress-intensity functional.

    For f_delta = f(./delta) the defining integral scales exactly as
    |S(f_delta)| = delta^(2-lambda_j) |S(f)| (k = 0 case); the table records
    S(f_delta), the fitted log-log slope (expected 2 - lambda_j) and, for
    each requested p, the companion weighted norm
    N_p(f) = ||r^(2/p' - lambda_j) f||_Lp which shares the same scaling --
    the homogeneity balance underlying boundedness of S on the sharp
    Besov space.
    """
    from .sif import stress_intensity_direct
    from .sources import dilated, sample

    if deltas is None:
        deltas = 2.0 ** (-np.arange(0, 8, dtype=float))
    deltas = np.asarray(deltas, dtype=float)
    spec = build_spectrum(geom, j + 2)
    from .sif import _mode_index

    lam = float(spec.lambdas[_mode_index(geom, j)])

    rows = []
    for d in deltas:
        fd = sample(dilated(f_fn, d), grid)
        s_val = stress_intensity_direct(fd, geom, j)
        row = {"delta": float(d), "S": s_val}
        for p in p_values:
            expo = 2.0 * (1.0 - 1.0 / p) - lam
            w = grid.r[:, None] ** expo
            vals = np.abs(w * fd.values) ** p
            ang = np.trapezoid(vals, dx=grid.dphi, axis=1)
            row[f"N_p{p:g}"] = radial_quadrature(ang, grid.r) ** (1.0 / p)
        rows.append(row)

    s_vals = np.array([abs(r["S"]) for r in rows])
    coef = np.polyfit(np.log(deltas), np.log(s_vals), 1)
    return {
        "lambda": lam,
        "rows": rows,
        "fitted_slope": float(coef[0]),
        "expected_slope": 2.0 - lam,
        "ratio_checks": {
            f"N_p{p:g}": [r["S"] / r[f"N_p{p:g}"] for r in rows] for p in p_values
        },
    }
