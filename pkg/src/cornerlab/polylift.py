"""Particular solutions of -Delta p = x^i y^j with corner boundary conditions.

Construction mirrors the classical three-step recipe:

1. an exact polynomial particular solution (rational arithmetic, recursion
   on the y-degree),
2. a harmonic-polynomial correction enforcing the boundary condition on the
   leg phi = 0 (Re z^m family for a Dirichlet leg, Im z^m for a Neumann
   leg), still exact,
3. a correction on phi = omega from the families Im z^n / Re z^n, except at
   resonant degrees n -- where sin(n omega) (or cos, for the mixed case)
   vanishes -- which require the log-harmonic functions
   Im(z^n ln z) = r^n (ln r sin n phi + phi cos n phi)           (Dirichlet/mixed)
   Re(z^n ln z) = r^n (ln r cos n phi - phi sin n phi)           (Neumann).

Resonance is decided by integer arithmetic on omega/pi when the opening is
a rational multiple of pi (n*omega/pi in N for Dirichlet/Neumann legs,
n*omega/pi + 1/2 in N for the mixed case); irrational openings are treated
as never resonant.  For omega = pi the step-2 correction already clears the
whole line y = 0 and no log terms arise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cutoffs import Cutoff
from .geometry import BoundaryCondition, SectorGeometry, SINE, COSINE
from .grids import Grid, ScalarField

_TRACE_TOL = 1e-11


class BivariatePoly:
    """Dense-enough bivariate polynomial as a coefficient dict {(m, n): a}."""

    def __init__(self, coeffs=None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v != 0}

    def copy(self):
        return BivariatePoly(dict(self.coeffs))

    @property
    def degree(self) -> int:
        return max((m + n for m, n in self.coeffs), default=0)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return BivariatePoly(out)

    def __mul__(self, scalar):
        return BivariatePoly({k: v * scalar for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + other * (-1)

    def dx(self):
        return BivariatePoly({(m - 1, n): m * a for (m, n), a in self.coeffs.items() if m})

    def dy(self):
        return BivariatePoly({(m, n - 1): n * a for (m, n), a in self.coeffs.items() if n})

    def laplacian(self):
        out = {}
        for (m, n), a in self.coeffs.items():
            if m >= 2:
                out[(m - 2, n)] = out.get((m - 2, n), 0) + m * (m - 1) * a
            if n >= 2:
                out[(m, n - 2)] = out.get((m, n - 2), 0) + n * (n - 1) * a
        return BivariatePoly(out)

    def eval_xy(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        total = np.zeros(np.broadcast(x, y).shape)
        for (m, n), a in self.coeffs.items():
            total = total + float(a) * x**m * y**n
        return total

    def eval_polar(self, r, phi):
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        return self.eval_xy(r * np.cos(phi), r * np.sin(phi))

    def max_coeff(self) -> float:
        return max((abs(float(a)) for a in self.coeffs.values()), default=0.0)


def re_z_power(n: int) -> BivariatePoly:
    """Re z^n as an integer-coefficient polynomial."""
    out = {}
    for l in range(0, n + 1, 2):
        out[(n - l, l)] = math.comb(n, l) * (-1) ** (l // 2)
    return BivariatePoly(out)


def im_z_power(n: int) -> BivariatePoly:
    """Im z^n as an integer-coefficient polynomial."""
    out = {}
    for l in range(1, n + 1, 2):
        out[(n - l, l)] = math.comb(n, l) * (-1) ** ((l - 1) // 2)
    return BivariatePoly(out)


@dataclass(frozen=True)
class LogHarmonic:
    """One term c * r^n (ln r T1(n phi) + phi T2(n phi)).

    kind 'sine' gives (T1, T2) = (sin, cos) (= Im z^n ln z), kind 'cosine'
    gives (cos, -sin) (= Re z^n ln z).  Each term is harmonic and satisfies
    the phi = 0 boundary condition of its kind.
    """

    n: int
    kind: str
    coef: float

    def eval(self, r, phi):
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        ln_r = np.log(r)
        if self.kind == SINE:
            ang = ln_r * np.sin(self.n * phi) + phi * np.cos(self.n * phi)
        else:
            ang = ln_r * np.cos(self.n * phi) - phi * np.sin(self.n * phi)
        return self.coef * r**self.n * ang

    def eval_dr(self, r, phi):
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        ln_r = np.log(r)
        n = self.n
        if self.kind == SINE:
            ang = (n * ln_r + 1) * np.sin(n * phi) + n * phi * np.cos(n * phi)
        else:
            ang = (n * ln_r + 1) * np.cos(n * phi) - n * phi * np.sin(n * phi)
        return self.coef * r ** (n - 1) * ang

    def eval_dphi(self, r, phi):
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        ln_r = np.log(r)
        n = self.n
        if self.kind == SINE:
            ang = (n * ln_r + 1) * np.cos(n * phi) - n * phi * np.sin(n * phi)
        else:
            ang = -(n * ln_r + 1) * np.sin(n * phi) - n * phi * np.cos(n * phi)
        return self.coef * r**n * ang


@dataclass(frozen=True)
class Lift:
    """Polynomial + log-harmonic lift with its resonance bookkeeping.

    ``rhs`` is the monomial combination the lift solves: -Delta(lift) = rhs
    exactly (the log part is harmonic).  ``resonance_set`` is the membership
    set of the applicable lemma for degree budget deg+2, whether or not each
    resonant degree ended up carrying a nonzero log coefficient.
    """

    geom: SectorGeometry
    poly: BivariatePoly
    log_part: tuple = ()
    resonance_set: frozenset = frozenset()
    rhs: BivariatePoly = field(default_factory=BivariatePoly)

    def is_zero(self) -> bool:
        return not self.poly.coeffs and not self.log_part

    def eval(self, r, phi):
        total = self.poly.eval_polar(r, phi)
        for term in self.log_part:
            total = total + term.eval(r, phi)
        return total

    def eval_dr(self, r, phi):
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        x, y = r * np.cos(phi), r * np.sin(phi)
        px = self.poly.dx().eval_xy(x, y)
        py = self.poly.dy().eval_xy(x, y)
        total = np.cos(phi) * px + np.sin(phi) * py
        for term in self.log_part:
            total = total + term.eval_dr(r, phi)
        return total

    def eval_dphi(self, r, phi):
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        x, y = r * np.cos(phi), r * np.sin(phi)
        px = self.poly.dx().eval_xy(x, y)
        py = self.poly.dy().eval_xy(x, y)
        total = r * (-np.sin(phi) * px + np.cos(phi) * py)
        for term in self.log_part:
            total = total + term.eval_dphi(r, phi)
        return total

    def eval_laplacian(self, r, phi):
        """Delta(lift) = Delta(poly part); the log part is harmonic."""
        return self.poly.laplacian().eval_polar(r, phi)

    def scaled(self, c: float) -> "Lift":
        return Lift(self.geom, self.poly * c,
                    tuple(LogHarmonic(t.n, t.kind, t.coef * c) for t in self.log_part),
                    self.resonance_set, self.rhs * c)

    def __add__(self, other: "Lift") -> "Lift":
        return Lift(self.geom, self.poly + other.poly,
                    self.log_part + other.log_part,
                    self.resonance_set | other.resonance_set,
                    self.rhs + other.rhs)


def resonance_membership(geom: SectorGeometry, degree_budget: int) -> frozenset:
    """Membership set of resonant correction degrees for lifts of the given
    total degree budget (k+2 in the lemmas).

    Dirichlet/Neumann: n in {2..budget} with n*omega/pi integer; mixed:
    n in {1..budget} with n*omega/pi + 1/2 integer.  Irrational omega/pi:
    empty.
    """
    ratio = geom.omega_ratio
    if ratio is None:
        return frozenset()
    p, q = ratio.numerator, ratio.denominator
    if geom.bc is BoundaryCondition.MIXED:
        return frozenset(n for n in range(1, degree_budget + 1)
                         if (2 * n * p + q) % (2 * q) == 0)
    return frozenset(n for n in range(2, degree_budget + 1) if (n * p) % q == 0)


def _particular(i: int, j: int) -> BivariatePoly:
    """Exact polynomial q with Delta q = x^i y^j (recursion on j)."""
    denom = Fraction((i + 1) * (i + 2))
    lead = BivariatePoly({(i + 2, j): 1 / denom})
    if j >= 2:
        return lead - _particular(i + 2, j - 2) * Fraction(j * (j - 1), 1) * (1 / denom)
    return lead


def _leg0_is_dirichlet(bc: BoundaryCondition) -> bool:
    return bc in (BoundaryCondition.DIRICHLET, BoundaryCondition.MIXED)


def _legw_is_dirichlet(bc: BoundaryCondition) -> bool:
    return bc is BoundaryCondition.DIRICHLET


def _correct_leg0(poly: BivariatePoly, bc: BoundaryCondition) -> BivariatePoly:
    if _leg0_is_dirichlet(bc):
        # remove the full value trace on y = 0 with Re z^m
        for m in sorted([m for (m, n) in poly.coeffs if n == 0]):
            c = poly.coeffs.get((m, 0), 0)
            if c:
                poly = poly - re_z_power(m) * c
    else:
        # remove the d/dy trace on y = 0 with Im z^(m+1)
        dy = poly.dy()
        for m in sorted([m for (m, n) in dy.coeffs if n == 0]):
            c = dy.coeffs.get((m, 0), 0)
            if c:
                poly = poly - im_z_power(m + 1) * (Fraction(1, m + 1) * c
                                                   if isinstance(c, Fraction)
                                                   else c / (m + 1))
    return poly


def _value_trace(poly: BivariatePoly, omega: float, max_deg: int) -> np.ndarray:
    """Coefficients e_n of p(r cos w, r sin w) = sum e_n r^n."""
    e = np.zeros(max_deg + 1)
    cw, sw = math.cos(omega), math.sin(omega)
    for (m, n), a in poly.coeffs.items():
        e[m + n] += float(a) * cw**m * sw**n
    return e


def _normal_trace(poly: BivariatePoly, omega: float, max_deg: int) -> np.ndarray:
    """Coefficients d_n of (1/r) d_phi p at phi = omega = sum d_n r^(n-1),
    indexed by n (homogeneous degree of p's piece)."""
    d = np.zeros(max_deg + 1)
    cw, sw = math.cos(omega), math.sin(omega)
    px, py = poly.dx(), poly.dy()
    for (m, n), a in px.coeffs.items():
        d[m + n + 1] += -sw * float(a) * cw**m * sw**n
    for (m, n), a in py.coeffs.items():
        d[m + n + 1] += cw * float(a) * cw**m * sw**n
    return d


def _exact_sign_cos(ratio: Fraction, n: int) -> int:
    """cos(n*omega) = +-1 at a Dirichlet/Neumann resonance, exactly."""
    k = (n * ratio.numerator) // ratio.denominator
    return 1 if k % 2 == 0 else -1


def _exact_sign_sin(ratio: Fraction, n: int) -> int:
    """sin(n*omega) = +-1 at a mixed resonance n*omega = (m-1/2)*pi, exactly."""
    m = (2 * n * ratio.numerator + ratio.denominator) // (2 * ratio.denominator)
    return 1 if (m % 2) == 1 else -1


def build_pij(i: int, j: int, geom: SectorGeometry) -> Lift:
    """Lift p with -Delta p = x^i y^j on the sector and the legs' BCs."""
    if i < 0 or j < 0:
        raise ValueError("monomial degrees must be nonnegative")
    k = i + j
    budget = k + 2
    rhs = BivariatePoly({(i, j): 1})
    poly = _particular(i, j) * (-1)
    poly = _correct_leg0(poly, geom.bc)

    resonance = resonance_membership(geom, budget)
    log_terms = []
    omega = geom.omega
    scale = max(1.0, poly.max_coeff())

    if _legw_is_dirichlet(geom.bc):
        trace = _value_trace(poly, omega, budget)
        for n in range(1, budget + 1):
            e_n = trace[n]
            if abs(e_n) <= _TRACE_TOL * scale:
                continue
            if n in resonance:
                t_n = omega * _exact_sign_cos(geom.omega_ratio, n)
                log_terms.append(LogHarmonic(n, SINE, -e_n / t_n))
            else:
                poly = poly - im_z_power(n) * (e_n / math.sin(n * omega))
    elif geom.bc is BoundaryCondition.NEUMANN:
        trace = _normal_trace(poly, omega, budget)
        for n in range(1, budget + 1):
            d_n = trace[n]
            if abs(d_n) <= _TRACE_TOL * scale:
                continue
            if n in resonance:
                t_n = -n * omega * _exact_sign_cos(geom.omega_ratio, n)
                log_terms.append(LogHarmonic(n, COSINE, -d_n / t_n))
            else:
                poly = poly - re_z_power(n) * (d_n / (-n * math.sin(n * omega)))
    else:  # mixed: Dirichlet leg at 0 handled above, Neumann trace at omega
        trace = _normal_trace(poly, omega, budget)
        for n in range(1, budget + 1):
            d_n = trace[n]
            if abs(d_n) <= _TRACE_TOL * scale:
                continue
            if n in resonance:
                t_n = -n * omega * _exact_sign_sin(geom.omega_ratio, n)
                log_terms.append(LogHarmonic(n, SINE, -d_n / t_n))
            else:
                poly = poly - im_z_power(n) * (d_n / (n * math.cos(n * omega)))

    if geom.bc is BoundaryCondition.NEUMANN:
        poly.coeffs.pop((0, 0), None)   # pin the free constant to p(0) = 0

    poly = BivariatePoly({k2: float(v) for k2, v in poly.coeffs.items()})
    return Lift(geom, poly, tuple(log_terms), resonance, rhs)


def assemble_P(taylor: dict, k: int, geom: SectorGeometry) -> Lift:
    """Lift P_(k-1) from Taylor data {(i, j): d^i_x d^j_y f(0)}, i+j <= k-1.

    -Delta P = sum_(i+j<=k-1) x^i y^j taylor[i,j] / (i! j!); for k = 0 the
    zero lift is returned.
    """
    total = Lift(geom, BivariatePoly())
    if k <= 0:
        return total
    for i in range(k):
        for j in range(k - i):
            if (i, j) not in taylor:
                raise KeyError(f"taylor data missing derivative ({i},{j})")
            c = taylor[(i, j)] / (math.factorial(i) * math.factorial(j))
            if c:
                total = total + build_pij(i, j, geom).scaled(c)
    return total


def eval_lift(lift: Lift, grid: Grid, chi: Cutoff | None = None) -> ScalarField:
    """Samples of chi*P on the grid (chi omitted: P itself)."""
    rr, pp = grid.meshes()
    vals = lift.eval(rr, pp)
    if chi is not None:
        vals = vals * chi(rr)
    return ScalarField(grid, vals)


def eval_laplacian_of_cutoff_lift(lift: Lift, chi: Cutoff, grid: Grid) -> ScalarField:
    """Samples of Delta(chi * P) = chi*Delta P + 2 chi' d_r P + (chi''+chi'/r) P."""
    rr, pp = grid.meshes()
    vals = (chi(rr) * lift.eval_laplacian(rr, pp)
            + 2.0 * chi.deriv(rr) * lift.eval_dr(rr, pp)
            + chi.laplacian_factor(rr) * lift.eval(rr, pp))
    return ScalarField(grid, vals)


def pde_residual(lift: Lift, n_samples: int = 400, seed: int = 7) -> float:
    """Max relative error of -Delta(poly part) = rhs at random sector points.

    The identity holds at the coefficient level; this certifies the float
    coefficient tables.
    """
    rng = np.random.default_rng(seed)
    r = np.exp(rng.uniform(np.log(1e-3), 0.0, n_samples)) * lift.geom.radius
    phi = rng.uniform(0.0, lift.geom.omega, n_samples)
    lhs = -lift.eval_laplacian(r, phi)
    rhs = lift.rhs.eval_polar(r, phi)
    scale = max(np.max(np.abs(rhs)), 1e-30)
    return float(np.max(np.abs(lhs - rhs)) / scale)


def boundary_residual(lift: Lift, n_cheb: int = 64) -> float:
    """Max relative boundary defect of the lift on both legs.

    Value on Dirichlet legs, r * normal derivative on Neumann legs (scaled
    to keep the residual dimensionless), sampled at Chebyshev radii.
    """
    geom = lift.geom
    k = np.arange(1, n_cheb + 1)
    r = geom.radius * 0.5 * (1.0 + np.cos((2 * k - 1) * math.pi / (2 * n_cheb)))
    r = np.clip(r, geom.radius * 1e-9, geom.radius)
    scale = max(np.max(np.abs(lift.eval(r, geom.omega / 2))), lift.poly.max_coeff(), 1e-30)

    defects = []
    if _leg0_is_dirichlet(geom.bc):
        defects.append(lift.eval(r, np.zeros_like(r)))
    else:
        defects.append(lift.eval_dphi(r, np.zeros_like(r)))
    if _legw_is_dirichlet(geom.bc):
        defects.append(lift.eval(r, np.full_like(r, geom.omega)))
    else:
        defects.append(lift.eval_dphi(r, np.full_like(r, geom.omega)))
    return float(max(np.max(np.abs(d)) for d in defects) / scale)


def kernel_harmonic(geom: SectorGeometry, n: int) -> Lift:
    """A harmonic polynomial satisfying both leg BCs (a lift-kernel element).

    Exists exactly at the resonant degrees; used to probe invariance of the
    stress intensities under the lift's kernel ambiguity.
    """
    if n not in resonance_membership(geom, n):
        raise ValueError(f"degree {n} is not resonant for this geometry")
    if geom.bc is BoundaryCondition.NEUMANN:
        poly = re_z_power(n)
    else:
        poly = im_z_power(n)
    poly = BivariatePoly({k: float(v) for k, v in poly.coeffs.items()})
    return Lift(geom, poly, (), frozenset({n}), BivariatePoly())
