"""Catalog of right-hand sides and manufactured solutions.

Every entry returns plain callables (r, phi) -> values so the same source
can be sampled on any grid, dilated, or differentiated in closed form where
needed.  The manufactured family u = chi(r) * sum c_n r^(lambda_n) e_n(phi)
has f = -Delta u in closed form because the singular factors are harmonic:
only the cutoff commutator survives.
"""

from __future__ import annotations

import math

import numpy as np

from .cutoffs import Cutoff
from .geometry import SectorGeometry, build_spectrum, eigenfunction
from .grids import Grid, ScalarField


def radial_bump(a: float, b: float):
    """C-infinity bump supported on [a, b], peak value 1."""
    if not 0.0 < a < b:
        raise ValueError("need 0 < a < b")

    def w(r):
        r = np.asarray(r, dtype=float)
        s = (2.0 * r - (a + b)) / (b - a)
        out = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        si = s[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - si * si))
        return out

    return w


def modal_bump(geom: SectorGeometry, n: int, a: float, b: float):
    """bump(r) * e_n(phi): single angular mode, supported away from corner."""
    spec = build_spectrum(geom, n + 1)
    w = radial_bump(a, b)

    def f(r, phi):
        return w(r) * eigenfunction(spec, n, phi)

    return f


def gaussian_bump(geom: SectorGeometry, r0: float = 0.5, phi0: float | None = None,
                  width: float = 0.12):
    """Cartesian Gaussian centered inside the sector (all modes present)."""
    if phi0 is None:
        phi0 = 0.5 * geom.omega
    x0, y0 = r0 * math.cos(phi0), r0 * math.sin(phi0)

    def f(r, phi):
        r = np.asarray(r, dtype=float)
        x = r * np.cos(phi)
        y = r * np.sin(phi)
        return np.exp(-((x - x0) ** 2 + (y - y0) ** 2) / width**2)

    return f


def monomial_cutoff(i: int, j: int, chi: Cutoff):
    """x^i y^j * chi(r): smooth data with prescribed corner Taylor content."""

    def f(r, phi):
        r = np.asarray(r, dtype=float)
        return (r * np.cos(phi)) ** i * (r * np.sin(phi)) ** j * chi(r)

    return f


def manufactured_solution(geom: SectorGeometry, chi: Cutoff, coeffs: dict):
    """u = chi(r) * sum_n c_n r^lambda_n e_n(phi) and f = -Delta u.

    ``coeffs`` maps mode index -> coefficient.  Returns (u, f) callables.
    The mode sum is harmonic, so f = -(2 chi' d_r + (chi'' + chi'/r)) u_core.
    """
    n_max = max(coeffs) + 1
    spec = build_spectrum(geom, n_max)
    items = [(spec.lambdas[n], n, c) for n, c in coeffs.items()]

    def core(r, phi):
        r = np.asarray(r, dtype=float)
        total = 0.0
        for lam, n, c in items:
            total = total + c * r**lam * eigenfunction(spec, n, phi)
        return total

    def core_dr(r, phi):
        r = np.asarray(r, dtype=float)
        total = 0.0
        for lam, n, c in items:
            total = total + c * lam * r ** (lam - 1.0) * eigenfunction(spec, n, phi)
        return total

    def u(r, phi):
        return chi(np.asarray(r, dtype=float)) * core(r, phi)

    def f(r, phi):
        r = np.asarray(r, dtype=float)
        return -(2.0 * chi.deriv(r) * core_dr(r, phi)
                 + chi.laplacian_factor(r) * core(r, phi))

    return u, f


def dilated(fn, delta: float):
    """x -> fn(x / delta) in polar form."""

    def g(r, phi):
        return fn(np.asarray(r, dtype=float) / delta, phi)

    return g


def sample(fn, grid: Grid) -> ScalarField:
    return ScalarField.from_function(grid, fn)
