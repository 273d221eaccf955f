"""Radial cutoff functions with closed-form derivatives.

The profile is the quintic smoothstep: identically 1 on [0, a], identically
0 on [b, inf), C^2 across the joins.  Two continuous derivatives suffice
because only first and second derivatives of the cutoff ever enter the
formulas (through Delta(chi * p) = chi*Delta p + 2 chi' d_r p + (chi'' +
chi'/r) p).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import smoothstep_quintic


@dataclass(frozen=True)
class Cutoff:
    """chi(r): 1 on [0, inner_radius], 0 on [outer_radius, inf), quintic in between."""

    inner_radius: float
    outer_radius: float

    def __post_init__(self):
        if not 0.0 <= self.inner_radius < self.outer_radius:
            raise ValueError("need 0 <= inner_radius < outer_radius")

    def _s(self, r):
        width = self.outer_radius - self.inner_radius
        return np.clip((np.asarray(r, dtype=float) - self.inner_radius) / width, 0.0, 1.0), width

    def __call__(self, r):
        s, _ = self._s(r)
        return smoothstep_quintic(s, 0)

    def deriv(self, r):
        s, width = self._s(r)
        return smoothstep_quintic(s, 1) / width

    def deriv2(self, r):
        s, width = self._s(r)
        return smoothstep_quintic(s, 2) / width**2

    def laplacian_factor(self, r):
        """chi'' + chi'/r, the radial Laplacian applied to chi."""
        r = np.asarray(r, dtype=float)
        return self.deriv2(r) + self.deriv(r) / r


class SmoothCutoff:
    """C^order variant of Cutoff (polynomial step of degree 2*order+1).

    Same interface and shape as Cutoff; the extra smoothness keeps Simpson
    quadrature of chi'' at fourth order (the quintic's second derivative has
    kinks) and keeps products chi * u inside H^order.  Used as the default
    dual extraction cutoff, inside the K-functional splitting family and for
    manufactured solutions.
    """

    def __init__(self, inner_radius: float, outer_radius: float, order: int = 4):
        import math

        if not 0.0 <= inner_radius < outer_radius:
            raise ValueError("need 0 <= inner_radius < outer_radius")
        self.inner_radius = inner_radius
        self.outer_radius = outer_radius
        self.order = order
        base = np.zeros(2 * order + 2)          # integral of s^order (1-s)^order
        for m in range(order + 1):
            base[order + 1 + m] = math.comb(order, m) * (-1.0) ** m / (order + 1 + m)
        self._poly = base / np.polynomial.polynomial.polyval(1.0, base)

    def _eval(self, r, order):
        width = self.outer_radius - self.inner_radius
        s = (np.asarray(r, dtype=float) - self.inner_radius) / width
        coeff = self._poly
        for _ in range(order):
            coeff = np.polynomial.polynomial.polyder(coeff)
        out = np.polynomial.polynomial.polyval(np.clip(s, 0.0, 1.0), coeff)
        if order == 0:
            out = np.where(s <= 0.0, 0.0, np.where(s >= 1.0, 1.0, out))
            return 1.0 - out
        out = np.where((s <= 0.0) | (s >= 1.0), 0.0, out)
        return -out / width**order

    def __call__(self, r):
        return self._eval(r, 0)

    def deriv(self, r):
        return self._eval(r, 1)

    def deriv2(self, r):
        return self._eval(r, 2)

    def deriv_n(self, r, order: int):
        if order == 0:
            return self._eval(r, 0)
        return self._eval(r, order)

    def laplacian_factor(self, r):
        r = np.asarray(r, dtype=float)
        return self.deriv2(r) + self.deriv(r) / r
