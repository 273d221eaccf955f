"""Closed-form fields built from complex monomials z^a zbar^b ln^p z ln^q zbar.

The sector fields that matter analytically -- r^beta * trig(beta*phi),
harmonic polynomials, log-harmonic resonance terms, plain powers r^beta,
phi- and ln r-factors -- are all real parts of finite combinations of

    c * z^a * zbar^b * (ln z)^p * (ln zbar)^q,      z = r e^{i phi},

with the principal branch on the sector (phi in [0, 2 pi)).  This family is
closed under d/dx = d/dz + d/dzbar and d/dy = i(d/dz - d/dzbar), which gives
machine-accurate Cartesian derivative stacks of any order: exactly what the
weighted-norm and K-functional instruments need to avoid finite-difference
noise on singular model fields.

Building blocks: r = z^(1/2) zbar^(1/2), ln r = (ln z + ln zbar)/2,
phi = (ln z - ln zbar)/(2i).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ZTerm:
    coef: complex
    a: float        # exponent of z
    b: float        # exponent of zbar
    p: int = 0      # power of ln z
    q: int = 0      # power of ln zbar


class ZField:
    """Real part of a finite sum of ZTerms, with exact derivative algebra."""

    def __init__(self, terms):
        self.terms = [t for t in terms if t.coef != 0]

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def power_trig(beta: float, kind: str, log_power: int = 0,
                   phi_factor: bool = False, coef: float = 1.0) -> "ZField":
        """r^beta sin(beta phi) or r^beta cos(beta phi), optionally times
        ln r or times phi (the resonance variants)."""
        # z^beta = r^beta e^{i beta phi}:  Re -> cos, Im = Re(-i z^beta) -> sin
        base = -1j if kind == "sine" else 1.0
        terms = [ZTerm(coef * base, beta, 0.0)]
        out = ZField(terms)
        if log_power:
            for _ in range(log_power):
                out = out * ZField.ln_r()
        if phi_factor:
            out = out * ZField.angle()
        return out

    @staticmethod
    def log_harmonic(n: int, kind: str, coef: float = 1.0) -> "ZField":
        """Im(z^n ln z) = r^n (ln r sin n phi + phi cos n phi) for 'sine',
        Re(z^n ln z) = r^n (ln r cos n phi - phi sin n phi) for 'cosine'."""
        base = -1j if kind == "sine" else 1.0
        return ZField([ZTerm(coef * base, float(n), 0.0, 1, 0)])

    @staticmethod
    def r_power(beta: float, coef: float = 1.0) -> "ZField":
        return ZField([ZTerm(coef, beta / 2.0, beta / 2.0)])

    @staticmethod
    def ln_r() -> "ZField":
        return ZField([ZTerm(0.5, 0.0, 0.0, 1, 0), ZTerm(0.5, 0.0, 0.0, 0, 1)])

    @staticmethod
    def angle() -> "ZField":
        return ZField([ZTerm(-0.5j, 0.0, 0.0, 1, 0), ZTerm(0.5j, 0.0, 0.0, 0, 1)])

    @staticmethod
    def monomial_xy(i: int, j: int) -> "ZField":
        """x^i y^j as a ZField (binomial expansion of ((z+zbar)/2)^i ((z-zbar)/2i)^j)."""
        from math import comb

        terms = {}
        for ki in range(i + 1):
            for kj in range(j + 1):
                coef = (comb(i, ki) * comb(j, kj) * (0.5**i)
                        * ((-1) ** (j - kj)) * (0.5 / 1j) ** j)
                a = ki + kj
                b = (i - ki) + (j - kj)
                terms[(a, b)] = terms.get((a, b), 0.0) + coef
        return ZField([ZTerm(c, float(a), float(b)) for (a, b), c in terms.items()])

    # -- algebra ------------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, ZField):
            out = [ZTerm(s.coef * o.coef, s.a + o.a, s.b + o.b, s.p + o.p, s.q + o.q)
                   for s in self.terms for o in other.terms]
            return ZField(out)
        return ZField([ZTerm(t.coef * other, t.a, t.b, t.p, t.q) for t in self.terms])

    __rmul__ = __mul__

    def __add__(self, other):
        return ZField(self.terms + other.terms)

    def dz(self) -> "ZField":
        out = []
        for t in self.terms:
            if t.a != 0:
                out.append(ZTerm(t.coef * t.a, t.a - 1, t.b, t.p, t.q))
            if t.p != 0:
                out.append(ZTerm(t.coef * t.p, t.a - 1, t.b, t.p - 1, t.q))
        return ZField(out)

    def dzbar(self) -> "ZField":
        out = []
        for t in self.terms:
            if t.b != 0:
                out.append(ZTerm(t.coef * t.b, t.a, t.b - 1, t.p, t.q))
            if t.q != 0:
                out.append(ZTerm(t.coef * t.q, t.a, t.b - 1, t.p, t.q - 1))
        return ZField(out)

    def dx(self) -> "ZField":
        return self.dz() + self.dzbar()

    def dy(self) -> "ZField":
        return 1j * self.dz() + (-1j) * self.dzbar()

    def laplacian(self) -> "ZField":
        # Delta = 4 d/dz d/dzbar
        return 4.0 * self.dz().dzbar()

    # -- evaluation ----------------------------------------------------------

    def eval(self, r, phi):
        """Evaluate (the real part) at polar points; arrays broadcast."""
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        ln_r = np.log(r)
        total = np.zeros(np.broadcast(r, phi).shape, dtype=complex)
        for t in self.terms:
            mag = np.exp((t.a + t.b) * ln_r)
            ang = np.exp(1j * (t.a - t.b) * phi)
            lz = (ln_r + 1j * phi) ** t.p if t.p else 1.0
            lzb = (ln_r - 1j * phi) ** t.q if t.q else 1.0
            total = total + t.coef * mag * ang * lz * lzb
        return np.real(total)

    def derivative(self, i: int, j: int) -> "ZField":
        out = self
        for _ in range(i):
            out = out.dx()
        for _ in range(j):
            out = out.dy()
        return out

    def derivative_table(self, max_order: int) -> dict:
        """{(i, j): ZField} for all i + j <= max_order, computed recursively."""
        table = {(0, 0): self}
        for order in range(1, max_order + 1):
            for i in range(order + 1):
                j = order - i
                if i > 0:
                    table[(i, j)] = table[(i - 1, j)].dx()
                else:
                    table[(i, j)] = table[(i, j - 1)].dy()
        return table
