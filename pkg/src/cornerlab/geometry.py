"""Sector geometry and corner eigen-spectra.

A plane sector of opening ``omega`` with apex at the origin carries one of
three boundary conditions on its two legs: Dirichlet on both, Neumann on
both, or Dirichlet on phi=0 / Neumann on phi=omega (mixed).  Separation of
variables produces the corner eigenvalues

    Dirichlet:  n*pi/omega,        n = 1, 2, ...   (sine)
    Neumann:    n*pi/omega,        n = 0, 1, ...   (cosine)
    mixed:      (n-1/2)*pi/omega,  n = 1, 2, ...   (sine)

which drive every expansion downstream.  For resonance arithmetic (integer
membership tests on n*omega/pi) the opening angle may be given as an exact
rational multiple of pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

SINE = "sine"
COSINE = "cosine"


class BoundaryCondition(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    MIXED = "mixed"


@dataclass(frozen=True)
class SectorGeometry:
    """Opening angle, outer radius and leg boundary condition of a sector.

    ``omega_ratio``, if given, is the exact value omega/pi as a Fraction and
    is used for resonance decisions; ``omega`` itself is its float value.
    """

    omega: float
    radius: float = 1.0
    bc: BoundaryCondition = BoundaryCondition.DIRICHLET
    omega_ratio: Fraction | None = field(default=None)

    def __post_init__(self):
        if not (0.0 < self.omega < 2.0 * math.pi):
            raise ValueError(f"opening angle must lie in (0, 2*pi), got {self.omega}")
        if self.radius <= 0.0:
            raise ValueError("outer radius must be positive")
        if self.omega_ratio is not None:
            if self.omega_ratio <= 0 or self.omega_ratio >= 2:
                raise ValueError("omega_ratio must lie in (0, 2)")
            if not math.isclose(float(self.omega_ratio) * math.pi, self.omega, rel_tol=1e-12):
                raise ValueError("omega and omega_ratio disagree")
        object.__setattr__(self, "bc", BoundaryCondition(self.bc))

    @classmethod
    def from_pi_fraction(cls, num: int, den: int = 1, radius: float = 1.0,
                         bc=BoundaryCondition.DIRICHLET) -> "SectorGeometry":
        ratio = Fraction(num, den)
        return cls(float(ratio) * math.pi, radius, BoundaryCondition(bc), ratio)

    @property
    def is_half_plane(self) -> bool:
        """omega == pi, where the corner is no corner and the solution is as
        smooth as the data (endpoint routines report a smooth-case result)."""
        if self.omega_ratio is not None:
            return self.omega_ratio == 1
        return math.isclose(self.omega, math.pi, rel_tol=1e-12)

    def first_exponent(self) -> float:
        """Leading corner exponent lambda_1 for this boundary condition."""
        if self.bc is BoundaryCondition.MIXED:
            return 0.5 * math.pi / self.omega
        return math.pi / self.omega


@dataclass(frozen=True)
class EigenSpectrum:
    """Ascending corner eigenvalues with their angular eigenfunction kind."""

    omega: float
    lambdas: np.ndarray
    kinds: tuple
    includes_zero: bool = False

    def __len__(self):
        return len(self.lambdas)

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        if np.any(np.diff(lam) <= 0):
            raise ValueError("eigenvalues must be strictly increasing")
        object.__setattr__(self, "lambdas", lam)


def build_spectrum(geom: SectorGeometry, n_max: int) -> EigenSpectrum:
    """First ``n_max`` corner eigenvalues of the sector, kinds per BC."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    step = math.pi / geom.omega
    if geom.bc is BoundaryCondition.DIRICHLET:
        lambdas = step * np.arange(1, n_max + 1)
        kinds = (SINE,) * n_max
        zero = False
    elif geom.bc is BoundaryCondition.NEUMANN:
        lambdas = step * np.arange(0, n_max)
        kinds = (COSINE,) * n_max
        zero = True
    else:
        lambdas = step * (np.arange(1, n_max + 1) - 0.5)
        kinds = (SINE,) * n_max
        zero = False
    return EigenSpectrum(geom.omega, lambdas, kinds, zero)


def eigenfunction(spec: EigenSpectrum, n: int, phi):
    """Angular eigenfunction sin(lambda_n*phi) or cos(lambda_n*phi).

    Satisfies the corner boundary conditions exactly at phi = 0 and
    phi = omega.  ``phi`` may be a scalar or an array.
    """
    if not 0 <= n < len(spec.lambdas):
        raise IndexError(f"mode index {n} out of range for spectrum of size {len(spec.lambdas)}")
    lam = spec.lambdas[n]
    phi = np.asarray(phi, dtype=float)
    if spec.kinds[n] == SINE:
        values = np.sin(lam * phi)
    else:
        values = np.cos(lam * phi) if lam > 0 else np.ones_like(phi)
    return values if values.ndim else float(values)


def eigenfunction_norm_sq(spec: EigenSpectrum, n: int) -> float:
    """Exact value of the angular integral of the squared eigenfunction.

    omega/2 for every sine/cosine mode, omega for the Neumann constant mode.
    """
    if spec.includes_zero and n == 0:
        return spec.omega
    return 0.5 * spec.omega
