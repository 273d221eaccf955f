"""Log-radial / uniform-angular tensor grids and scalar fields on them.

The radial nodes are geometric, r_i = R * q^(n_r - i), so that t = ln r is
uniformly spaced.  This makes the Euler substitution r = e^t exact on nodes:
radial quadrature, the Mellin transform and the per-mode radial solves all
become uniform-grid operations in t.  The origin is excluded (r_0 > 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import SectorGeometry


@dataclass(frozen=True)
class Grid:
    """Tensor grid on a sector: geometric radii x uniform angles."""

    r: np.ndarray       # strictly increasing, r[0] > 0, r[-1] = R
    phi: np.ndarray     # uniform on [0, omega]

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        phi = np.asarray(self.phi, dtype=float)
        if r[0] <= 0.0:
            raise ValueError("radial grid must exclude the origin")
        if np.any(np.diff(r) <= 0):
            raise ValueError("radial nodes must be strictly increasing")
        t = np.log(r)
        dt = np.diff(t)
        if dt.size and not np.allclose(dt, dt[0], rtol=1e-10, atol=1e-12):
            raise ValueError("radial nodes must be log-uniform")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def make(cls, geom: SectorGeometry, n_r: int, n_phi: int,
             r_min_ratio: float = 1e-6) -> "Grid":
        """Grid with n_r+1 log-uniform radii on [R*ratio, R] and n_phi+1 angles."""
        t = np.linspace(math.log(geom.radius * r_min_ratio), math.log(geom.radius), n_r + 1)
        phi = np.linspace(0.0, geom.omega, n_phi + 1)
        return cls(np.exp(t), phi)

    @property
    def t(self) -> np.ndarray:
        return np.log(self.r)

    @property
    def dt(self) -> float:
        return math.log(self.r[1] / self.r[0])

    @property
    def dphi(self) -> float:
        return float(self.phi[1] - self.phi[0])

    @property
    def omega(self) -> float:
        return float(self.phi[-1])

    @property
    def radius(self) -> float:
        return float(self.r[-1])

    @property
    def shape(self):
        return (len(self.r), len(self.phi))

    def meshes(self):
        """(r, phi) meshgrids with indexing (radius, angle)."""
        return np.meshgrid(self.r, self.phi, indexing="ij")


@dataclass(frozen=True)
class ScalarField:
    """Real samples of a scalar function at the grid nodes."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.shape:
            raise ValueError(f"value array shape {vals.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "ScalarField":
        """Sample fn(r, phi) on the grid (fn must broadcast over meshes)."""
        rr, pp = grid.meshes()
        return cls(grid, np.asarray(fn(rr, pp), dtype=float))

    def __add__(self, other):
        self._check(other)
        return ScalarField(self.grid, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return ScalarField(self.grid, self.values - other.values)

    def __mul__(self, scalar):
        return ScalarField(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def _check(self, other):
        if other.grid is not self.grid and not (
                np.array_equal(other.grid.r, self.grid.r)
                and np.array_equal(other.grid.phi, self.grid.phi)):
            raise ValueError("fields live on different grids")


def same_grid(*fields: ScalarField) -> Grid:
    """Common grid of the given fields; raises on mismatch."""
    first = fields[0]
    for f in fields[1:]:
        first._check(f)
    return first.grid
