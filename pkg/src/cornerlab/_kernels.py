"""Hot numeric kernels with numba and pure-numpy implementations.

Every kernel exists twice: a vectorized numpy version and a numba @njit
version of the identical algorithm.  The active backend is chosen at import
time: numba when it is importable, unless the environment variable
``CORNERLAB_NUMBA`` is set to ``0`` (forcing numpy).  ``benchmarks/``
contains a script timing the two paths against each other.

Kernels:

* quintic smoothstep value / first / second derivative,
* polar finite-difference Laplacian on a geometric-radius grid
  (3-point non-uniform stencil in r, exact for quadratics in r,
  3-point uniform stencil in phi),
* the recursive exponential scan behind the radial Green-kernel solves.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit, prange

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("CORNERLAB_NUMBA", "1") != "0"


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ----------------------------------------------------------------- smoothstep

def _smoothstep_np(s, order):
    s = np.asarray(s, dtype=float)
    if order == 0:
        return 1.0 - s**3 * (10.0 - 15.0 * s + 6.0 * s * s)
    if order == 1:
        return -30.0 * s * s * (1.0 - s) ** 2
    if order == 2:
        return -60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)
    raise ValueError("order must be 0, 1 or 2")


if HAS_NUMBA:

    @njit(cache=True)
    def _smoothstep_nb(s, order):
        out = np.empty_like(s)
        flat = s.ravel()
        res = out.ravel()
        for i in range(flat.size):
            v = flat[i]
            if order == 0:
                res[i] = 1.0 - v**3 * (10.0 - 15.0 * v + 6.0 * v * v)
            elif order == 1:
                res[i] = -30.0 * v * v * (1.0 - v) ** 2
            else:
                res[i] = -60.0 * v * (1.0 - v) * (1.0 - 2.0 * v)
        return out


def smoothstep_quintic(s, order=0):
    """Quintic smoothstep (1 at s<=0, 0 at s>=1) or its s-derivatives."""
    s = np.asarray(s, dtype=float)
    if USE_NUMBA and s.size > 1:
        if order not in (0, 1, 2):
            raise ValueError("order must be 0, 1 or 2")
        return _smoothstep_nb(np.ascontiguousarray(s), order)
    return _smoothstep_np(s, order)


# ------------------------------------------------------- polar FD Laplacian

def _polar_laplacian_np(values, r, dphi):
    out = np.zeros_like(values)
    hm = r[1:-1] - r[:-2]
    hp = r[2:] - r[1:-1]
    denom = hm * hp * (hm + hp)
    rmid = r[1:-1]
    u = values
    u_rr = 2.0 * (hm[:, None] * u[2:, :] + hp[:, None] * u[:-2, :]
                  - (hm + hp)[:, None] * u[1:-1, :]) / denom[:, None]
    u_r = (hm[:, None] ** 2 * u[2:, :] - hp[:, None] ** 2 * u[:-2, :]
           + (hp**2 - hm**2)[:, None] * u[1:-1, :]) / denom[:, None]
    u_pp = (u[1:-1, 2:] - 2.0 * u[1:-1, 1:-1] + u[1:-1, :-2]) / dphi**2
    out[1:-1, 1:-1] = (u_rr[:, 1:-1] + u_r[:, 1:-1] / rmid[:, None]
                       + u_pp / rmid[:, None] ** 2)
    return out


if HAS_NUMBA:

    @njit(cache=True, parallel=True)
    def _polar_laplacian_nb(values, r, dphi):
        n_r, n_phi = values.shape
        out = np.zeros((n_r, n_phi))
        inv_dphi2 = 1.0 / (dphi * dphi)
        for i in prange(1, n_r - 1):
            hm = r[i] - r[i - 1]
            hp = r[i + 1] - r[i]
            denom = hm * hp * (hm + hp)
            ri = r[i]
            for j in range(1, n_phi - 1):
                u_rr = 2.0 * (hm * values[i + 1, j] + hp * values[i - 1, j]
                              - (hm + hp) * values[i, j]) / denom
                u_r = (hm * hm * values[i + 1, j] - hp * hp * values[i - 1, j]
                       + (hp * hp - hm * hm) * values[i, j]) / denom
                u_pp = (values[i, j + 1] - 2.0 * values[i, j] + values[i, j - 1]) * inv_dphi2
                out[i, j] = u_rr + u_r / ri + u_pp / (ri * ri)
        return out


def polar_laplacian(values: np.ndarray, r: np.ndarray, dphi: float) -> np.ndarray:
    """Second-order FD Laplacian u_rr + u_r/r + u_pp/r^2 at interior nodes.

    Boundary rows/columns of the result are zero.  The radial stencil is the
    non-uniform 3-point divided difference, exact for quadratics in r.
    """
    if USE_NUMBA:
        return _polar_laplacian_nb(np.ascontiguousarray(values),
                                   np.ascontiguousarray(r), float(dphi))
    return _polar_laplacian_np(values, r, dphi)


# ----------------------------------------------- exponential recursive scan

def _exp_scan_np(panels, alpha):
    # y_i = alpha * y_(i-1) + panels_i, y_(-1) = 0: an IIR filter
    from scipy.signal import lfilter

    return lfilter([1.0], [1.0, -alpha], panels)


if HAS_NUMBA:

    @njit(cache=True)
    def _exp_scan_nb(panels, alpha):
        out = np.empty_like(panels)
        acc = 0.0
        for i in range(panels.size):
            acc = alpha * acc + panels[i]
            out[i] = acc
        return out


def exp_scan(panels: np.ndarray, alpha: float) -> np.ndarray:
    """Recursive scan y_i = alpha * y_(i-1) + panels_i with y_(-1) = 0.

    The backbone of the exponentially weighted cumulative integrals in the
    radial mode solver; alpha = exp(-lambda * dt) <= 1, so the recursion is
    unconditionally stable.
    """
    panels = np.ascontiguousarray(panels, dtype=float)
    if USE_NUMBA:
        return _exp_scan_nb(panels, float(alpha))
    return _exp_scan_np(panels, float(alpha))
