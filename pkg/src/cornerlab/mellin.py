"""Numerical Mellin calculus on shifted lines.

After the substitution r = e^t the Mellin transform

    M[u](zeta) = (1/sqrt(2 pi)) Int_0^inf r^(-i zeta) u(r) dr/r

is the Fourier transform of the log-radial profile, and a shifted line
Im zeta = -eta is the Fourier transform of e^(-eta t) u(e^t).  Everything
here exploits that: line transforms are endpoint-corrected FFTs on the log
grid (frequency spacing 2 pi / (n dt), truncation at the Nyquist frequency
pi/dt), the parameter-dependent operator -d_phi^2 + zeta^2 is inverted mode
by mode as division by zeta^2 + lambda_n^2, and the difference between the
solutions reconstructed from two lines isolates the residues of the poles
crossed -- a finite combination of corner singularity functions, recovered
by fitting.

Lines are labelled by eta with the convention Im zeta = -eta (so eta > 0
lies below the real axis, and the pole of mode n sits at eta = lambda_n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .geometry import EigenSpectrum, SectorGeometry, BoundaryCondition, COSINE, build_spectrum
from .grids import Grid, ScalarField
from .modal import ModalField, project

POLE_GUARD = 1e-3


@dataclass(frozen=True)
class MellinLine:
    """Samples of a Mellin transform along the line Im zeta = -eta.

    ``samples`` has shape (..., n_xi) with the frequency axis last, in FFT
    order matching ``xi``; ``t0`` and ``dt`` record the log grid that the
    inverse transform returns to.
    """

    eta: float
    xi: np.ndarray
    samples: np.ndarray
    t0: float
    dt: float

    @property
    def zeta(self) -> np.ndarray:
        return self.xi - 1j * self.eta


def mellin_eval(radial_samples, grid: Grid, zeta) -> np.ndarray:
    """M[u] at arbitrary complex zeta by Simpson quadrature in t = ln r.

    Valid where e^(-Im zeta * t) u decays at both window ends; no window
    check is performed here.
    """
    t = grid.t
    u = np.asarray(radial_samples, dtype=float)
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    integrand = np.exp(-1j * np.multiply.outer(zeta, t)) * u
    out = simpson(integrand, x=t, axis=-1) / math.sqrt(2.0 * math.pi)
    return out


def mellin_forward(radial_samples, grid: Grid, eta: float,
                   tail_tol: float | None = 1e-3) -> MellinLine:
    """Line transform of radial samples (or a stack of them, axis -1 = r).

    Trapezoid-weighted FFT: second order in dt, spectrally accurate for
    profiles vanishing at both window ends.  Raises when the weighted
    profile e^(-eta t) u has endpoint magnitude above ``tail_tol`` times its
    maximum (the window would truncate meaningful mass).
    """
    u = np.asarray(radial_samples, dtype=float)
    t = grid.t
    n = len(t) - 1
    v = u * np.exp(-eta * t)
    if tail_tol is not None:
        scale = np.max(np.abs(v))
        if scale > 0:
            edge = max(np.max(np.abs(v[..., 0])), np.max(np.abs(v[..., -1])))
            if edge > tail_tol * scale:
                raise ValueError(
                    f"tail energy at window edge ({edge / scale:.2e} of max) exceeds "
                    f"tolerance {tail_tol:.1e}; enlarge the grid or change the line")
    a = np.empty(v.shape[:-1] + (n,), dtype=complex)
    a[..., 0] = 0.5 * (v[..., 0] + v[..., n])
    a[..., 1:] = v[..., 1:n]
    xi = 2.0 * math.pi * np.fft.fftfreq(n, d=grid.dt)
    samples = np.fft.fft(a, axis=-1) * (grid.dt / math.sqrt(2.0 * math.pi)
                                        ) * np.exp(-1j * xi * t[0])
    return MellinLine(eta, xi, samples, float(t[0]), float(grid.dt))


def mellin_inverse(line: MellinLine) -> np.ndarray:
    """Inverse line transform back to radial samples on the log grid.

    Returns real samples of length n+1 (both window endpoints carry the
    shared trapezoid bin; exact round trip for profiles vanishing there).
    """
    n = line.samples.shape[-1]
    a = np.fft.ifft(line.samples * np.exp(1j * line.xi * line.t0), axis=-1)
    a = a * (math.sqrt(2.0 * math.pi) / line.dt)
    t = line.t0 + line.dt * np.arange(n + 1)
    v = np.concatenate([a, a[..., :1]], axis=-1)
    return np.real(v) * np.exp(line.eta * t)


def line_pole_distance(eta: float, spec: EigenSpectrum) -> float:
    """Distance of the line Im zeta = -eta to the operator poles +-i lambda_n."""
    lam = spec.lambdas
    return float(min(np.min(np.abs(eta - lam)), np.min(np.abs(eta + lam))))


def operator_solve_line(g_line: MellinLine, spec: EigenSpectrum,
                        guard: float = POLE_GUARD) -> MellinLine:
    """Per-mode inversion U_n = G_n / (zeta^2 + lambda_n^2) on the line.

    ``g_line.samples`` must be stacked per mode (leading axis).  Raises on
    spectral collision: the line passing within ``guard`` of a pole.
    """
    n_modes = g_line.samples.shape[0]
    lam = spec.lambdas[:n_modes]
    dist = min(np.min(np.abs(g_line.eta - lam)), np.min(np.abs(g_line.eta + lam)))
    if dist < guard:
        raise ValueError(f"spectral collision: line eta={g_line.eta} passes within "
                         f"{guard} of an operator pole")
    zeta = g_line.zeta
    denom = zeta[None, :] ** 2 + (lam**2)[:, None]
    return MellinLine(g_line.eta, g_line.xi, g_line.samples / denom,
                      g_line.t0, g_line.dt)


def solve_on_line(f: ScalarField, geom: SectorGeometry, eta: float,
                  n_modes: int = 16, tail_tol: float | None = 1e-3,
                  pad_each: float = 0.0) -> np.ndarray:
    """Modal solution profiles from the Mellin line Im zeta = -eta.

    Transforms g = r^2 f mode by mode, divides by zeta^2 + lambda_n^2 and
    inverts; returns the radial profiles of the solution branch selected by
    the line.  With ``pad_each`` > 0 the t-window is zero-extended by that
    many log units on both sides (suppressing the periodization of the
    slowly decaying line kernels); the returned profiles then live on the
    padded grid, with the physical window in the middle.
    """
    spec = build_spectrum(geom, n_modes)
    g = ScalarField(f.grid, f.values * f.grid.r[:, None] ** 2)
    gm = project(g, spec, n_modes)
    if pad_each > 0.0:
        coeffs, grid = _padded_profiles(gm.coeffs, f.grid, pad_each, tail_tol or 1e-3)
        g_line = mellin_forward(coeffs, grid, eta, tail_tol=None)
    else:
        g_line = mellin_forward(gm.coeffs, f.grid, eta, tail_tol)
    u_line = operator_solve_line(g_line, spec)
    return mellin_inverse(u_line)


def default_residue_lines(geom: SectorGeometry, n_terms: int = 1):
    """A line pair bracketing the first n_terms corner exponents.

    Both lines sit mid-strip between neighboring poles, which maximizes the
    decay rate of the reconstruction kernels and so minimizes the window
    padding the extraction needs.  The upper line selects the H^1-type
    branch (for Neumann it sits above the axis, below the double pole at
    zero); the lower line lies between the last extracted exponent and the
    next pole.
    """
    spec = build_spectrum(geom, n_terms + 2)
    lam = spec.lambdas
    if geom.bc is BoundaryCondition.NEUMANN:
        eta_hi = -0.5 * lam[1]
        k = n_terms          # lambdas[0] = 0 is the double pole, always bracketed
    else:
        eta_hi = 0.5 * lam[0]
        k = n_terms - 1
    eta_lo = 0.5 * (lam[k] + lam[k + 1])
    return eta_hi, eta_lo


def _fit_power(d: np.ndarray, t: np.ndarray, lam: float, window: np.ndarray):
    """Least-squares coefficient of d ~ c * e^(lam t) over the window.

    Returns (c, residual relative to the fitted signal peak, signal peak).
    """
    basis = np.exp(lam * (t[window] - t[window][-1]))
    dw = d[window]
    scale_basis = math.exp(lam * t[window][-1])
    c = float(basis @ dw / (basis @ basis)) / scale_basis
    fit = c * scale_basis * basis
    peak = np.max(np.abs(fit))
    resid = np.max(np.abs(dw - fit)) / max(peak, 1e-300)
    return c, float(resid), float(peak)


def _fit_log(d: np.ndarray, t: np.ndarray, window: np.ndarray):
    """Least-squares (b, a) for d ~ b + a * ln r over the window."""
    A = np.stack([np.ones(window.sum()), t[window]], axis=1)
    coef, *_ = np.linalg.lstsq(A, d[window], rcond=None)
    resid = np.max(np.abs(d[window] - A @ coef))
    scale = max(np.max(np.abs(d[window])), 1e-300)
    return float(coef[0]), float(coef[1]), float(resid / scale)


def _padded_profiles(coeffs: np.ndarray, grid: Grid, pad_each: float,
                     tail_tol: float):
    """Zero-pad modal profiles in t on both sides by ~pad_each log units.

    Exact (no interpolation): the log grid is extended with its own spacing
    and the data, which must vanish at the physical window edges, is
    extended by zeros.
    """
    scale = np.max(np.abs(coeffs))
    if scale > 0:
        edge = max(np.max(np.abs(coeffs[:, 0])), np.max(np.abs(coeffs[:, -1])))
        if edge > tail_tol * scale:
            raise ValueError("data does not vanish at the radial window edges; "
                             "cannot zero-pad the Mellin window")
    dt = grid.dt
    n_pad = int(math.ceil(pad_each / dt))
    padded = np.zeros((coeffs.shape[0], coeffs.shape[1] + 2 * n_pad))
    padded[:, n_pad:n_pad + coeffs.shape[1]] = coeffs
    t0 = grid.t[0] - n_pad * dt
    t_pad = t0 + dt * np.arange(padded.shape[1])
    grid_pad = Grid(np.exp(t_pad), grid.phi)
    return padded, grid_pad


def two_line_residue(f: ScalarField, geom: SectorGeometry, eta_hi: float,
                     eta_lo: float, n_modes: int = 8,
                     fit_window: tuple | None = None, fit_tol: float = 1e-2,
                     tail_tol: float | None = 1e-3, wrap_margin: float = 18.0):
    """Corner singularity content of the solution via two Mellin lines.

    Reconstructs the solution branches on the lines eta_hi < eta_lo and
    fits their difference (branch_hi - branch_lo, the residues of the poles
    with eta_hi < lambda < eta_lo) against the singularity basis
    {r^lambda e_lambda(phi)}; when the Neumann double pole at zero is
    bracketed, the constant mode is fitted against {1, ln r}.  Returns a
    list of SingularTerm.

    The t-window is zero-padded so that the periodization error of the
    line kernels (decay rate = line-to-pole distance d) stays below
    e^(-wrap_margin) at the fit window.  Raises on line-pole collision or
    when a fit residual exceeds fit_tol (the difference is then not pure
    singularity content: bad lines or an under-resolved grid).
    """
    from .sif import SingularTerm

    if eta_hi >= eta_lo:
        raise ValueError("need eta_hi < eta_lo")
    spec = build_spectrum(geom, n_modes)
    d_min = min(line_pole_distance(eta_hi, spec), line_pole_distance(eta_lo, spec))
    if d_min < POLE_GUARD:
        raise ValueError("line passes too close to an operator pole")

    g = ScalarField(f.grid, f.values * f.grid.r[:, None] ** 2)
    gm = project(g, spec, n_modes)
    span_phys = f.grid.t[-1] - f.grid.t[0]
    pad_each = max(2.0, 0.5 * (wrap_margin / d_min + 8.0 - span_phys))
    coeffs, grid_pad = _padded_profiles(gm.coeffs, f.grid,
                                        pad_each, tail_tol or 1e-3)

    d = None
    for eta in (eta_hi, eta_lo):
        g_line = mellin_forward(coeffs, grid_pad, eta, tail_tol=None)
        u_line = mellin_inverse(operator_solve_line(g_line, spec))
        d = u_line if d is None else d - u_line

    t = grid_pad.t
    if fit_window is None:
        # the branch difference is exactly the singular combination below
        # the data support; fit there, clear of the wrap zones at the edges
        g_scale = np.max(np.abs(gm.coeffs))
        occupied = np.any(np.abs(gm.coeffs) > 1e-9 * g_scale, axis=0)
        t_data_lo = f.grid.t[np.argmax(occupied)]
        lo = max(t_data_lo - 5.0, f.grid.t[0] + 0.1 * span_phys)
        hi = t_data_lo - 0.3
    else:
        lo, hi = math.log(fit_window[0]), math.log(fit_window[1])
    window = (t >= lo) & (t <= hi)
    if window.sum() < 8:
        raise ValueError("fit window selects fewer than 8 radial nodes")

    d_scale = float(np.max(np.abs(d[:, window])))
    terms = []
    for n in range(n_modes):
        lam = spec.lambdas[n]
        if lam == 0.0:
            if not (eta_hi < 0.0 < eta_lo):
                continue
            b, a, resid = _fit_log(d[n], t, window)
            if resid > fit_tol and np.max(np.abs(d[n][window])) > 1e-8 * d_scale:
                raise ValueError(f"constant-mode residue fit residual {resid:.2e} "
                                 f"exceeds {fit_tol:.1e}")
            terms.append(SingularTerm(0.0, COSINE, 1, False, a))
            terms.append(SingularTerm(0.0, COSINE, 0, False, b))
            continue
        if not (eta_hi < lam < eta_lo):
            continue
        c, resid, peak = _fit_power(d[n], t, lam, window)
        if resid > fit_tol and peak > 1e-8 * d_scale:
            raise ValueError(f"residue fit residual {resid:.2e} for lambda={lam:.4f} "
                             f"exceeds {fit_tol:.1e}")
        terms.append(SingularTerm(float(lam), spec.kinds[n], 0, False, c))
    return terms


def mellin_norm_sq(mf: ModalField, k: int, gamma: float,
                   tail_tol: float | None = None) -> float:
    """Mellin-side K^k_gamma norm (squared) of a modal field.

    Int ||M[u](xi - i eta)||^2_(H^k(G;|xi|)) dxi on the line
    eta = k - gamma - 1, with the parameter norm
    sum_(j<=k) (1+|xi|^2)^(k-j) ||d_phi^j v||^2_(L2(G)); angular derivatives
    of the eigenbasis stay orthogonal, so the angular norms reduce to
    lambda_n powers.
    """
    from .geometry import eigenfunction_norm_sq

    eta = k - gamma - 1.0
    line = mellin_forward(mf.coeffs, mf.grid, eta, tail_tol)
    lam = mf.spectrum.lambdas[:mf.n_modes]
    xi2 = line.xi**2
    total = 0.0
    dxi = 2.0 * math.pi / (mf.grid.dt * line.samples.shape[-1])
    for n in range(mf.n_modes):
        norm_n = eigenfunction_norm_sq(mf.spectrum, n)
        weight = np.zeros_like(xi2)
        for j in range(k + 1):
            weight += (1.0 + xi2) ** (k - j) * lam[n] ** (2 * j)
        total += norm_n * dxi * float(np.sum(np.abs(line.samples[n]) ** 2 * weight))
    return total
