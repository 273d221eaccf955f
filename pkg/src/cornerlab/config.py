"""Run configuration: JSON schema, validation and object construction.

Opening angles are accepted either as raw radians or as exact rational
multiples of pi written "p/q pi" (e.g. "3/2 pi", "1/4 pi", "pi"); the exact
form is what enables integer resonance arithmetic downstream, so configs
should prefer it.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .cutoffs import Cutoff, SmoothCutoff
from .geometry import BoundaryCondition, SectorGeometry
from .grids import Grid

EXPERIMENTS = ("solve", "decompose", "sif", "besov-scan", "verify")

_OMEGA_RE = re.compile(r"^\s*(?:(\d+)\s*(?:/\s*(\d+))?\s*)?pi\s*$")


class ConfigError(ValueError):
    """Invalid run configuration (CLI exit code 2)."""


def parse_omega(value):
    """float radians, or 'p/q pi' as an exact Fraction of pi."""
    if isinstance(value, (int, float)):
        return float(value), None
    if isinstance(value, str):
        m = _OMEGA_RE.match(value)
        if m:
            p = int(m.group(1)) if m.group(1) else 1
            q = int(m.group(2)) if m.group(2) else 1
            return None, Fraction(p, q)
    raise ConfigError(f"cannot parse opening angle {value!r} (use radians or 'p/q pi')")


def _require(mapping, key, where):
    if key not in mapping:
        raise ConfigError(f"missing field {key!r} in {where}")
    return mapping[key]


def _positive(value, name):
    if not isinstance(value, (int, float)) or value <= 0:
        raise ConfigError(f"{name} must be a positive number, got {value!r}")
    return value


class RunConfig:
    """Validated experiment configuration."""

    def __init__(self, raw: dict):
        if not isinstance(raw, dict):
            raise ConfigError("configuration must be a JSON object")
        self.raw = raw
        self.experiment = _require(raw, "experiment", "config")
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; "
                              f"choose one of {EXPERIMENTS}")
        if self.experiment == "verify":
            self.suite = raw.get("suite", "fast")
            if self.suite not in ("fast", "full"):
                raise ConfigError(f"unknown verify suite {self.suite!r}")
            return

        geo = _require(raw, "geometry", "config")
        omega, ratio = parse_omega(_require(geo, "omega", "geometry"))
        radius = _positive(geo.get("radius", 1.0), "geometry.radius")
        bc = geo.get("bc", "dirichlet")
        try:
            bc = BoundaryCondition(bc)
        except ValueError:
            raise ConfigError(f"unknown boundary condition {bc!r}") from None
        if ratio is not None:
            self.geometry = SectorGeometry.from_pi_fraction(
                ratio.numerator, ratio.denominator, radius, bc)
        else:
            self.geometry = SectorGeometry(omega, radius, bc)

        g = raw.get("grid", {})
        self.n_r = int(_positive(g.get("n_r", 800), "grid.n_r"))
        self.n_phi = int(_positive(g.get("n_phi", 256), "grid.n_phi"))
        self.r_min_ratio = _positive(g.get("r_min_ratio", 1e-6), "grid.r_min_ratio")
        if self.r_min_ratio >= 1:
            raise ConfigError("grid.r_min_ratio must be < 1")
        self.modes = int(_positive(raw.get("modes", 32), "modes"))
        self.source = raw.get("source")
        self.tolerances = raw.get("tolerances", {})
        self.options = {k: raw.get(k, {}) for k in ("decompose", "sif", "besov")}

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        return cls(raw)

    def make_grid(self) -> Grid:
        return Grid.make(self.geometry, self.n_r, self.n_phi, self.r_min_ratio)

    def make_cutoff(self, spec, default=(0.25, 0.75), smooth_order: int | None = None):
        pair = spec if spec is not None else default
        if not (isinstance(pair, (list, tuple)) and len(pair) in (2, 3)):
            raise ConfigError(f"cutoff must be [inner, outer], got {pair!r}")
        if len(pair) == 3 or smooth_order is not None:
            order = pair[2] if len(pair) == 3 else smooth_order
            return SmoothCutoff(float(pair[0]), float(pair[1]), int(order))
        return Cutoff(float(pair[0]), float(pair[1]))

    def make_source(self):
        """Callable f(r, phi) from the source catalog (and exact solution if
        the source is manufactured)."""
        from . import sources

        spec = self.source
        if spec is None:
            raise ConfigError("this experiment needs a 'source' section")
        kind = _require(spec, "kind", "source")
        if kind == "modal_bump":
            f = sources.modal_bump(self.geometry, int(spec.get("mode", 0)),
                                   _positive(spec.get("inner", 0.3), "source.inner"),
                                   _positive(spec.get("outer", 0.6), "source.outer"))
            return f, None
        if kind == "gaussian_bump":
            f = sources.gaussian_bump(self.geometry,
                                      _positive(spec.get("r0", 0.5), "source.r0"),
                                      spec.get("phi0"),
                                      _positive(spec.get("width", 0.12), "source.width"))
            return f, None
        if kind == "monomial_cutoff":
            chi = self.make_cutoff(spec.get("chi"))
            f = sources.monomial_cutoff(int(spec.get("i", 0)), int(spec.get("j", 0)), chi)
            return f, None
        if kind == "manufactured":
            chi = self.make_cutoff(spec.get("chi"), smooth_order=int(spec.get("order", 6)))
            coeffs = {int(k): float(v) for k, v in spec.get("coeffs", {"0": 1.0}).items()}
            u, f = sources.manufactured_solution(self.geometry, chi, coeffs)
            return f, u
        raise ConfigError(f"unknown source kind {kind!r}")
