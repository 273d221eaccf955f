"""Deterministic JSON reports and CSV artifact dumps.

Every scalar result row carries the tolerance it was tested against (None
for purely informational values).  Reports contain no timestamps or other
run-dependent fields: identical configurations produce bit-identical
files.  CSV dumps are long-form with a self-describing header row.
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np

from . import __version__
from .grids import ScalarField


class Report:
    def __init__(self, inputs: dict):
        self.inputs = inputs
        self.rows = []
        self.artifacts = []

    def add(self, name: str, value, tolerance=None, passed=None, detail=None):
        if passed is None and tolerance is not None:
            passed = bool(abs(value) <= tolerance)
        row = {"name": name, "value": _jsonable(value), "tolerance": tolerance,
               "passed": passed}
        if detail:
            row["detail"] = detail
        self.rows.append(row)

    def add_check(self, name: str, value, tolerance, detail=None):
        """Row asserting |value| <= tolerance."""
        self.add(name, value, tolerance, bool(abs(value) <= tolerance), detail)

    @property
    def all_passed(self) -> bool:
        return all(r["passed"] for r in self.rows if r["passed"] is not None)

    def to_dict(self) -> dict:
        # artifact names only: absolute paths would break report determinism
        return {
            "inputs": self.inputs,
            "results": self.rows,
            "artifacts": [os.path.basename(a) for a in self.artifacts],
            "metadata": {"package": "cornerlab", "version": __version__},
        }

    def write(self, out_dir: str, name: str = "report.json") -> str:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, name)
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, float) and (value != value):
        return "nan"
    return value


def dump_field_csv(field: ScalarField, out_dir: str, name: str) -> str:
    """Long-form (r, phi, value) dump with units in the header."""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    rr, pp = field.grid.meshes()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r [length]", "phi [rad]", "value [field units]"])
        for a, b, c in zip(rr.ravel(), pp.ravel(), field.values.ravel()):
            w.writerow([f"{a:.12e}", f"{b:.12e}", f"{c:.12e}"])
    return path


def dump_kcurve_csv(curve, out_dir: str, name: str) -> str:
    """K-curve dump: (t, K, level_lo, level_hi) rows."""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t [scale]", "K(t) [norm]", "level_lo [Sobolev order]",
                    "level_hi [Sobolev order]"])
        for t, k in zip(curve.t, curve.K):
            w.writerow([f"{t:.12e}", f"{k:.12e}", curve.levels[0], curve.levels[1]])
    return path
