"""Parameter-plane stability scans and boundary location.

Each grid cell solves its ring radius once, classifies every
perturbation mode in range, and records the worst mode.  Cells are
independent pure computations, so they can be mapped over a thread pool;
results are gathered in cell-index order and never depend on the worker
count.  Cells violating domain constraints (b >= a, or a failed radius
solve) are classified invalid rather than dropped.

Serialization is a CSV with header ``x,y,classification,max_real,
critical_mode`` (floats in shortest round-trip form) plus a JSON sidecar
carrying the full grid description and version metadata.
"""

from __future__ import annotations

import datetime
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .spectra import Classification, _shape_mu_envelope, mode_envelope

__all__ = [
    "GridSpec",
    "RegionMap",
    "RegionCell",
    "scan_flock",
    "scan_cs_flock",
    "scan_mill",
    "scan_speed_b",
    "separatrix_check",
    "gamma_sweep",
]


def resolve_workers(workers=None):
    """Worker-count knob: explicit argument, then SWARMLAB_WORKERS, then 1."""
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("SWARMLAB_WORKERS")
    if env:
        return max(1, int(env))
    return 1


@dataclass(frozen=True)
class GridSpec:
    """Axes and fixed parameters of a scan.

    ``fixed`` holds whatever the model needs beyond the two axes
    (n, alpha, gamma, speed, m_max, ...).
    """

    x_name: str
    x_min: float
    x_max: float
    x_count: int
    y_name: str
    y_min: float
    y_max: float
    y_count: int
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.x_count < 2 or self.y_count < 2:
            raise ValueError("grid axes need at least 2 points")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid ranges need min < max")

    @property
    def x_values(self):
        return np.linspace(self.x_min, self.x_max, self.x_count)

    @property
    def y_values(self):
        return np.linspace(self.y_min, self.y_max, self.y_count)

    def to_dict(self):
        return {
            "x": {"name": self.x_name, "min": self.x_min, "max": self.x_max, "count": self.x_count},
            "y": {"name": self.y_name, "min": self.y_min, "max": self.y_max, "count": self.y_count},
            "fixed": dict(self.fixed),
        }


@dataclass(frozen=True)
class RegionCell:
    x: float
    y: float
    classification: Classification
    max_real: float | None
    critical_mode: int | None
    error: str | None = None


@dataclass
class RegionMap:
    """Scan result: cells in x-major order (x outer loop, y inner)."""

    spec: GridSpec
    model: str
    cells: list
    metadata: dict

    def classification_grid(self):
        """Cell classifications as an (x_count, y_count) object array."""
        grid = np.empty((self.spec.x_count, self.spec.y_count), dtype=object)
        for idx, cell in enumerate(self.cells):
            grid[idx // self.spec.y_count, idx % self.spec.y_count] = cell.classification
        return grid

    def csv_text(self):
        lines = ["x,y,classification,max_real,critical_mode"]
        for c in self.cells:
            mr = "" if c.max_real is None else repr(c.max_real)
            cm = "" if c.critical_mode is None else str(c.critical_mode)
            lines.append(f"{c.x!r},{c.y!r},{c.classification.value},{mr},{cm}")
        return "\n".join(lines) + "\n"

    def sidecar_json(self):
        return json.dumps(
            {"model": self.model, "grid": self.spec.to_dict(), "metadata": self.metadata},
            indent=2,
            sort_keys=True,
        ) + "\n"

    def write(self, path_prefix):
        csv_path = f"{path_prefix}.csv"
        json_path = f"{path_prefix}.json"
        with open(csv_path, "w", newline="\n") as fh:
            fh.write(self.csv_text())
        with open(json_path, "w", newline="\n") as fh:
            fh.write(self.sidecar_json())
        return [csv_path, json_path]


def _metadata(model, spec, extra=None):
    from . import __version__

    md = {
        "model": model,
        "artifact_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "m_max": spec.fixed.get("m_max"),
    }
    if extra:
        md.update(extra)
    return md


def _scan(spec, model, cell_fn, workers):
    points = [(float(x), float(y)) for x in spec.x_values for y in spec.y_values]
    nworkers = resolve_workers(workers)
    if nworkers == 1:
        cells = [cell_fn(x, y) for x, y in points]
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            cells = list(pool.map(lambda p: cell_fn(*p), points))
    return RegionMap(spec=spec, model=model, cells=cells, metadata=_metadata(model, spec))


def _invalid(x, y, msg):
    return RegionCell(
        x=x, y=y, classification=Classification.INVALID,
        max_real=None, critical_mode=None, error=msg,
    )


def _mu_cell(x, y, a, b, n, m_max):
    """Flock cell via the positions-only criterion (largest shape eigenvalue)."""
    if b >= a:
        return _invalid(x, y, "requires b < a")
    try:
        ms, mu1, tol = _shape_mu_envelope(a, b, n, m_max=m_max)
    except (ValueError, ArithmeticError) as exc:
        return _invalid(x, y, str(exc))
    worst = int(np.argmax(mu1))
    if np.any(mu1 > tol):
        cls = Classification.UNSTABLE
    elif np.all(mu1 < -tol):
        cls = Classification.STABLE
    else:
        cls = Classification.MARGINAL
    return RegionCell(
        x=x, y=y, classification=cls,
        max_real=float(mu1[worst]), critical_mode=int(ms[worst]),
    )


def _envelope_cell(x, y, model, a, b, n, m_max, alpha, gamma, speed):
    if b >= a:
        return _invalid(x, y, "requires b < a")
    try:
        summary, _ = mode_envelope(
            model, a, b, n, alpha=alpha, gamma=gamma, speed=speed, m_max=m_max
        )
    except (ValueError, ArithmeticError) as exc:
        return _invalid(x, y, str(exc))
    return RegionCell(
        x=x, y=y, classification=summary.classification,
        max_real=summary.max_real, critical_mode=summary.m,
    )


def scan_flock(spec, workers=None):
    """Stability map of the propulsion flock over the (a, b) plane.

    Per cell: solve the flock radius, apply the det/trace criterion to
    every mode (equivalent to the 4x4 classification), record the worst
    shape eigenvalue and its mode.
    """
    n = int(spec.fixed.get("n", 1000))
    m_max = spec.fixed.get("m_max")

    def cell(x, y):
        return _mu_cell(x, y, a=x, b=y, n=n, m_max=m_max)

    return _scan(spec, "flock", cell, workers)


def scan_cs_flock(spec, workers=None):
    """Stability map of the alignment flock; classifications match scan_flock."""
    n = int(spec.fixed.get("n", 1000))
    m_max = spec.fixed.get("m_max")
    gamma = float(spec.fixed.get("gamma", 1.0))

    def cell(x, y):
        return _envelope_cell(
            x, y, "flock-cs", a=x, b=y, n=n, m_max=m_max,
            alpha=1.0, gamma=gamma, speed=0.0,
        )

    return _scan(spec, "flock-cs", cell, workers)


def scan_mill(spec, workers=None):
    """Stability map of the mill ring over (a, b) at fixed speed.

    At speed 0 the mill problem degenerates to the flock one, so those
    cells take the flock criterion and the map equals scan_flock.
    """
    n = int(spec.fixed.get("n", 1000))
    m_max = spec.fixed.get("m_max")
    alpha = float(spec.fixed.get("alpha", 1.0))
    speed = float(spec.fixed.get("speed", 0.0))

    def cell(x, y):
        if speed == 0.0:
            return _mu_cell(x, y, a=x, b=y, n=n, m_max=m_max)
        return _envelope_cell(
            x, y, "mill", a=x, b=y, n=n, m_max=m_max,
            alpha=alpha, gamma=1.0, speed=speed,
        )

    return _scan(spec, "mill", cell, workers)


def scan_speed_b(spec, workers=None):
    """Mill stability over the (speed, b) plane at fixed exponent a."""
    n = int(spec.fixed.get("n", 1000))
    m_max = spec.fixed.get("m_max")
    alpha = float(spec.fixed.get("alpha", 1.0))
    a = float(spec.fixed["a"])

    def cell(x, y):
        if x == 0.0:
            # degenerate speed column: the flock problem
            return _mu_cell(x, y, a=a, b=y, n=n, m_max=m_max)
        return _envelope_cell(
            x, y, "mill", a=a, b=y, n=n, m_max=m_max,
            alpha=alpha, gamma=1.0, speed=x,
        )

    return _scan(spec, "mill-speed-b", cell, workers)


def _mode_range_stable(a, b, n, m_max):
    ms, mu1, tol = _shape_mu_envelope(a, b, n, m_max=m_max)
    return bool(np.all(mu1 < -tol))


def separatrix_check(a_values, n, m_max=None, steps=40, coarse=9):
    """Locate the lower stability boundary in b and compare to a/(a-1).

    For each a: coarse-scan b in (0.5, a - 0.05) for the first stable
    point, then bisect ``steps`` times on the stable/unstable transition
    below it.  Returns rows (a, b_boundary, a/(a-1), gap) with signed
    gap = b_boundary - a/(a-1); nan boundary when no stable b exists in
    the window.
    """
    rows = []
    for a in a_values:
        a = float(a)
        target = a / (a - 1.0)
        lo_edge, hi_edge = 0.5, a - 0.05
        grid = np.linspace(lo_edge, hi_edge, coarse)
        stable_b = None
        prev = lo_edge
        for bval in grid:
            if _mode_range_stable(a, float(bval), n, m_max):
                stable_b = float(bval)
                break
            prev = float(bval)
        if stable_b is None:
            rows.append((a, float("nan"), target, float("nan")))
            continue
        lo, hi = prev, stable_b  # unstable at lo (or window edge), stable at hi
        for _ in range(steps):
            mid = 0.5 * (lo + hi)
            if _mode_range_stable(a, mid, n, m_max):
                hi = mid
            else:
                lo = mid
        boundary = 0.5 * (lo + hi)
        rows.append((a, boundary, target, boundary - target))
    return rows


def gamma_sweep(a, b, n, m, gamma_values):
    """Worst eigenvalue real part of the alignment-flock mode matrix per gamma.

    The magnitude varies with gamma; the sign never does.
    """
    from .spectra import cs_flock_mode_matrix, eig4

    rows = []
    for gamma in gamma_values:
        mat = cs_flock_mode_matrix(a, b, n, m, float(gamma))
        vals = eig4(mat)
        rows.append((float(gamma), float(np.max(vals.real))))
    return rows
