"""Grid imaging driver: probe-disk sweeps turned into an image of the target.

Thin orchestration over :class:`~elastoscat.estimators.OneWaveDiskImager`:
probe centers sit on the measurement circle, radii form a ladder, every
(center, radius) indicator is computed exactly once, and grid points are
scored through their radial bins.  CSV and 16-bit PGM exporters round-trip
the result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import FarFieldData
from .estimators import OneWaveDiskImager
from .medium import ElasticMedium

__all__ = ["ImagingScenario", "IndicatorGrid", "run_imaging", "export_grid",
           "read_grid_csv"]


@dataclass(frozen=True)
class ImagingScenario:
    """Geometry and resolution of one reconstruction run."""

    r_meas: float = 2.0
    n_centers: int = 16
    n_radii: int = 24
    radius_range: tuple[float, float] | None = None
    problem: str = "IP-F"
    truncation: int | None = None
    grid_extent: float = 1.5
    grid_resolution: int = 101

    def __post_init__(self):
        if self.r_meas <= 0:
            raise ValueError("r_meas must be > 0")
        if self.n_centers < 1 or self.n_radii < 1:
            raise ValueError("need at least one center and one radius")
        if self.problem not in ("IP-F", "IP-P", "IP-S"):
            raise ValueError(f"unknown problem {self.problem!r}")
        if self.grid_resolution < 2:
            raise ValueError("grid needs at least 2 points per axis")
        rr = self.radius_range
        if rr is not None:
            if not (0 < rr[0] < rr[1] < 2 * self.r_meas):
                raise ValueError("radius_range must be increasing inside (0, 2 r_meas)")
        if self.grid_extent > 2 * self.r_meas:
            raise ValueError("grid extends past the reach 2*r_meas of the probe sweep")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(-self.grid_extent, self.grid_extent, self.grid_resolution)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(-self.grid_extent, self.grid_extent, self.grid_resolution)


@dataclass
class IndicatorGrid:
    """Imaging values on a rectangular grid (values[i, j] at (ys[i], xs[j])).

    ``values`` is the displayed map exp(-coverage); ``coverage`` is the
    additive-over-centers sum it derives from.
    """

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    coverage: np.ndarray = None
    monotonicity_violations: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.ys), len(self.xs)):
            raise ValueError(f"values shape {self.values.shape} does not match grid "
                             f"({len(self.ys)}, {len(self.xs)})")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid contains non-finite values")
        if np.any(self.values < 0):
            raise ValueError("imaging values must be nonnegative")


def run_imaging(scenario: ImagingScenario, data: FarFieldData,
                medium: ElasticMedium, threads: int = 1) -> IndicatorGrid:
    """Full reconstruction: probe sweep, bin scoring, grid assembly."""
    imager = OneWaveDiskImager(
        medium=medium, r_meas=scenario.r_meas, n_centers=scenario.n_centers,
        radii=scenario.n_radii, radius_range=scenario.radius_range,
        truncation=scenario.truncation, problem=scenario.problem,
        threads=threads).fit(data)
    xs, ys = scenario.xs, scenario.ys
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    cov = imager.coverage(pts).reshape(len(ys), len(xs))
    return IndicatorGrid(xs=xs, ys=ys, values=np.exp(-cov), coverage=cov,
                         monotonicity_violations=imager.monotonicity_violations_)


def export_grid(grid: IndicatorGrid, path, fmt: str) -> None:
    """Write the grid as CSV rows "x,y,value" or a min-max normalized 16-bit PGM."""
    if fmt == "csv":
        with open(path, "w", encoding="ascii") as fh:
            fh.write("x,y,value\n")
            for i, y in enumerate(grid.ys):
                for j, x in enumerate(grid.xs):
                    fh.write(f"{x:.6g},{y:.6g},{grid.values[i, j]:.6g}\n")
        return
    if fmt == "pgm":
        lo = float(grid.values.min())
        hi = float(grid.values.max())
        if hi > lo:
            scaled = np.round((grid.values - lo) / (hi - lo) * 65535).astype(np.uint16)
        else:
            scaled = np.zeros_like(grid.values, dtype=np.uint16)  # flat field -> 0
        h, w = scaled.shape
        with open(path, "wb") as fh:
            fh.write(f"P5\n{w} {h}\n65535\n".encode("ascii"))
            fh.write(scaled.astype(">u2").tobytes())
        return
    raise ValueError(f"format must be 'csv' or 'pgm', got {fmt!r}")


def read_grid_csv(path) -> IndicatorGrid:
    """Parse a CSV grid export back into an IndicatorGrid."""
    xs, ys, vals = [], [], []
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != "x,y,value":
            raise ValueError(f"{path}: unexpected CSV header {header!r}")
        for line in fh:
            if not line.strip():
                continue
            x, y, v = line.split(",")
            xs.append(float(x))
            ys.append(float(y))
            vals.append(float(v))
    ux = np.unique(np.asarray(xs))
    uy = np.unique(np.asarray(ys))
    values = np.asarray(vals).reshape(len(uy), len(ux))
    return IndicatorGrid(xs=ux, ys=uy, values=values)
