"""Domain types, grids and singular-point bookkeeping.

Units throughout: t in seconds, x in light-seconds, c = 1, amplitudes
dimensionless. No unit conversion happens anywhere in the package.

Closed-form evaluators accept scalars or arrays. Scalars come back as a
Python ``complex`` (or ``float``) or as a :class:`SingularPoint`; arrays come
back as :class:`numpy.ma.MaskedArray` whose masked entries are the singular
samples (their underlying data is NaN, never an infinity).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

#: Minimum distance (light-seconds) kept between a grid sample and any
#: declared singular location.
DELTA_SING = 1e-6


class SingularKind(enum.Enum):
    LOG_DIVERGENCE = "log-divergence"
    SIMPLE_POLE = "simple-pole"
    INVERSE_SQRT = "inverse-sqrt"
    REMOVABLE_X_LOG_X = "removable-x-log-x"


class Provenance(enum.Enum):
    CLOSED_FORM = "closed-form"
    ORACLE_QUADRATURE = "oracle-quadrature"
    ORACLE_DFT = "oracle-dft"


@dataclass(frozen=True)
class PacketSpec:
    """Rectangle packet of centre ``x0`` and half-width ``b`` (full width 2b)."""

    x0: float = 0.0
    b: float = 0.5

    def __post_init__(self):
        if not np.isfinite(self.x0):
            raise ValueError(f"packet centre must be finite, got {self.x0!r}")
        if not (np.isfinite(self.b) and self.b > 0):
            raise ValueError(f"packet half-width must be positive, got {self.b!r}")

    @property
    def edges(self) -> tuple[float, float]:
        return (self.x0 - self.b, self.x0 + self.b)

    @property
    def height(self) -> float:
        """Classical amplitude 1/(2b) of the unit-area rectangle."""
        return 1.0 / (2.0 * self.b)

    def shifted(self, dx: float) -> "PacketSpec":
        return PacketSpec(self.x0 + dx, self.b)


@dataclass(frozen=True)
class SingularPoint:
    """Tag returned in place of a value at a non-removable singularity."""

    location: float
    kind: SingularKind


@dataclass(frozen=True)
class Grid:
    """Uniform, immutable sample grid."""

    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("a grid needs at least two samples")
        steps = np.diff(s)
        if np.any(steps <= 0):
            raise ValueError("grid samples must be strictly ascending")
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ValueError("grid spacing must be uniform")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def uniform(cls, x_min: float, x_max: float, n: int) -> "Grid":
        _check_range(x_min, x_max, n)
        return cls(np.linspace(x_min, x_max, n))

    @property
    def x_min(self) -> float:
        return float(self.samples[0])

    @property
    def x_max(self) -> float:
        return float(self.samples[-1])

    @property
    def n_points(self) -> int:
        return int(self.samples.size)

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def __len__(self):
        return self.n_points

    def min_distance(self, points: Iterable[float]) -> float:
        pts = np.asarray(list(points), dtype=float)
        if pts.size == 0:
            return np.inf
        return float(np.min(np.abs(self.samples[:, None] - pts[None, :])))

    def same_as(self, other: "Grid") -> bool:
        return self.samples.shape == other.samples.shape and bool(
            np.array_equal(self.samples, other.samples)
        )


@dataclass(frozen=True)
class FieldSnapshot:
    """Complex field sampled on a grid at a fixed time."""

    grid: Grid
    t: float
    values: np.ma.MaskedArray = field(repr=False)
    provenance: Provenance = Provenance.CLOSED_FORM

    def __post_init__(self):
        vals = np.ma.array(self.values, dtype=complex, copy=True)
        if vals.shape != (self.grid.n_points,):
            raise ValueError(
                f"snapshot has {vals.shape} values for a grid of {self.grid.n_points} points"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def _check_range(x_min, x_max, n):
    if int(n) != n or n < 2:
        raise ValueError(f"need at least two grid points, got n={n!r}")
    if not (np.isfinite(x_min) and np.isfinite(x_max)) or not x_min < x_max:
        raise ValueError(f"degenerate grid range [{x_min}, {x_max}]")


def packet_singularities(spec: PacketSpec, t: float = 0.0) -> list[float]:
    """Positions at time ``t`` where either travelling component is singular."""
    lo, hi = spec.edges
    pts = {lo + t, hi + t, lo - t, hi - t}
    return sorted(pts)


def overlap_singularities(detector: PacketSpec, source: PacketSpec) -> list[float]:
    """Times at which the overlap kernel argument sits on a kink (0, ±2b)."""
    d = detector.x0 - source.x0
    b = source.b
    return sorted({d, d - 2 * b, d + 2 * b, -d, -d - 2 * b, -d + 2 * b})


def _admissible_shift(base: np.ndarray, points: np.ndarray, h: float, delta: float) -> float:
    """Smallest |s| <= h/2 with every base+s at least ``delta`` from ``points``."""
    # margin: evaluators recompute x - t etc., which can land a hair inside delta
    guard = 1.5 * delta
    forbidden = []
    for p in points:
        near = base[np.abs(base - p) <= h / 2 + 2 * guard]
        for x in near:
            forbidden.append((p - x - guard, p - x + guard))
    candidates = [0.0]
    for lo, hi in forbidden:
        candidates.extend([lo, hi])
    candidates.sort(key=lambda s: (abs(s), s))
    for s in candidates:
        if abs(s) > h / 2:
            break
        if all(not (lo < s < hi) for lo, hi in forbidden):
            return s
    raise ValueError("no half-cell shift clears all singular points; refine the grid")


def make_edge_avoiding_grid(
    spec: PacketSpec,
    x_min: float,
    x_max: float,
    n: int,
    extra_points: Sequence[float] = (),
    delta: float = DELTA_SING,
) -> Grid:
    """Uniform grid shifted by at most half a cell so that no sample lies
    within ``delta`` of the packet edges ``x0 ± b`` or of any ``extra_points``.
    """
    _check_range(x_min, x_max, n)
    base = np.linspace(x_min, x_max, int(n))
    h = (x_max - x_min) / (n - 1)
    points = np.asarray(list(spec.edges) + list(extra_points), dtype=float)
    s = _admissible_shift(base, points, h, delta)
    return Grid(base + s)


def is_scalar(x) -> bool:
    return np.ndim(x) == 0


def finalize(values, singular, locations, kind: SingularKind, scalar: bool):
    """Package raw values plus a singular mask for the caller.

    Scalar inputs return a plain number or a :class:`SingularPoint`; array
    inputs return a masked array with NaN under the mask.
    """
    values = np.asarray(values)
    singular = np.asarray(singular, dtype=bool)
    if scalar:
        if bool(singular):
            return SingularPoint(float(np.asarray(locations)), kind)
        v = values.item()
        return v
    data = np.where(singular, np.nan, values)
    return np.ma.MaskedArray(data, mask=singular.copy())
