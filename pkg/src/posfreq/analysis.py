"""Quantitative checks on the packet: tail cancellation and emergence, the
power-law tail, localization of the number density, the triangle gap
between the field and its two movers, and causal arrival in the
detector overlap series.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import closed_form as cf
from .core import DELTA_SING, Grid, PacketSpec, make_edge_avoiding_grid, packet_singularities

ONSET_THRESHOLD = 1e-10
EXACT_ZERO = 1e-12


@dataclass(frozen=True)
class OverlapSeries:
    times: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    detector: PacketSpec
    source: PacketSpec

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        values = np.array(self.values, dtype=complex)
        if times.ndim != 1 or times.size < 2:
            raise ValueError("an overlap series needs at least two times")
        if times[0] != 0.0:
            raise ValueError("overlap series must start at t = 0")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly ascending")
        if values.shape != times.shape:
            raise ValueError("one value per time is required")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def step(self) -> float:
        return float(np.max(np.diff(self.times)))


def overlap_series(detector: PacketSpec, source: PacketSpec, t_max: float, dt: float) -> OverlapSeries:
    n = int(round(t_max / dt))
    # rounding keeps sample times on the decimal lattice (1.00, not 1.0000000000000002)
    times = np.round(np.arange(n + 1) * dt, 12)
    return OverlapSeries(times, cf.overlap(times, detector, source), detector, source)


@dataclass(frozen=True)
class TailFit:
    coefficient: float
    exponent: float
    residual: float
    window: tuple[float, float]


@dataclass(frozen=True)
class LocalizationResult:
    outside_max: float
    integral: float


@dataclass(frozen=True)
class CausalArrival:
    """Onsets detected in an overlap series.

    ``t_star`` is None when the real part never leaves zero in the window.
    """

    t_star: float | None
    precursor_onset: float | None
    step: float

    @property
    def arrived(self) -> bool:
        return self.t_star is not None


def _require_edge_avoiding(spec: PacketSpec, grid: Grid, t: float = 0.0):
    lo, hi = spec.edges
    pts = [lo - t, hi - t, lo + t, hi + t]
    if grid.min_distance(pts) < DELTA_SING:
        raise ValueError("grid has samples on a singular line; use make_edge_avoiding_grid")


def cancellation_residual(spec: PacketSpec, grid: Grid) -> float:
    """Largest ``|Im Phi(x, 0)|`` on the grid (the tails should cancel exactly)."""
    _require_edge_avoiding(spec, grid)
    vals = cf.phi(grid.samples, 0.0, spec)
    return float(np.max(np.abs(vals.imag)))


def emerged_tail_minimum(spec: PacketSpec, grid: Grid, t: float) -> float:
    """Smallest ``|Im Phi(x, t)|`` over samples outside the light cone
    ``|x - x0| > b + |t|``; positive once the tails no longer cancel."""
    _require_edge_avoiding(spec, grid, t)
    x = grid.samples
    outside = np.abs(x - spec.x0) > spec.b + abs(t)
    if not np.any(outside):
        raise ValueError("grid has no samples outside the light cone")
    vals = cf.phi(x[outside], t, spec)
    return float(np.min(np.abs(vals.imag)))


def tail_coefficient(spec: PacketSpec, x_lo: float, x_hi: float, n: int = 100) -> TailFit:
    """Least-squares fit of ``Im psi(x) ~ C / (x - x0)**p`` in log-log space.

    Samples are log-spaced over ``[x_lo, x_hi]``; the residual is the largest
    relative deviation of the fitted law from the data.
    """
    if not x_lo > spec.x0 + 10.0 * spec.b:
        raise ValueError(f"tail window must start beyond x0 + 10b = {spec.x0 + 10 * spec.b}")
    if not x_hi > x_lo or n < 2:
        raise ValueError("need x_hi > x_lo and n >= 2")
    x = np.geomspace(x_lo, x_hi, n)
    d = x - spec.x0
    im = np.asarray(cf.psi_plus(x, spec).imag)
    slope, intercept = np.polyfit(np.log(d), np.log(im), 1)
    coef = float(np.exp(intercept))
    fitted = coef * d**slope
    residual = float(np.max(np.abs(fitted / im - 1.0)))
    return TailFit(coef, float(-slope), residual, (float(x_lo), float(x_hi)))


def localization_check(spec: PacketSpec, grid: Grid, t: float = 0.0) -> LocalizationResult:
    """Density outside ``[x0 - b, x0 + b]`` and its grid integral.

    At ``t = 0`` the outside maximum vanishes and the integral is 1.
    """
    if grid.x_min > spec.x0 - 10 * spec.b or grid.x_max < spec.x0 + 10 * spec.b:
        raise ValueError("grid must span at least [x0 - 10b, x0 + 10b]")
    _require_edge_avoiding(spec, grid, t)
    x = grid.samples
    rho = np.ma.filled(cf.rho_expectation(x, t, spec), 0.0)
    outside = np.abs(x - spec.x0) > spec.b
    outside_max = float(np.max(rho[outside])) if np.any(outside) else 0.0
    integral = float(np.sum(rho) * grid.spacing)
    return LocalizationResult(outside_max, integral)


def triangle_gap(x, t: float, spec: PacketSpec):
    """``|psi(x-t)| + |psi*(x+t)| - |Phi(x,t)|``, never negative."""
    right, left = cf.components(x, t, spec)
    if np.ma.is_masked(right) or np.ma.is_masked(left):
        raise ValueError("triangle gap requested at a singular point")
    gap = np.abs(right.data) + np.abs(left.data) - np.abs(right.data + left.data)
    gap = np.maximum(gap, 0.0)
    return float(gap[0]) if np.ndim(x) == 0 else gap


def max_triangle_gap(spec: PacketSpec, t: float, x_min: float = -5.0, x_max: float = 5.0, n: int = 2001) -> float:
    grid = make_edge_avoiding_grid(spec, x_min, x_max, n, packet_singularities(spec, t))
    return float(np.max(triangle_gap(grid.samples, t, spec)))


def causal_arrival(series: OverlapSeries) -> CausalArrival:
    """Earliest times at which Re and Im of the overlap leave zero.

    A series that ends before the transit starts reports ``t_star = None``.
    """
    b = series.source.b
    if series.step > (b / 10) * (1 + 1e-9):
        raise ValueError(f"time step {series.step} exceeds b/10 = {b / 10}")
    re_on = np.nonzero(np.abs(series.values.real) > ONSET_THRESHOLD)[0]
    im_on = np.nonzero(np.abs(series.values.imag) > ONSET_THRESHOLD)[0]
    t_star = float(series.times[re_on[0]]) if re_on.size else None
    onset = float(series.times[im_on[0]]) if im_on.size else None
    return CausalArrival(t_star, onset, series.step)


def precursor_causal_ratio(series: OverlapSeries) -> tuple[float, float]:
    """``(max |overlap| on (0, t_star), max |overlap| over the causal window)``.

    The causal window runs from ``t_star`` to the end of the transit,
    ``|x1 - x0| + 2b``.
    """
    arrival = causal_arrival(series)
    if not arrival.arrived:
        raise ValueError("no causal arrival in window")
    d = abs(series.detector.x0 - series.source.x0)
    mag = np.abs(series.values)
    before = (series.times > 0) & (series.times < arrival.t_star)
    during = (series.times >= arrival.t_star) & (series.times <= d + 2 * series.source.b)
    pre = float(np.max(mag[before])) if np.any(before) else 0.0
    return pre, float(np.max(mag[during]))
