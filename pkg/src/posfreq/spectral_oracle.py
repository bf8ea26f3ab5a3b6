"""Independent numerical evaluation of the packet's integral representations.

Nothing here imports :mod:`posfreq.closed_form`. The oracles integrate the
damped mode sums directly:

* :func:`evolve_quadrature` -- the Fourier integral of the rectangle
  spectrum with ``exp(-i|k|t - eps|k|)``, on composite Gauss-Legendre panels,
  extrapolated linearly to ``eps -> 0``;
* :func:`evolve_dft` -- the same evolution on a periodic grid via FFT;
* :func:`overlap_quadrature` -- the detector/source scalar product as a
  2-D spatial integral of the analytically integrated, damped k-kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import FieldSnapshot, Grid, PacketSpec, Provenance, packet_singularities

DEFAULT_EPS_SCHEDULE = (1e-1, 3e-2, 1e-2, 3e-3, 1e-3)
_GL_ORDER = 10


class NonConvergenceError(RuntimeError):
    """Successive eps-extrapolations disagree by more than the allowed factor."""


@dataclass(frozen=True)
class SpectralConfig:
    eps_schedule: tuple[float, ...] = DEFAULT_EPS_SCHEDULE
    k_max: float | None = None
    n_k: int = 200_000
    L: float = 64.0
    n_x: int = 2**14

    def __post_init__(self):
        eps = tuple(float(e) for e in self.eps_schedule)
        if len(eps) < 2:
            raise ValueError("eps_schedule needs at least two entries")
        if any(e <= 0 for e in eps) or any(a <= b for a, b in zip(eps, eps[1:])):
            raise ValueError("eps_schedule must be strictly descending and positive")
        object.__setattr__(self, "eps_schedule", eps)
        k_max = 20.0 / eps[-1] if self.k_max is None else float(self.k_max)
        if k_max * eps[-1] < 20.0 - 1e-9:
            raise ValueError("k_max * min(eps) must be at least 20")
        object.__setattr__(self, "k_max", k_max)
        if self.n_k < _GL_ORDER:
            raise ValueError(f"n_k must be at least {_GL_ORDER}")
        if self.n_x < 2 or self.n_x & (self.n_x - 1):
            raise ValueError("n_x must be a power of two")
        if not self.L > 0:
            raise ValueError("L must be positive")

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.n_x

    def check_packet(self, spec: PacketSpec):
        if self.L < 50.0 * spec.b:
            raise ValueError(f"periodic half-domain L={self.L} is below 50*b={50 * spec.b}")


@dataclass(frozen=True)
class Extrapolated:
    """eps -> 0 extrapolation of a damped integral.

    ``value`` is the linear extrapolation from the two smallest eps,
    ``error`` is the size of that last extrapolation step and ``raw`` holds
    the damped results in schedule order (leading axis).
    """

    value: complex | np.ndarray
    error: float | np.ndarray
    raw: np.ndarray = field(repr=False)


def _linear_limit(e1, e2, f1, f2):
    return f2 - e2 * (f1 - f2) / (e1 - e2)


def extrapolate(eps_schedule, raw, rtol: float = 10.0, atol: float = 1e-10) -> Extrapolated:
    """Extrapolate ``raw[i] ~ f(eps_schedule[i])`` linearly to eps = 0.

    Raises :class:`NonConvergenceError` when the extrapolation from the
    preceding pair differs from the final one by more than
    ``rtol * step + atol``, with ``step`` the final extrapolation step.
    """
    eps = np.asarray(eps_schedule, dtype=float)
    raw = np.asarray(raw)
    value = _linear_limit(eps[-2], eps[-1], raw[-2], raw[-1])
    step = np.abs(value - raw[-1])
    if len(eps) >= 3:
        prev = _linear_limit(eps[-3], eps[-2], raw[-3], raw[-2])
        bad = np.abs(prev - value) > rtol * step + atol
        if np.any(bad):
            worst = float(np.max(np.abs(prev - value)))
            raise NonConvergenceError(
                f"eps extrapolation unstable: successive limits differ by {worst:.3e}"
            )
    if value.ndim == 0:
        scalar = float(value) if np.isrealobj(value) else complex(value)
        return Extrapolated(scalar, float(step), raw)
    return Extrapolated(value, step, raw)


@lru_cache(maxsize=8)
def _panel_rule(k_max: float, n_k: int):
    """Composite Gauss-Legendre on uniform panels of [0, k_max]."""
    x, w = np.polynomial.legendre.leggauss(_GL_ORDER)
    n_panels = max(1, n_k // _GL_ORDER)
    h = k_max / n_panels
    left = np.arange(n_panels) * h
    nodes = (left[:, None] + 0.5 * h * (x + 1.0)).ravel()
    weights = np.tile(0.5 * h * w, n_panels)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def phi_plus_spectrum(k, spec: PacketSpec):
    """Fourier transform of the unit-area rectangle, ``e^{-ikx0} sin(kb)/(kb)``."""
    k = np.asarray(k, dtype=float)
    vals = np.exp(-1j * k * spec.x0) * np.sinc(k * spec.b / np.pi)
    return complex(vals) if vals.ndim == 0 else vals


def _damping_matrix(cfg: SpectralConfig, nodes, weights):
    eps = np.asarray(cfg.eps_schedule)
    return np.exp(-np.outer(eps, nodes)) * weights


def evolve_quadrature(
    x,
    t: float,
    spec: PacketSpec,
    cfg: SpectralConfig | None = None,
    mover: str = "both",
    chunk: int = 16,
) -> Extrapolated:
    """Positive-frequency evolution of the rectangle by damped quadrature.

    Evaluates ``(1/2pi) int dk phi_+(k) exp(-i|k|t + ikx - eps|k|)`` for
    every eps of the schedule and extrapolates to eps = 0. ``mover``
    restricts the integral to ``k > 0`` ("right") or ``k < 0`` ("left").
    """
    if mover not in ("both", "right", "left"):
        raise ValueError(f"unknown mover {mover!r}")
    cfg = cfg or SpectralConfig()
    nodes, weights = _panel_rule(cfg.k_max, cfg.n_k)
    damp = _damping_matrix(cfg, nodes, weights)  # (n_eps, n_k)
    spec_pos = np.sinc(nodes * spec.b / np.pi)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    raw = np.empty((len(cfg.eps_schedule), xs.size), dtype=complex)
    for start in range(0, xs.size, chunk):
        sl = slice(start, start + chunk)
        d = xs[sl, None] - spec.x0
        integrand = np.zeros((d.shape[0], nodes.size), dtype=complex)
        if mover in ("both", "right"):
            integrand += np.exp(1j * nodes * (d - t))
        if mover in ("both", "left"):
            integrand += np.exp(-1j * nodes * (d + t))
        integrand *= spec_pos
        raw[:, sl] = damp @ integrand.T
    raw /= 2.0 * np.pi
    if np.ndim(x) == 0:
        raw = raw[:, 0]
    return extrapolate(cfg.eps_schedule, raw)


def periodic_grid(cfg: SpectralConfig) -> Grid:
    return Grid(-cfg.L + cfg.dx * np.arange(cfg.n_x))


def sample_rectangle(samples: np.ndarray, spec: PacketSpec) -> np.ndarray:
    """Rectangle of height 1/(2b), taking the midpoint value at exact edges."""
    d = np.abs(samples - spec.x0)
    return (1.0 + np.sign(spec.b - d)) / (4.0 * spec.b)


def positive_frequency_propagate(values: np.ndarray, dx: float, t: float) -> np.ndarray:
    """Apply ``exp(-i|k|t)`` to every DFT mode of ``values``.

    Modes ``k`` and ``-k`` receive the same phase.
    """
    k = 2.0 * np.pi * np.fft.fftfreq(values.size, d=dx)
    return np.fft.ifft(np.fft.fft(values) * np.exp(-1j * np.abs(k) * t))


def evolve_dft(spec: PacketSpec, t: float, cfg: SpectralConfig | None = None) -> FieldSnapshot:
    """Evolve the sampled rectangle on the periodic grid ``[-L, L)``."""
    cfg = cfg or SpectralConfig()
    cfg.check_packet(spec)
    if abs(spec.x0) + spec.b + abs(t) > cfg.L / 2:
        raise ValueError("payload too close to the periodic seam: need |x0| + b + |t| <= L/2")
    grid = periodic_grid(cfg)
    initial = sample_rectangle(grid.samples, spec).astype(complex)
    values = positive_frequency_propagate(initial, cfg.dx, t)
    return FieldSnapshot(grid, float(t), np.ma.MaskedArray(values), Provenance.ORACLE_DFT)


# --- overlap oracle -------------------------------------------------------


def _graded_rule(a: float, b: float, centres, scale: float, order: int = _GL_ORDER):
    """Gauss-Legendre on [a, b] with panels graded geometrically towards
    each of ``centres`` down to width ``scale / 4``."""
    breaks = {a, b}
    span = b - a
    for c in centres:
        w = scale / 4.0
        while w < span:
            for p in (c - w, c + w):
                if a < p < b:
                    breaks.add(p)
            w *= 2.0
        if a < c < b:
            breaks.add(c)
    edges = np.array(sorted(breaks))
    edges = edges[np.concatenate([[True], np.diff(edges) > 1e-15 * max(1.0, span)])]
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = (lo + 0.5 * (hi - lo) * (x + 1.0)).ravel()
    weights = (0.5 * (hi - lo) * w).ravel()
    return nodes, weights


def _damped_kernel(s, t, eps):
    """``int dk exp(-i|k|t + iks - eps|k|)`` done analytically (two poles)."""
    return 1j / (s - t + 1j * eps) - 1j / (s + t - 1j * eps)


def _overlap_damped(t, x1, x0, b, eps):
    # outer nodes graded where the inner peak x'' = x' -+ t crosses a source edge
    outer_centres = [x0 - b + t, x0 + b + t, x0 - b - t, x0 + b - t]
    xo, wo = _graded_rule(x1 - b, x1 + b, outer_centres, eps)
    total = 0.0 + 0.0j
    for xp, wp in zip(xo, wo):
        xi, wi = _graded_rule(x0 - b, x0 + b, [xp - t, xp + t], eps)
        total += wp * np.sum(wi * _damped_kernel(xp - xi, t, eps))
    return total / (4.0 * np.pi * b)


def overlap_quadrature(
    t,
    detector: PacketSpec,
    source: PacketSpec,
    cfg: SpectralConfig | None = None,
) -> Extrapolated:
    """Scalar product of the detector rectangle with the evolved source.

    The k-integral of ``exp(-i|k|t + ik(x' - x'') - eps|k|)`` is done in
    closed form; the x' (detector) and x'' (source) integrals use graded
    composite Gauss-Legendre rules that resolve the width-eps peaks.
    """
    if detector.b != source.b:
        raise ValueError("detector and source must share a half-width")
    cfg = cfg or SpectralConfig()
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    raw = np.empty((len(cfg.eps_schedule), ts.size), dtype=complex)
    for j, tj in enumerate(ts):
        for i, eps in enumerate(cfg.eps_schedule):
            raw[i, j] = _overlap_damped(tj, detector.x0, source.x0, source.b, eps)
    if np.ndim(t) == 0:
        raw = raw[:, 0]
    return extrapolate(cfg.eps_schedule, raw)


# --- wave equation residual ------------------------------------------------


def wave_equation_residual(
    snapshots,
    spec: PacketSpec | None = None,
    clearance: float = 0.1,
) -> float:
    """Max centred-difference d'Alembertian over three snapshots t-h, t, t+h.

    Interior samples whose stencil comes within ``clearance`` of a
    characteristic line of ``spec`` (or touches a masked sample) are skipped.
    """
    before, mid, after = snapshots
    for s in (before, after):
        if not s.grid.same_as(mid.grid):
            raise ValueError("snapshots must share one grid")
    h1 = mid.t - before.t
    h2 = after.t - mid.t
    if h1 <= 0 or not np.isclose(h1, h2, rtol=1e-9, atol=0.0):
        raise ValueError("snapshots must be equally spaced in time")
    h = 0.5 * (h1 + h2)
    x = mid.grid.samples
    dx = mid.grid.spacing
    f_prev, f_mid, f_next = (np.ma.filled(s.values, np.nan) for s in snapshots)
    f_tt = (f_next[1:-1] - 2.0 * f_mid[1:-1] + f_prev[1:-1]) / h**2
    f_xx = (f_mid[2:] - 2.0 * f_mid[1:-1] + f_mid[:-2]) / dx**2
    box = np.abs(f_tt - f_xx)
    keep = np.isfinite(box)
    if spec is not None:
        lines = np.asarray(packet_singularities(spec, mid.t))
        reach = clearance + max(h, dx)
        keep &= np.min(np.abs(x[1:-1, None] - lines[None, :]), axis=1) >= reach
    if not np.any(keep):
        raise ValueError("no interior samples clear of the characteristics")
    return float(np.max(box[keep]))


def rho_quadrature(x, t: float, spec: PacketSpec, cfg: SpectralConfig | None = None) -> Extrapolated:
    """Number density from the one-particle amplitude ``<0|a(x)|Phi(t)>``.

    The amplitude is the positive-frequency evolution of the rectangle of
    height ``1/sqrt(2b)``, so the spectrum is ``sqrt(2b)`` times the unit-area
    one; the squared modulus is extrapolated in eps.
    """
    cfg = cfg or SpectralConfig()
    amp = evolve_quadrature(x, t, spec, cfg)
    raw = np.sqrt(2.0 * spec.b) * amp.raw
    return extrapolate(cfg.eps_schedule, np.abs(raw) ** 2)


def energy_density_quadrature(x, spec: PacketSpec, eps_schedule=(4e-3, 2e-3, 1e-3), dq: float = 0.02):
    """Energy density ``<:T00(x):>`` at t = 0 from the damped mode integrals.

    With ``k = q**2`` the ``sqrt|k|`` weight becomes smooth. Returns the
    eps-extrapolated value.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float)) - spec.x0
    b = spec.b
    raw = np.empty((len(eps_schedule), xs.size))
    x_gl, w_gl = np.polynomial.legendre.leggauss(_GL_ORDER)
    for i, eps in enumerate(eps_schedule):
        q_max = np.sqrt(30.0 / eps)
        n_panels = int(np.ceil(q_max / dq))
        left = np.arange(n_panels) * dq
        q = (left[:, None] + 0.5 * dq * (x_gl + 1.0)).ravel()
        w = np.tile(0.5 * dq * w_gl, n_panels)
        k = q * q
        # sqrt(2k) * sqrt(2b) sinc(kb) * exp(-eps k) * dk/dq
        amp = np.sqrt(2.0 * k) * np.sqrt(2.0 * b) * np.sinc(k * b / np.pi) * np.exp(-eps * k) * 2.0 * q * w
        for j, xj in enumerate(xs):
            pos = np.sum(amp * np.exp(1j * k * xj))
            neg = np.sum(amp * np.exp(-1j * k * xj))
            raw[i, j] = (abs(pos + neg) ** 2 + abs(pos - neg) ** 2) / (16.0 * np.pi**2)
    if np.ndim(x) == 0:
        raw = raw[:, 0]
    return extrapolate(eps_schedule, raw)
