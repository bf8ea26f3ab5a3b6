"""Verification suite: named checks with measured values and tolerances.

Each check returns one measured number. A check with sense ``"max"``
passes when ``measured < tolerance``; one with sense ``"min"`` passes when
``measured > tolerance``. The fast suite skips the quadrature and DFT
oracles.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import analysis as an
from . import closed_form as cf
from . import spectral_oracle as so
from .core import FieldSnapshot, PacketSpec, make_edge_avoiding_grid, packet_singularities


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float
    sense: str
    passed: bool
    wall_time: float


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    checks: tuple[CheckResult, ...]
    config: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_structured(self) -> str:
        lines = [f"suite={self.suite}"]
        for key, value in self.config.items():
            lines.append(f"config.{key}={value}")
        for c in self.checks:
            op = "<" if c.sense == "max" else ">"
            lines.append(
                f"check.{c.name}: {'PASS' if c.passed else 'FAIL'} "
                f"measured={c.measured:.12g} {op} tolerance={c.tolerance:.12g} "
                f"time={c.wall_time:.3f}s"
            )
        lines.append(f"overall={'PASS' if self.passed else 'FAIL'}")
        lines.append(f"failed={len(self.failures)}/{len(self.checks)}")
        return "\n".join(lines) + "\n"

    def to_dsv(self, delimiter: str = ",") -> str:
        rows = ["name,measured,tolerance,sense,passed,wall_time".replace(",", delimiter)]
        for c in self.checks:
            rows.append(
                delimiter.join(
                    [c.name, f"{c.measured:.12g}", f"{c.tolerance:.12g}", c.sense, str(c.passed).lower(), f"{c.wall_time:.3f}"]
                )
            )
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class Check:
    name: str
    fn: Callable[[], float]
    tolerance: float
    sense: str = "max"
    full_only: bool = False


SPEC = PacketSpec(0.0, 0.5)


def _grid(spec=SPEC, lo=-10.0, hi=10.0, n=2001, t=0.0):
    return make_edge_avoiding_grid(spec, lo, hi, n, packet_singularities(spec, t))


def _rectangle_recovery():
    x = _grid().samples
    vals = cf.phi(x, 0.0, SPEC)
    target = np.where(np.abs(x - SPEC.x0) < SPEC.b, SPEC.height, 0.0)
    return float(np.max(np.abs(vals - target)))


def _curtain_t0():
    return an.cancellation_residual(SPEC, _grid())


def _curtain_onset():
    t = 1e-3
    x = _grid(t=t).samples
    far = x[np.abs(x - SPEC.x0) > SPEC.b + t]
    return float(np.max(np.abs(cf.phi(far, t, SPEC).imag)))


def _tail_coef():
    fit = an.tail_coefficient(SPEC, SPEC.x0 + 50 * SPEC.b, SPEC.x0 + 500 * SPEC.b, 100)
    return abs(fit.coefficient * 2 * np.pi - 1.0)


def _tail_exponent():
    fit = an.tail_coefficient(SPEC, SPEC.x0 + 50 * SPEC.b, SPEC.x0 + 500 * SPEC.b, 100)
    return abs(fit.exponent - 1.0)


def _tail_stability():
    a = an.tail_coefficient(SPEC, 50.0, 100.0, 100).coefficient
    b = an.tail_coefficient(SPEC, 100.0, 500.0, 100).coefficient
    return abs(a / b - 1.0)


def derivative_probes(spec=SPEC):
    d = np.array([-5.0, -3.3, -2.0, -1.2, -0.8, -0.61, -0.39, -0.2, 0.0, 0.15, 0.33, 0.4, 0.62, 0.9, 1.5, 2.4, 3.0, 4.1, 5.0, -4.4])
    return spec.x0 + d * (2 * spec.b)  # includes |x - x0| = 10b


def fd_time_derivative(x, spec=SPEC, steps=(1e-3, 5e-4)):
    """Richardson-extrapolated centred difference of phi in t at t = 0."""
    ests = [(cf.phi(x, h, spec) - cf.phi(x, -h, spec)) / (2 * h) for h in steps]
    ratio = (steps[0] / steps[1]) ** 2
    return (ratio * ests[1] - ests[0]) / (ratio - 1)


def _derivative_fd():
    x = derivative_probes()
    exact = cf.phi_time_derivative_t0(x, SPEC)
    return float(np.max(np.abs(fd_time_derivative(x) - exact) / np.abs(exact)))


def _localization_outside():
    return an.localization_check(SPEC, _grid()).outside_max


def _localization_integral():
    return abs(an.localization_check(SPEC, _grid()).integral - 1.0)


def _energy_center():
    return abs(cf.energy_density_expectation(SPEC.x0, SPEC))


def _energy_2b():
    return abs(cf.energy_density_expectation(SPEC.x0 + 2 * SPEC.b, SPEC) - 1 / (3 * np.pi * SPEC.b**2))


def _energy_tail_min():
    u = np.concatenate([np.geomspace(SPEC.b + 1e-3, 1e3, 500), -np.geomspace(SPEC.b + 1e-3, 1e3, 500)])
    return float(np.min(cf.energy_density_expectation(SPEC.x0 + u, SPEC)))


FIG5_DETECTOR = PacketSpec(2.0, 0.5)


def _fig5_series(b=0.5, dt=0.01):
    return an.overlap_series(PacketSpec(2.0, b), PacketSpec(0.0, b), 4.0, dt)


def _re_before_arrival():
    s = _fig5_series()
    return float(np.max(np.abs(s.values.real[s.times < 0.99])))


def _re_arrival():
    s = _fig5_series()
    return float(abs(s.values.real[np.isclose(s.times, 1.01)][0]))


def _re_peak_time():
    s = _fig5_series()
    return abs(float(s.times[np.argmax(s.values.real)]) - 2.0)


def _re_peak_value():
    s = _fig5_series()
    return abs(float(np.max(s.values.real)) - 0.5)


def _im_onset():
    s = _fig5_series()
    return float(abs(s.values.imag[np.isclose(s.times, 0.01)][0]))


def _precursor_ratio():
    pre, causal = an.precursor_causal_ratio(_fig5_series(b=0.01, dt=0.001))
    return pre / causal


def wave_residual(h, dx, t=1.0, spec=SPEC):
    n = int(round(6.0 / dx)) + 1
    grid = make_edge_avoiding_grid(spec, -3.0, 3.0, n, packet_singularities(spec, t))
    snaps = [FieldSnapshot(grid, tt, cf.phi(grid.samples, tt, spec)) for tt in (t - h, t, t + h)]
    return so.wave_equation_residual(snaps, spec, clearance=0.1)


# time step and grid spacing deliberately differ: with h == dx the centred
# scheme is exact for light-speed profiles and only rounding remains
WAVE_H, WAVE_DX = 1e-3, 5e-4


def _wave_residual():
    return wave_residual(WAVE_H, WAVE_DX)


def _wave_order():
    r1 = wave_residual(WAVE_H, WAVE_DX)
    r2 = wave_residual(WAVE_H / 2, WAVE_DX / 2)
    return abs(r1 / r2 / 4.0 - 1.0)


def _eps_order():
    u = SPEC.x0 + 2 * SPEC.b
    exact = cf.psi_plus(u, SPEC)
    errs = [abs(cf.psi_plus_regularized(u, SPEC, cf.RegularizedPsiParams(e)) - exact) for e in (1e-3, 1e-4)]
    return abs(np.log10(errs[0] / errs[1]) - 1.0)


def _translation():
    x = np.linspace(-7.3, 9.1, 997)
    moved = PacketSpec(2.7, SPEC.b)
    a = cf.phi(x, 0.4, moved)
    b = cf.phi(x - 2.7, 0.4, PacketSpec(0.0, SPEC.b))
    return float(np.ma.max(np.abs(a - b)))


def phi_probe_points(t, spec=SPEC, n=50, clearance=0.1):
    """``n`` probes over [x0-6, x0+6], each at least ``clearance`` from the
    characteristics at time ``t``."""
    cand = spec.x0 + np.linspace(-6.03, 6.07, 1200)
    lines = np.asarray(packet_singularities(spec, t))
    ok = np.min(np.abs(cand[:, None] - lines[None, :]), axis=1) >= clearance
    cand = cand[ok]
    idx = np.round(np.linspace(0, cand.size - 1, n)).astype(int)
    return cand[idx]


def overlap_probe_times(n=20):
    return np.linspace(0.05, 3.95, n)


def _oracle_phi(cfg):
    worst = 0.0
    for t in (0.0, 0.25, 1.0):
        x = phi_probe_points(t)
        q = so.evolve_quadrature(x, t, SPEC, cfg)
        worst = max(worst, float(np.max(np.abs(q.value - cf.phi(x, t, SPEC)))))
    return worst


def _oracle_overlap(cfg):
    ts = overlap_probe_times()
    q = so.overlap_quadrature(ts, FIG5_DETECTOR, SPEC, cfg)
    return float(np.max(np.abs(q.value - cf.overlap(ts, FIG5_DETECTOR, SPEC))))


def dft_interior_deviation(t=0.25, spec=SPEC, cfg=None):
    cfg = cfg or so.SpectralConfig()
    snap = so.evolve_dft(spec, t, cfg)
    x = snap.grid.samples
    lines = np.asarray(packet_singularities(spec, t))
    keep = np.min(np.abs(x[:, None] - lines[None, :]), axis=1) >= 4 * spec.b
    keep &= np.abs(x - spec.x0) <= cfg.L / 2
    exact = cf.phi(x[keep], t, spec)
    return float(np.max(np.abs(snap.values.data[keep] - exact)))


def _dft_semigroup(cfg):
    x = so.periodic_grid(cfg).samples
    f0 = so.sample_rectangle(x, SPEC).astype(complex)
    two = so.positive_frequency_propagate(so.positive_frequency_propagate(f0, cfg.dx, 0.3), cfg.dx, 0.45)
    one = so.positive_frequency_propagate(f0, cfg.dx, 0.75)
    return float(np.max(np.abs(two - one)))


def _rho_oracle(cfg):
    worst = 0.0
    for t in (0.0, 0.25):
        x = phi_probe_points(t, n=12)
        q = so.rho_quadrature(x, t, SPEC, cfg)
        worst = max(worst, float(np.max(np.abs(q.value - cf.rho_expectation(x, t, SPEC)))))
    return worst


def default_checks(cfg: so.SpectralConfig) -> list[Check]:
    return [
        Check("rectangle_recovery", _rectangle_recovery, 1e-12),
        Check("curtain_t0_imag", _curtain_t0, 1e-12),
        Check("curtain_onset_imag", _curtain_onset, 1e-5, "min"),
        Check("tail_coefficient_rel", _tail_coef, 5e-3),
        Check("tail_exponent_dev", _tail_exponent, 5e-3),
        Check("tail_window_stability", _tail_stability, 1e-2),
        Check("time_derivative_rel", _derivative_fd, 1e-5),
        Check("localization_outside", _localization_outside, 1e-12),
        Check("localization_integral", _localization_integral, 1e-3),
        Check("energy_density_center", _energy_center, 1e-12),
        Check("energy_density_2b", _energy_2b, 1e-12),
        Check("energy_density_tail_min", _energy_tail_min, 0.0, "min"),
        Check("overlap_re_before_arrival", _re_before_arrival, 1e-12),
        Check("overlap_re_at_1p01", _re_arrival, an.ONSET_THRESHOLD, "min"),
        Check("overlap_re_peak_time", _re_peak_time, 0.01 + 1e-9),
        Check("overlap_re_peak_value", _re_peak_value, 1e-12),
        Check("overlap_im_at_0p01", _im_onset, an.ONSET_THRESHOLD, "min"),
        Check("precursor_to_causal_ratio", _precursor_ratio, 0.1),
        Check("wave_residual", _wave_residual, 1e-3),
        Check("wave_residual_order", _wave_order, 0.15),
        Check("eps_limit_order", _eps_order, 0.1),
        Check("translation_covariance", _translation, 1e-12),
        Check("oracle_phi", lambda: _oracle_phi(cfg), 1e-4, full_only=True),
        Check("oracle_overlap", lambda: _oracle_overlap(cfg), 1e-4, full_only=True),
        Check("oracle_rho", lambda: _rho_oracle(cfg), 1e-4, full_only=True),
        Check("dft_interior_deviation", lambda: dft_interior_deviation(cfg=cfg), 5e-3, full_only=True),
        Check("dft_semigroup", lambda: _dft_semigroup(cfg), 1e-12, full_only=True),
    ]


def run_suite(
    suite: str = "fast",
    overrides: dict[str, float] | None = None,
    cfg: so.SpectralConfig | None = None,
) -> VerificationReport:
    """Run the fast or full suite. ``overrides`` maps check names (or
    ``"*"`` for all) to replacement tolerances."""
    if suite not in ("fast", "full"):
        raise ValueError(f"unknown suite {suite!r}")
    cfg = cfg or so.SpectralConfig()
    overrides = dict(overrides or {})
    checks = default_checks(cfg)
    known = {c.name for c in checks} | {"*"}
    unknown = set(overrides) - known
    if unknown:
        raise ValueError(f"unknown check names in overrides: {sorted(unknown)}")
    results = []
    for check in checks:
        if check.full_only and suite == "fast":
            continue
        tol = overrides.get(check.name, overrides.get("*", check.tolerance))
        start = time.perf_counter()
        measured = float(check.fn())
        elapsed = time.perf_counter() - start
        passed = measured < tol if check.sense == "max" else measured > tol
        results.append(CheckResult(check.name, measured, float(tol), check.sense, bool(passed), elapsed))
    config = {
        "b": SPEC.b,
        "x0": SPEC.x0,
        "eps_schedule": " ".join(f"{e:g}" for e in cfg.eps_schedule),
        "k_max": f"{cfg.k_max:g}",
        "n_k": cfg.n_k,
        "L": f"{cfg.L:g}",
        "n_x": cfg.n_x,
    }
    return VerificationReport(suite, tuple(results), config)
