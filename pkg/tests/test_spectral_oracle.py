import numpy as np
import pytest
from scipy import integrate

from posfreq import closed_form as cf
from posfreq import spectral_oracle as so
from posfreq.core import FieldSnapshot, Grid, PacketSpec, Provenance, make_edge_avoiding_grid

SPEC = PacketSpec(0.0, 0.5)
# a lighter configuration for the many point checks below
LIGHT = so.SpectralConfig(n_k=60_000)


# --- configuration and extrapolation ---------------------------------------


def test_config_defaults():
    cfg = so.SpectralConfig()
    assert cfg.k_max == pytest.approx(20.0 / 1e-3)
    assert cfg.dx == pytest.approx(2 * 64.0 / 2**14)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"eps_schedule": (1e-2,)},
        {"eps_schedule": (1e-3, 1e-2)},
        {"eps_schedule": (1e-2, 0.0)},
        {"k_max": 100.0},
        {"n_k": 3},
        {"n_x": 1000},
        {"L": 0.0},
    ],
)
def test_config_rejects(kwargs):
    with pytest.raises(ValueError):
        so.SpectralConfig(**kwargs)


def test_config_domain_too_small_for_packet():
    cfg = so.SpectralConfig(L=8.0, n_x=2**10)
    with pytest.raises(ValueError):
        so.evolve_dft(PacketSpec(0.0, 0.5), 0.0, cfg)


def test_extrapolate_linear_is_exact():
    eps = (0.1, 0.03, 0.01)
    raw = [2.0 + 3.0 * e for e in eps]
    out = so.extrapolate(eps, raw)
    assert isinstance(out.value, float)
    assert out.value == pytest.approx(2.0, abs=1e-14)
    assert out.error == pytest.approx(0.03, rel=1e-12)


def test_extrapolate_complex_array():
    eps = (0.1, 0.03, 0.01)
    raw = np.array([[1 + 1j + e, 2 - e] for e in eps])
    out = so.extrapolate(eps, raw)
    np.testing.assert_allclose(out.value, [1 + 1j, 2], atol=1e-14)


def test_extrapolate_nonconvergence():
    eps = (0.1, 0.03, 0.01)
    raw = [100.0, 0.0, 0.0]
    with pytest.raises(so.NonConvergenceError):
        so.extrapolate(eps, raw)


# --- spectrum ---------------------------------------------------------------


@pytest.mark.parametrize("k", [0.0, 1.0, -2.5, 7.3, 40.0])
def test_spectrum_against_direct_integral(k):
    spec = PacketSpec(0.4, 0.5)
    re = integrate.quad(lambda x: np.cos(k * x), spec.x0 - spec.b, spec.x0 + spec.b, limit=200)[0]
    im = integrate.quad(lambda x: -np.sin(k * x), spec.x0 - spec.b, spec.x0 + spec.b, limit=200)[0]
    expect = (re + 1j * im) / (2 * spec.b)
    assert so.phi_plus_spectrum(k, spec) == pytest.approx(expect, abs=1e-12)


def test_spectrum_values():
    assert so.phi_plus_spectrum(0.0, SPEC) == 1.0
    assert abs(so.phi_plus_spectrum(np.pi / SPEC.b, SPEC)) < 1e-15


# --- damped quadrature ------------------------------------------------------


def test_quadrature_centre_t0():
    out = so.evolve_quadrature(0.0, 0.0, SPEC, LIGHT)
    assert abs(out.value - 1.0) < 1e-4


def test_quadrature_tail_t0_vanishes():
    out = so.evolve_quadrature(2.0, 0.0, SPEC, LIGHT)
    assert abs(out.value) < 1e-4


def test_quadrature_right_mover():
    out = so.evolve_quadrature(1.0, 0.0, SPEC, mover="right")
    assert abs(out.value - 0.174853j) < 1e-4
    assert abs(out.value - cf.psi_plus(1.0, SPEC)) < 1e-4


def test_quadrature_left_mover_is_conjugate():
    right = so.evolve_quadrature(1.3, 0.0, SPEC, LIGHT, mover="right").value
    left = so.evolve_quadrature(1.3, 0.0, SPEC, LIGHT, mover="left").value
    assert abs(left - np.conj(right)) < 1e-10


def test_quadrature_unknown_mover():
    with pytest.raises(ValueError):
        so.evolve_quadrature(0.0, 0.0, SPEC, mover="up")


def test_quadrature_matches_closed_form_after_emission():
    x = np.array([-3.1, -1.2, 0.0, 0.3, 1.6, 4.4])
    out = so.evolve_quadrature(x, 0.25, SPEC, LIGHT)
    np.testing.assert_allclose(out.value, cf.phi(x, 0.25, SPEC).data, atol=1e-4)


def test_quadrature_shifted_packet():
    spec = PacketSpec(1.7, 0.3)
    x = np.array([-2.0, 1.7, 2.9, 5.0])
    out = so.evolve_quadrature(x, 0.6, spec, LIGHT)
    np.testing.assert_allclose(out.value, cf.phi(x, 0.6, spec).data, atol=1e-4)


def test_quadrature_regularized_closed_form():
    # at fixed eps the damped right-mover integral is the iε-regularized form
    eps = 1e-2
    cfg = so.SpectralConfig(eps_schedule=(2e-2, eps), n_k=200_000)
    out = so.evolve_quadrature(np.array([0.0, 0.5, 1.0]), 0.0, SPEC, cfg, mover="right")
    reg = cf.psi_plus_regularized(np.array([0.0, 0.5, 1.0]), SPEC, cf.RegularizedPsiParams(eps))
    np.testing.assert_allclose(out.raw[-1], reg, atol=1e-6)


# --- DFT evolution ----------------------------------------------------------


def test_dft_round_trip_t0():
    cfg = so.SpectralConfig()
    snap = so.evolve_dft(SPEC, 0.0, cfg)
    assert snap.provenance is Provenance.ORACLE_DFT
    expect = so.sample_rectangle(snap.grid.samples, SPEC)
    assert np.max(np.abs(snap.values.data - expect)) < 1e-12


def test_dft_interior_agreement():
    cfg = so.SpectralConfig()
    snap = so.evolve_dft(SPEC, 0.25, cfg)
    x = snap.grid.samples
    keep = (np.abs(np.abs(x) - 0.75) > 2.0) & (np.abs(np.abs(x) - 0.25) > 2.0) & (np.abs(x) < 16)
    err = np.max(np.abs(snap.values.data[keep] - cf.phi(x[keep], 0.25, SPEC).data))
    assert err < 5e-3


def test_dft_same_phase_for_opposite_modes():
    cfg = so.SpectralConfig(n_x=256, L=32.0)
    x = so.periodic_grid(cfg).samples
    k = 2 * np.pi * 5 / (2 * cfg.L)
    t = 0.37
    for sign in (1, -1):
        wave = np.exp(1j * sign * k * x)
        out = so.positive_frequency_propagate(wave, cfg.dx, t)
        np.testing.assert_allclose(out, wave * np.exp(-1j * k * t), atol=1e-12)


def test_dft_semigroup():
    cfg = so.SpectralConfig()
    x = so.periodic_grid(cfg).samples
    f0 = so.sample_rectangle(x, SPEC).astype(complex)
    two = so.positive_frequency_propagate(so.positive_frequency_propagate(f0, cfg.dx, 0.4), cfg.dx, 0.6)
    one = so.positive_frequency_propagate(f0, cfg.dx, 1.0)
    assert np.max(np.abs(two - one)) < 1e-12


def test_dft_seam_guard():
    with pytest.raises(ValueError):
        so.evolve_dft(PacketSpec(31.8, 0.5), 1.0)


def test_sample_rectangle_midpoint_at_edge():
    vals = so.sample_rectangle(np.array([-0.5, 0.0, 0.5, 0.7]), SPEC)
    np.testing.assert_array_equal(vals, [0.5, 1.0, 0.5, 0.0])


# --- overlap oracle ---------------------------------------------------------


DET = PacketSpec(2.0, 0.5)


@pytest.mark.parametrize("t", [0.0, 0.5, 1.25, 1.9, 2.9, 3.6])
def test_overlap_oracle(t):
    out = so.overlap_quadrature(t, DET, SPEC)
    assert abs(out.value - cf.overlap(t, DET, SPEC)) < 1e-4


@pytest.mark.parametrize("t,detector", [(2.0, DET), (0.0, SPEC)])
def test_overlap_oracle_at_triangle_vertex(t, detector):
    # the kink of Re at full coincidence smooths as eps*log(eps), which the
    # linear extrapolation only partly removes; the error estimate still bounds it
    out = so.overlap_quadrature(t, detector, SPEC)
    miss = abs(out.value - cf.overlap(t, detector, SPEC))
    assert miss < out.error
    assert miss < 2e-3


def test_overlap_oracle_width_mismatch():
    with pytest.raises(ValueError):
        so.overlap_quadrature(0.5, PacketSpec(2.0, 0.4), SPEC)


def test_overlap_oracle_narrow_packets():
    det, src = PacketSpec(2.0, 0.01), PacketSpec(0.0, 0.01)
    ts = np.array([0.5, 1.5, 1.995, 2.005, 2.5])
    # the eps schedule has to scale with the packet width
    cfg = so.SpectralConfig(eps_schedule=tuple(e * 2 * det.b for e in so.DEFAULT_EPS_SCHEDULE))
    out = so.overlap_quadrature(ts, det, src, cfg)
    np.testing.assert_allclose(out.value, cf.overlap(ts, det, src), atol=1e-5)


# --- wave equation residual -------------------------------------------------


def _snaps(fn, grid, t, h):
    return [FieldSnapshot(grid, tt, np.ma.MaskedArray(fn(grid.samples, tt))) for tt in (t - h, t, t + h)]


def test_residual_constant_field():
    grid = Grid.uniform(-1, 1, 201)
    assert so.wave_equation_residual(_snaps(lambda x, t: np.full(x.shape, 2.0 + 1j), grid, 0.5, 0.01)) < 1e-12


def test_residual_travelling_wave_second_order():
    grid = Grid.uniform(-3, 3, 1201)
    fn = lambda x, t: np.exp(-((x - t) ** 2)) + 0.5j * np.exp(-((x + t) ** 2))
    r1 = so.wave_equation_residual(_snaps(fn, grid, 0.3, 2e-2))
    r2 = so.wave_equation_residual(_snaps(fn, grid, 0.3, 1e-2))
    assert r1 < 1e-2
    assert r1 / r2 == pytest.approx(4.0, rel=0.3)


def test_residual_non_solution_is_large():
    grid = Grid.uniform(-3, 3, 601)
    fn = lambda x, t: np.exp(-(x**2)) * (1 + t)
    assert so.wave_equation_residual(_snaps(fn, grid, 0.3, 1e-2)) > 0.5


def test_residual_closed_form_field():
    grid = make_edge_avoiding_grid(SPEC, -3.0, 3.0, 12001)
    snaps = [FieldSnapshot(grid, tt, cf.phi(grid.samples, tt, SPEC)) for tt in (0.999, 1.0, 1.001)]
    assert so.wave_equation_residual(snaps, SPEC) < 1e-3


def test_residual_rejects_grid_mismatch():
    a, b = Grid.uniform(-1, 1, 101), Grid.uniform(-1, 1, 103)
    f = lambda g, t: FieldSnapshot(g, t, np.ma.MaskedArray(np.zeros(g.n_points, complex)))
    with pytest.raises(ValueError):
        so.wave_equation_residual([f(a, 0.0), f(b, 0.1), f(a, 0.2)])


def test_residual_rejects_uneven_times():
    g = Grid.uniform(-1, 1, 101)
    f = lambda t: FieldSnapshot(g, t, np.ma.MaskedArray(np.zeros(g.n_points, complex)))
    with pytest.raises(ValueError):
        so.wave_equation_residual([f(0.0), f(0.1), f(0.3)])


# --- densities --------------------------------------------------------------


def test_rho_quadrature_t0():
    out = so.rho_quadrature(np.array([0.0, 2.0]), 0.0, SPEC, LIGHT)
    np.testing.assert_allclose(out.value, [1.0, 0.0], atol=1e-4)


def test_energy_quadrature_centre():
    out = so.energy_density_quadrature(0.0, SPEC)
    assert out.value == pytest.approx(1 / (2 * np.pi * SPEC.b**2), rel=1e-3)
