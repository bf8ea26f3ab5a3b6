import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posfreq.core import (
    DELTA_SING,
    FieldSnapshot,
    Grid,
    PacketSpec,
    Provenance,
    make_edge_avoiding_grid,
    packet_singularities,
)


def test_packet_spec_rejects_nonpositive_width():
    with pytest.raises(ValueError):
        PacketSpec(0.0, 0.0)
    with pytest.raises(ValueError):
        PacketSpec(0.0, -1.0)


def test_packet_spec_is_immutable(spec):
    with pytest.raises(dataclasses.FrozenInstanceError):
        spec.b = 2.0


def test_edge_avoiding_grid_basic(spec):
    grid = make_edge_avoiding_grid(spec, -3, 3, 601)
    assert grid.n_points == 601
    assert grid.min_distance(spec.edges) >= DELTA_SING
    # shifted by at most half a cell
    assert abs(grid.x_min + 3) <= grid.spacing / 2


def test_edge_avoiding_grid_degenerate_range(spec):
    with pytest.raises(ValueError, match="degenerate"):
        make_edge_avoiding_grid(spec, 0.5, 0.5, 10)


def test_edge_avoiding_grid_rejects_single_point(spec):
    with pytest.raises(ValueError):
        make_edge_avoiding_grid(spec, -1, 1, 1)


def test_edge_avoiding_grid_translated():
    spec = PacketSpec(2.0, 0.5)
    grid = make_edge_avoiding_grid(spec, -5, 5, 1000)
    assert grid.min_distance([1.5, 2.5]) >= DELTA_SING


def test_edge_avoiding_grid_extra_points(spec):
    lines = packet_singularities(spec, 0.25)
    grid = make_edge_avoiding_grid(spec, -3, 3, 601, lines)
    assert grid.min_distance(lines) >= DELTA_SING


@settings(max_examples=60, deadline=None)
@given(
    x0=st.floats(-5, 5),
    b=st.floats(0.01, 2.0),
    lo=st.floats(-10, 0),
    width=st.floats(0.5, 20),
    n=st.integers(11, 3000),
)
def test_edge_avoiding_grid_property(x0, b, lo, width, n):
    spec = PacketSpec(x0, b)
    grid = make_edge_avoiding_grid(spec, lo, lo + width, n)
    assert grid.min_distance(spec.edges) >= DELTA_SING
    steps = np.diff(grid.samples)
    np.testing.assert_allclose(steps, width / (n - 1), rtol=1e-9)


def test_grid_is_read_only(spec):
    grid = Grid.uniform(0, 1, 5)
    with pytest.raises(ValueError):
        grid.samples[0] = 3.0


def test_grid_rejects_nonuniform():
    with pytest.raises(ValueError):
        Grid(np.array([0.0, 1.0, 3.0]))


def test_snapshot_length_must_match_grid():
    grid = Grid.uniform(0, 1, 5)
    with pytest.raises(ValueError):
        FieldSnapshot(grid, 0.0, np.zeros(4))
    snap = FieldSnapshot(grid, 0.0, np.zeros(5), Provenance.ORACLE_DFT)
    assert snap.provenance is Provenance.ORACLE_DFT
