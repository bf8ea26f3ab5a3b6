"""Figure datasets: the curves behind each of the five figures, as columns.

Every dataset is a set of equal-length real columns: the abscissa (``x`` or
``t``) followed by ``re_<name>``, ``im_<name>``, ``abs_<name>`` for each
curve. Files start with ``#`` header lines carrying the schema version and
every parameter needed to regenerate them.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import closed_form as cf
from .core import PacketSpec, make_edge_avoiding_grid, packet_singularities

SCHEMA_VERSION = 1
NUMBER_FORMAT = "{:.12g}"
MISSING = "NA"

FIGURE_TIMES = {1: 0.0, 2: 0.25, 3: 1.0}
FIG4_TIMES = (0.0, 0.75, 1.25)
FIG5_WIDTHS = (0.5, 0.01)


@dataclass(frozen=True)
class FigureDataset:
    figure_id: int
    columns: dict = field(repr=False)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) != 1:
            raise ValueError(f"columns of unequal length: {sorted(lengths)}")

    @property
    def n_rows(self) -> int:
        return len(next(iter(self.columns.values())))

    def column(self, name: str) -> np.ma.MaskedArray:
        return np.ma.asarray(self.columns[name])

    def to_dsv(self, delimiter: str = ",") -> str:
        buf = io.StringIO()
        buf.write(f"# posfreq figure dataset schema={SCHEMA_VERSION}\n")
        buf.write(f"# figure={self.figure_id}\n")
        for key, value in self.params.items():
            buf.write(f"# {key}={_format_param(value)}\n")
        names = list(self.columns)
        buf.write(delimiter.join(names) + "\n")
        cols = [np.ma.asarray(self.columns[n]) for n in names]
        for i in range(self.n_rows):
            buf.write(delimiter.join(_cell(c, i) for c in cols) + "\n")
        return buf.getvalue()

    def to_structured(self) -> str:
        doc = {
            "schema": SCHEMA_VERSION,
            "figure": self.figure_id,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "columns": {
                name: [None if c is np.ma.masked else float(NUMBER_FORMAT.format(c)) for c in np.ma.asarray(col)]
                for name, col in self.columns.items()
            },
        }
        return json.dumps(doc, indent=1) + "\n"


def _cell(col, i):
    v = col[i]
    if v is np.ma.masked or not np.isfinite(v):
        return MISSING
    return NUMBER_FORMAT.format(float(v))


def _format_param(value):
    if isinstance(value, (list, tuple)):
        return " ".join(_format_param(v) for v in value)
    if isinstance(value, float):
        return NUMBER_FORMAT.format(value)
    return str(value)


def _jsonable(value):
    if isinstance(value, tuple):
        return list(value)
    return value


def token(value: float) -> str:
    """Column-name-safe rendering of a number: 0.75 -> '0p75', -1 -> 'm1'."""
    return NUMBER_FORMAT.format(value).replace("-", "m").replace(".", "p")


def _add_curve(columns: dict, name: str, values):
    vals = np.ma.asarray(values)
    columns[f"re_{name}"] = vals.real
    columns[f"im_{name}"] = vals.imag
    columns[f"abs_{name}"] = np.ma.abs(vals)


def packet_figure(
    figure_id: int,
    b: float = 0.5,
    x0: float = 0.0,
    t: float | None = None,
    grid_min: float = -3.0,
    grid_max: float = 3.0,
    grid_n: int = 601,
) -> FigureDataset:
    """Figures 1-3: the two movers and their sum at one time."""
    if figure_id not in FIGURE_TIMES:
        raise ValueError(f"figure {figure_id} is not a single-time packet figure")
    t = FIGURE_TIMES[figure_id] if t is None else float(t)
    spec = PacketSpec(x0, b)
    grid = make_edge_avoiding_grid(spec, grid_min, grid_max, grid_n, packet_singularities(spec, t))
    x = grid.samples
    right, left = cf.components(x, t, spec)
    columns = {"x": x}
    _add_curve(columns, "psi_right", right)
    _add_curve(columns, "psi_left", left)
    _add_curve(columns, "phi", right + left)
    params = {"b": float(b), "x0": float(x0), "t": t, "grid": (grid.x_min, grid.x_max, grid.n_points)}
    return FigureDataset(figure_id, columns, params)


def density_figure(
    b: float = 0.5,
    x0: float = 0.0,
    x1: float = 2.0,
    times: Sequence[float] = FIG4_TIMES,
    grid_min: float = -2.0,
    grid_max: float = 4.0,
    grid_n: int = 601,
) -> FigureDataset:
    """Figure 4: density of the evolving packet at several times beside the
    static detector rectangle."""
    source = PacketSpec(x0, b)
    detector = PacketSpec(x1, b)
    lines = set(detector.edges)
    for t in times:
        lines.update(packet_singularities(source, t))
    grid = make_edge_avoiding_grid(source, grid_min, grid_max, grid_n, sorted(lines))
    x = grid.samples
    columns = {"x": x}
    for t in times:
        _add_curve(columns, f"rho_source_t{token(t)}", cf.rho_expectation(x, t, source))
    _add_curve(columns, "rho_detector", cf.rho_expectation(x, 0.0, detector))
    params = {
        "b": float(b),
        "x0": float(x0),
        "x1": float(x1),
        "t": tuple(float(t) for t in times),
        "grid": (grid.x_min, grid.x_max, grid.n_points),
    }
    return FigureDataset(4, columns, params)


def overlap_figure(
    widths: Sequence[float] = FIG5_WIDTHS,
    x0: float = 0.0,
    x1: float = 2.0,
    t_max: float = 4.0,
    dt: float = 0.01,
) -> FigureDataset:
    """Figure 5: detector overlap against time for each packet width."""
    if not (t_max > 0 and dt > 0):
        raise ValueError("t_max and dt must be positive")
    n = int(round(t_max / dt))
    times = np.round(np.arange(n + 1) * dt, 12)
    columns = {"t": times}
    for b in widths:
        vals = cf.overlap(times, PacketSpec(x1, b), PacketSpec(x0, b))
        _add_curve(columns, f"overlap_b{token(b)}", vals)
    params = {
        "b": tuple(float(b) for b in widths),
        "x0": float(x0),
        "x1": float(x1),
        "t_max": float(t_max),
        "dt": float(dt),
    }
    return FigureDataset(5, columns, params)


def build_figure(figure_id: int, **kwargs) -> FigureDataset:
    if figure_id in FIGURE_TIMES:
        return packet_figure(figure_id, **kwargs)
    if figure_id == 4:
        return density_figure(**kwargs)
    if figure_id == 5:
        return overlap_figure(**kwargs)
    raise ValueError(f"unknown figure id {figure_id!r}")
