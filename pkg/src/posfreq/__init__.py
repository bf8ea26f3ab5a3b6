"""Positive-frequency wave packets for the 1+1-dimensional wave equation."""

from .core import (
    DELTA_SING,
    FieldSnapshot,
    Grid,
    PacketSpec,
    Provenance,
    SingularKind,
    SingularPoint,
    make_edge_avoiding_grid,
)

__version__ = "0.1.0"

__all__ = [
    "DELTA_SING",
    "FieldSnapshot",
    "Grid",
    "PacketSpec",
    "Provenance",
    "SingularKind",
    "SingularPoint",
    "make_edge_avoiding_grid",
]
