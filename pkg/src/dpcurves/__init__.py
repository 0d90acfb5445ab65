"""Rational and fixed-j elliptic curve counts on del Pezzo surfaces, in exact arithmetic."""

from .errors import InternalConsistencyError, ValidationError
from .genus1 import GenusOneReport, aut_order, n1j
from .gw0 import MemoTable, kontsevich_p2, n0
from .lattice import CurveClass, SurfaceKind, make_surface, parse_class, parse_surface

__version__ = "0.1.0"

__all__ = [
    "CurveClass",
    "GenusOneReport",
    "InternalConsistencyError",
    "MemoTable",
    "SurfaceKind",
    "ValidationError",
    "aut_order",
    "kontsevich_p2",
    "make_surface",
    "n0",
    "n1j",
    "parse_class",
    "parse_surface",
]
