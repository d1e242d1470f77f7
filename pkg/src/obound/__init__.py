"""Bounds on unknown pairwise overlaps between quantum states."""

from .bounds import f_minus, f_plus, triangle_interval, triangle_interval_lifted
from .core import (
    Edge,
    GraphValidationError,
    Interval,
    Model,
    OverlapGraph,
    Provenance,
    hull,
    intersect,
    validate_graph,
)
from .propagation import InferenceResult, InfeasibleError, classical_lower_map, complete_and_tighten
from .witness import (
    BoundKind,
    DimensionVerdict,
    classicality_check,
    dimension_witness,
    max_violation_search,
)

__version__ = "0.1.0"

__all__ = [
    "BoundKind",
    "DimensionVerdict",
    "Edge",
    "GraphValidationError",
    "InferenceResult",
    "InfeasibleError",
    "Interval",
    "Model",
    "OverlapGraph",
    "Provenance",
    "classical_lower_map",
    "classicality_check",
    "complete_and_tighten",
    "dimension_witness",
    "f_minus",
    "f_plus",
    "hull",
    "intersect",
    "max_violation_search",
    "triangle_interval",
    "triangle_interval_lifted",
    "validate_graph",
]
