"""Invariants and oriented diffeomorphism decisions for three-dimensional Mori fiber spaces."""

from .classifier import Outcome, Verdict, canonical_records, compare
from .cubic import CubicForm, WallJuppTriple, equivalent_bounded, triple_transport_check
from .lattice import BilinearLattice, IsometryMap, NotFound
from .models import (
    DelPezzoFibration,
    FanoRankOne,
    InvariantRecord,
    SingularConicBundle,
    SmoothConicBundle,
    SurfaceData,
    hodge_feasibility,
    invariants,
    triple,
)

__all__ = [
    "BilinearLattice",
    "CubicForm",
    "DelPezzoFibration",
    "FanoRankOne",
    "InvariantRecord",
    "IsometryMap",
    "NotFound",
    "Outcome",
    "SingularConicBundle",
    "SmoothConicBundle",
    "SurfaceData",
    "Verdict",
    "WallJuppTriple",
    "canonical_records",
    "compare",
    "equivalent_bounded",
    "hodge_feasibility",
    "invariants",
    "triple",
    "triple_transport_check",
]
