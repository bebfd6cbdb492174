"""Envy-free allocation of indivisible objects between two agents."""

from .gal import GalResult, RoundRecord, exists_complete_ef, run_gal, run_simplified_al
from .prefs import (
    InstanceError,
    PriorityOrder,
    Profile,
    Relation,
    WeakOrder,
    build_priority_order,
    compare,
    parse_profile,
    serialize_profile,
)
from .sd import (
    Assignment,
    SdOrdering,
    is_ef,
    is_ef_halving,
    is_ef_injection,
    is_lpo,
    pareto_dominates,
    sd_compare,
)

__all__ = [
    "Assignment",
    "GalResult",
    "InstanceError",
    "PriorityOrder",
    "Profile",
    "Relation",
    "RoundRecord",
    "SdOrdering",
    "WeakOrder",
    "build_priority_order",
    "compare",
    "exists_complete_ef",
    "is_ef",
    "is_ef_halving",
    "is_ef_injection",
    "is_lpo",
    "pareto_dominates",
    "parse_profile",
    "run_gal",
    "run_simplified_al",
    "sd_compare",
    "serialize_profile",
]
