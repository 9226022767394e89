"""Exact cone-induced sign quotients of deterministic vector-weighted automata."""

from .arrangements import CovectorFamily, RefinementVerdict, compare_arrangements, refines, union_family
from .carrier import WeightedCarrier, eval_from, load_carrier, residual, save_carrier
from .cones import ConeError, ConeSpec, DualRaySet, extreme_dual_rays, sigma
from .feasibility import LinearSystem, check_feasible
from .quotient import Partition, QuotientResult, bounded_conic_quotient, exact_quotient_with_separator
from .scalar import fallback_workflow

__version__ = "0.1.0"

__all__ = [
    "ConeError",
    "ConeSpec",
    "CovectorFamily",
    "DualRaySet",
    "LinearSystem",
    "Partition",
    "QuotientResult",
    "RefinementVerdict",
    "WeightedCarrier",
    "bounded_conic_quotient",
    "check_feasible",
    "compare_arrangements",
    "eval_from",
    "exact_quotient_with_separator",
    "extreme_dual_rays",
    "fallback_workflow",
    "load_carrier",
    "refines",
    "residual",
    "save_carrier",
    "sigma",
    "union_family",
]
