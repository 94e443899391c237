"""Exact divisor theory, Jacobians and theta functions of metric graphs."""
from .chipfire import (
    dhar_burn,
    dichotomy_check,
    enumerate_acyclic_orientations,
    fire_unburnt,
    linear_system_nonempty,
    moderator,
    pseudo_break_divisor,
    rank,
    reduce_divisor,
    riemann_roch_check,
)
from .graph import Divisor, Edge, GraphPoint, MetricGraph, canonical_divisor, refine
from .homology import Jacobian, abel_jacobi, cycle_basis, is_principal, jac_equal, period_matrix
from .inversion import canonical_effective, is_break_divisor, kappa, pullback_theta, riemann_membership
from .plfunc import PLFunction, divisor_of, equivalence_witness
from .theta import on_theta_divisor, theta

__version__ = "0.1.0"

__all__ = [
    "Divisor",
    "Edge",
    "GraphPoint",
    "Jacobian",
    "MetricGraph",
    "PLFunction",
    "abel_jacobi",
    "canonical_divisor",
    "canonical_effective",
    "cycle_basis",
    "dhar_burn",
    "dichotomy_check",
    "divisor_of",
    "enumerate_acyclic_orientations",
    "equivalence_witness",
    "fire_unburnt",
    "is_break_divisor",
    "is_principal",
    "jac_equal",
    "kappa",
    "linear_system_nonempty",
    "moderator",
    "on_theta_divisor",
    "period_matrix",
    "pseudo_break_divisor",
    "pullback_theta",
    "rank",
    "reduce_divisor",
    "refine",
    "riemann_membership",
    "riemann_roch_check",
    "theta",
]
