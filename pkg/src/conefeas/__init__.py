"""Conic linear-feasibility solver with verifiable Farkas certificates.

Decides whether b lies in A(P) or its closure for a cone P generated by a
bounded closed convex set, constructs solutions from minimisers of an
unconstrained dual functional, and emits infeasibility certificates y with
sigma(A* y) = 0 and <b, y> > 0.
"""

from .cones import (
    LinearSubspace,
    NonnegativeOrthant,
    PolyhedralRays,
    ProductCone,
    SecondOrderCone,
)
from .duality import Instance, dual_objective, duality_gap, primal_objective
from .farkas import (
    AttainmentDiagnosis,
    AttainmentKind,
    DualAttained,
    Outcome,
    Verdict,
    certificate_verify,
    diagnose_attainment,
    farkas_constant,
    least_norm_pseudoinverse,
    relax_and_solve,
    solve_approximate,
    solve_exact,
)
from .generators import BallCap, Box, PolytopeHull, SupportFace, extremality_check
from .operators import LinearMap, as_vector, inner, norm
from .solvers import SolverConfig, SolveReport, SolveStatus, minimize_dual, pdhg_solve

__version__ = "0.1.0"

__all__ = [
    "as_vector",
    "inner",
    "norm",
    "LinearMap",
    "NonnegativeOrthant",
    "SecondOrderCone",
    "LinearSubspace",
    "PolyhedralRays",
    "ProductCone",
    "BallCap",
    "PolytopeHull",
    "Box",
    "SupportFace",
    "extremality_check",
    "Instance",
    "primal_objective",
    "dual_objective",
    "duality_gap",
    "SolverConfig",
    "SolveReport",
    "SolveStatus",
    "minimize_dual",
    "pdhg_solve",
    "Verdict",
    "DualAttained",
    "Outcome",
    "AttainmentKind",
    "AttainmentDiagnosis",
    "certificate_verify",
    "solve_approximate",
    "solve_exact",
    "farkas_constant",
    "least_norm_pseudoinverse",
    "diagnose_attainment",
    "relax_and_solve",
]
