"""Primal and dual objectives, subgradients, duality gap, saddle conditions.

Primal: minimise 1/2 j_K(x)^2 over {x : ||A x - b|| <= eps}; its value is
pi_eps.  Dual: minimise J_eps(y) = 1/2 sigma_K(A* y)^2 - <b, y> + eps ||y||,
an unconstrained finite-valued convex functional; strong duality gives
pi_eps = -inf J_eps.  A feasible-optimal pair closes the gap F(x) + J(y) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .generators import GeneratorSet
from .operators import DimensionMismatchError, LinearMap

__all__ = [
    "Instance",
    "DualState",
    "FEAS_TOL",
    "primal_objective",
    "dual_objective",
    "dual_state",
    "dual_subgradient",
    "duality_gap",
    "check_saddle",
]

# absolute numerical band for the primal feasibility indicator
FEAS_TOL = 1e-8


@dataclass(frozen=True)
class Instance:
    """Problem data: find x in the generated cone with ||A x - b|| <= epsilon."""

    A: LinearMap
    b: np.ndarray
    generator: GeneratorSet
    epsilon: float = 0.0

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float).copy()
        if b.shape != (self.A.rows,):
            raise DimensionMismatchError(
                f"b has shape {b.shape}, map has {self.A.rows} rows"
            )
        if not np.all(np.isfinite(b)):
            raise ValueError("b has non-finite components")
        if self.generator.dim != self.A.cols:
            raise DimensionMismatchError(
                f"generator dimension {self.generator.dim} != map columns {self.A.cols}"
            )
        if not (self.epsilon >= 0.0 and np.isfinite(self.epsilon)):
            raise ValueError("epsilon must be finite and >= 0")
        b.flags.writeable = False
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "epsilon", float(self.epsilon))


@dataclass(frozen=True)
class DualState:
    """Dual iterate with value, one subgradient, and face diagnostics."""

    y: np.ndarray
    value: float
    subgrad: np.ndarray
    sigma: float
    unique_face: bool


def primal_objective(inst: Instance, x) -> float:
    """1/2 gauge(x)^2 when x is feasible within FEAS_TOL, else +inf."""
    x = np.asarray(x, dtype=float)
    residual = float(np.linalg.norm(inst.A.apply(x) - inst.b))
    if residual > inst.epsilon + FEAS_TOL:
        return np.inf
    g = inst.generator.gauge(x)
    if not np.isfinite(g):
        return np.inf
    return 0.5 * g * g


def dual_objective(inst: Instance, y) -> float:
    """J_eps(y); finite for every y since the generator is bounded."""
    y = np.asarray(y, dtype=float)
    sigma = inst.generator.support_value(inst.A.adjoint_apply(y))
    value = 0.5 * sigma * sigma - float(np.dot(inst.b, y))
    if inst.epsilon > 0.0:
        value += inst.epsilon * float(np.linalg.norm(y))
    return value


def dual_state(inst: Instance, y) -> DualState:
    """Value and one subgradient of J_eps at y.

    The subgradient is A(sigma * face witness) - b plus the eps ||.|| term,
    with the 0 element of that term's subdifferential chosen at y = 0 so that
    descent from the origin is well defined.
    """
    y = np.asarray(y, dtype=float).copy()
    z = inst.A.adjoint_apply(y)
    face = inst.generator.support_face(z)
    sigma = face.value
    g = inst.A.apply(sigma * face.witness) - inst.b
    ny = float(np.linalg.norm(y))
    value = 0.5 * sigma * sigma - float(np.dot(inst.b, y))
    if inst.epsilon > 0.0:
        value += inst.epsilon * ny
        if ny > 0.0:
            g = g + (inst.epsilon / ny) * y
    band = inst.generator._tie_band(z, sigma)
    return DualState(y, value, g, sigma, sigma <= band or not face.singular)


def dual_subgradient(inst: Instance, y) -> np.ndarray:
    """One element of the subdifferential of J_eps at y."""
    return dual_state(inst, y).subgrad


def duality_gap(inst: Instance, x, y) -> float:
    """primal_objective(x) + dual_objective(y); >= 0 up to roundoff, and a
    small gap certifies joint optimality of the pair."""
    return primal_objective(inst, x) + dual_objective(inst, y)


def check_saddle(inst: Instance, x, y, tol: float) -> bool:
    """First-order saddle conditions for the pair (x, y).

    (a) x belongs to sigma(A* y) * (support face of A* y): either x matches
        the witness recovery, or x has gauge equal to sigma and pairs with
        A* y at value sigma * gauge(x) (membership in a non-singleton face).
    (b) eps > 0: y = 0 with x strictly feasible, or the residual ball
        constraint is active and y is a nonnegative multiple of b - A x.
        eps = 0: reduces to A x = b (every y is then admissible).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = inst.A.adjoint_apply(y)
    face = inst.generator.support_face(z)
    sigma = face.value
    scale = 1.0 + float(np.linalg.norm(x)) + float(np.linalg.norm(y)) + float(
        np.linalg.norm(inst.b)
    )

    ok_first = float(np.linalg.norm(x - sigma * face.witness)) <= tol * scale
    if not ok_first:
        g = inst.generator.gauge(x)
        ok_first = (
            np.isfinite(g)
            and abs(g - sigma) <= tol * scale
            and abs(float(np.dot(z, x)) - sigma * g) <= tol * scale
        )
    if not ok_first:
        return False

    residual = inst.b - inst.A.apply(x)
    nr = float(np.linalg.norm(residual))
    if inst.epsilon == 0.0:
        return nr <= tol * scale
    ny = float(np.linalg.norm(y))
    if ny <= tol * scale:
        return nr <= inst.epsilon + tol * scale
    if abs(nr - inst.epsilon) > tol * scale:
        return False
    return float(np.dot(y, residual)) >= (1.0 - tol) * ny * nr
