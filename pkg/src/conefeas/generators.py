"""Bounded closed convex generator sets containing 0.

A generator set K generates the cone of interest; the solver only ever needs
its support function sigma_K, a maximiser of <z, .> over K (the support face,
with a singularity flag when the maximiser is non-unique), and its gauge
j_K(x) = inf{a > 0 : x in a K}, finite exactly on the generated cone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracle
from .cones import Cone
from .operators import DimensionMismatchError

__all__ = [
    "GeneratorSet",
    "BallCap",
    "PolytopeHull",
    "Box",
    "SupportFace",
    "extremality_check",
]

_EXACT_ZERO = 1e-15


@dataclass(frozen=True)
class SupportFace:
    """Support value sigma_K(z), one maximiser, and a non-uniqueness flag."""

    value: float
    witness: np.ndarray
    singular: bool


class GeneratorSet:
    """Base class: bounded closed convex K with 0 in K."""

    dim: int
    tie_tol: float

    def _check_dim(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatchError(
                f"generator has dimension {self.dim}, vector has shape {x.shape}"
            )
        return x

    def _tie_band(self, z, value=0.0) -> float:
        # singularity is a measure-zero event; scale the band to stay robust
        return self.tie_tol * (1.0 + float(np.linalg.norm(z)) + abs(value))

    def support_value(self, z) -> float:
        """sigma_K(z) = max_{v in K} <z, v>; nonnegative since 0 in K."""
        raise NotImplementedError

    def support_face(self, z) -> SupportFace:
        raise NotImplementedError

    def gauge(self, x) -> float:
        """j_K(x), +inf outside the generated cone."""
        raise NotImplementedError

    def scaled_subgradient(self, z):
        """Return (sigma_K(z) * witness, unique).

        The product set sigma * dsigma is a singleton exactly when sigma = 0
        or the support face is a singleton; ``unique`` reports that case.
        """
        face = self.support_face(self._check_dim(z))
        unique = face.value <= self._tie_band(z) or not face.singular
        return face.value * face.witness, unique

    def in_polar(self, z, tol: float = 0.0) -> bool:
        """True iff sigma_K(z) <= tol, i.e. z is polar to the generated cone."""
        return self.support_value(z) <= tol


@dataclass(frozen=True)
class BallCap(GeneratorSet):
    """K = P intersect closed unit ball, for a closed convex cone P.

    Support value is ||proj_P(z)||, the support face witness is the normalised
    projection, and the gauge is the norm on P (+inf outside).
    """

    cone: Cone
    tie_tol: float = 1e-9

    @property
    def dim(self) -> int:
        return self.cone.dim

    def support_value(self, z) -> float:
        z = self._check_dim(z)
        return float(np.linalg.norm(self.cone.project(z)))

    def support_face(self, z) -> SupportFace:
        z = self._check_dim(z)
        z_plus = self.cone.project(z)
        value = float(np.linalg.norm(z_plus))
        if value <= _EXACT_ZERO * (1.0 + float(np.linalg.norm(z))):
            # degenerate face: 0 is a maximiser and keeps the recovery map
            # continuous through sigma = 0
            return SupportFace(value, np.zeros(self.dim), True)
        return SupportFace(value, z_plus / value, value <= self._tie_band(z))

    def gauge(self, x, membership_tol: float = 1e-9) -> float:
        x = self._check_dim(x)
        if not self.cone.contains(x, membership_tol):
            return math.inf
        return float(np.linalg.norm(x))


@dataclass(frozen=True)
class PolytopeHull(GeneratorSet):
    """K = conv(points U {0}) for a finite point list."""

    points: np.ndarray
    tie_tol: float = 1e-9

    def __init__(self, points, tie_tol: float = 1e-9):
        pts = np.atleast_2d(np.array(points, dtype=float))
        if pts.size == 0 or not np.all(np.isfinite(pts)):
            raise ValueError("points must form a non-empty finite matrix")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "tie_tol", tie_tol)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def _products(self, z):
        return self.points @ z

    def support_value(self, z) -> float:
        z = self._check_dim(z)
        return max(0.0, float(np.max(self._products(z))))

    def support_face(self, z) -> SupportFace:
        z = self._check_dim(z)
        prods = self._products(z)
        best = int(np.argmax(prods))
        value = max(0.0, float(prods[best]))
        band = self._tie_band(z, value)
        if value <= _EXACT_ZERO * (1.0 + float(np.linalg.norm(z))):
            return SupportFace(value, np.zeros(self.dim), True)
        ties = int(np.sum(prods >= value - band))
        # 0 joins the face when the best product is itself within the band
        singular = ties > 1 or value <= band
        return SupportFace(value, self.points[best].copy(), singular)

    def support_candidates(self, z, band):
        """Indices of points whose product with z is within ``band`` of the max."""
        z = self._check_dim(z)
        prods = self._products(z)
        value = max(0.0, float(np.max(prods)))
        return [int(i) for i in np.flatnonzero(prods >= value - band)]

    def gauge(self, x) -> float:
        """LP value min sum(lam) s.t. sum lam_i p_i = x, lam >= 0.

        Exact because 0 in K absorbs slack; +inf when x is outside the
        generated cone (LP infeasible).
        """
        x = self._check_dim(x)
        lp = oracle.LpProblem(
            np.ones(self.points.shape[0]), self.points.T, x
        )
        sol = oracle.simplex_solve(lp)
        if sol.status == "infeasible":
            return math.inf
        if sol.status != "optimal":
            raise oracle.LpNumericalError(f"gauge LP returned {sol.status}")
        return max(0.0, sol.value)


@dataclass(frozen=True)
class Box(GeneratorSet):
    """K = prod_i [0, u_i] with u >= 0 componentwise."""

    upper: np.ndarray
    tie_tol: float = 1e-9

    def __init__(self, upper, tie_tol: float = 1e-9):
        u = np.asarray(upper, dtype=float).copy()
        if u.ndim != 1 or u.size == 0 or not np.all(np.isfinite(u)):
            raise ValueError("upper bounds must be a finite vector")
        if np.any(u < 0):
            raise ValueError("upper bounds must be nonnegative")
        u.flags.writeable = False
        object.__setattr__(self, "upper", u)
        object.__setattr__(self, "tie_tol", tie_tol)

    @property
    def dim(self) -> int:
        return self.upper.size

    def support_value(self, z) -> float:
        z = self._check_dim(z)
        return float(np.sum(self.upper * np.maximum(z, 0.0)))

    def support_face(self, z) -> SupportFace:
        z = self._check_dim(z)
        witness = np.where(z > 0.0, self.upper, 0.0)
        value = float(np.dot(z, witness))
        band = self._tie_band(z, value)
        singular = bool(np.any((np.abs(z) <= band) & (self.upper > 0.0)))
        return SupportFace(value, witness, singular)

    def gauge(self, x, tol: float = 1e-9) -> float:
        x = self._check_dim(x)
        if np.any(x < -tol):
            return math.inf
        x = np.maximum(x, 0.0)
        if np.any((x > tol) & (self.upper == 0.0)):
            return math.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(x > 0.0, x / self.upper, 0.0)  # 0/0 -> 0
        return float(np.max(ratios)) if ratios.size else 0.0


def extremality_check(points, hull_points=None, match_tol: float = 1e-9):
    """Check that every extreme point of conv(hull U {0}) lies in ``points`` U {0}.

    ``hull_points`` defaults to ``points`` (in which case the check holds by
    construction); supplying a larger hull tests whether the raw set really
    contains the hull's vertices.  Returns (holds, violating).
    """
    pts = [np.asarray(p, dtype=float) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    hull = pts if hull_points is None else [np.asarray(p, dtype=float) for p in hull_points]
    extreme = oracle.vertex_enumerate(hull)
    violating = []
    for v in extreme:
        scale = match_tol * (1.0 + float(np.linalg.norm(v)))
        if float(np.linalg.norm(v)) <= scale:
            continue  # the origin is always admissible
        if not any(float(np.linalg.norm(v - p)) <= scale for p in pts):
            violating.append(v)
    return len(violating) == 0, violating
