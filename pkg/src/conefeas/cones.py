"""Closed convex cones with exact Euclidean projection.

Every cone supports projection, the Moreau decomposition x = x_+ + x_- with
x_+ in P, x_- in the polar cone P°, <x_+, x_-> = 0, plus membership tests for
P and P° derived from the projection.  Membership tolerances are absolute;
problems are expected to be pre-scaled at the CLI boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operators import DimensionMismatchError

__all__ = [
    "Cone",
    "NonnegativeOrthant",
    "SecondOrderCone",
    "LinearSubspace",
    "PolyhedralRays",
    "ProductCone",
    "ProjectionError",
]


class ProjectionError(RuntimeError):
    """Inner least-squares loop failed to converge; carries the residual."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class Cone:
    """Base class; subclasses implement ``project`` and expose ``dim``."""

    dim: int

    def project(self, x) -> np.ndarray:
        raise NotImplementedError

    def _check_dim(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatchError(
                f"cone has dimension {self.dim}, vector has shape {x.shape}"
            )
        return x

    def moreau_decompose(self, x):
        """Return (x_+, x_-) with x = x_+ + x_-, x_+ in P, x_- in P°."""
        x = self._check_dim(x)
        x_plus = self.project(x)
        return x_plus, x - x_plus

    def contains(self, x, tol: float = 1e-9) -> bool:
        """True iff the distance from x to the cone is at most ``tol``."""
        x = self._check_dim(x)
        return float(np.linalg.norm(x - self.project(x))) <= tol

    def polar_contains(self, z, tol: float = 1e-9) -> bool:
        """True iff z lies in the polar cone: the projection of z onto P vanishes."""
        z = self._check_dim(z)
        return float(np.linalg.norm(self.project(z))) <= tol


@dataclass(frozen=True)
class NonnegativeOrthant(Cone):
    """P = {x : x_i >= 0}."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    def project(self, x) -> np.ndarray:
        x = self._check_dim(x)
        return np.maximum(x, 0.0)


@dataclass(frozen=True)
class SecondOrderCone(Cone):
    """Aperture-alpha ice-cream cone {x : x_last >= 0, ||x_head|| <= alpha * x_last}.

    Projection uses the closed-form spectral formula: interior and polar
    points are fixed points / mapped to 0, and boundary projections land on
    the cone surface with last coordinate (alpha*||head|| + x_last)/(1+alpha^2).
    """

    dim: int
    alpha: float = 1.0

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("second-order cone needs dimension >= 2")
        if not (self.alpha > 0 and np.isfinite(self.alpha)):
            raise ValueError("aperture alpha must be positive and finite")

    def project(self, x) -> np.ndarray:
        x = self._check_dim(x)
        a = self.alpha
        head, t = x[:-1], x[-1]
        r = float(np.linalg.norm(head))
        if r <= a * t:
            return x.copy()
        if a * r <= -t:
            return np.zeros_like(x)
        # r > 0 here: r = 0 with t < 0 falls into the polar branch.
        s = (a * r + t) / (1.0 + a * a)
        p = np.empty_like(x)
        p[:-1] = (a * s / r) * head
        p[-1] = s
        return p


@dataclass(frozen=True)
class LinearSubspace(Cone):
    """A linear subspace viewed as a (self-polar-complement) cone.

    Accepts any spanning set of vectors; an orthonormal basis is extracted
    with a rank-revealing QR at construction time.
    """

    dim: int = field(init=False)
    basis: np.ndarray = field(init=False)

    def __init__(self, vectors):
        mat = np.atleast_2d(np.array(vectors, dtype=float))
        if mat.size == 0 or not np.all(np.isfinite(mat)):
            raise ValueError("basis must be a non-empty finite matrix")
        # rows are the supplied vectors; columns of q span their range
        q, r = np.linalg.qr(mat.T)
        keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, np.abs(r).max())
        q = q[:, keep]
        q.flags.writeable = False
        object.__setattr__(self, "dim", mat.shape[1])
        object.__setattr__(self, "basis", q)

    def project(self, x) -> np.ndarray:
        x = self._check_dim(x)
        return self.basis @ (self.basis.T @ x)


def _nnls_active_set(rays: np.ndarray, x: np.ndarray, max_iter: int, tol: float):
    """Lawson-Hanson nonnegative least squares: argmin ||rays @ lam - x||, lam >= 0.

    ``rays`` has one generator per column.  Raises ProjectionError when the
    inner loop exceeds its iteration cap without a clean KKT point.
    """
    n, k = rays.shape
    lam = np.zeros(k)
    passive = np.zeros(k, dtype=bool)
    resid = x - rays @ lam
    scale = max(1.0, float(np.linalg.norm(x)))

    for _ in range(max_iter):
        w = rays.T @ resid
        w[passive] = -np.inf
        j = int(np.argmax(w))
        if w[j] <= tol * scale:
            return lam
        passive[j] = True
        while True:
            sub = rays[:, passive]
            lam_try, *_ = np.linalg.lstsq(sub, x, rcond=None)
            if np.all(lam_try > tol):
                lam[passive] = lam_try
                lam[~passive] = 0.0
                break
            # step toward lam_try until the first passive coefficient hits 0
            cur = lam[passive]
            neg = lam_try <= tol
            ratios = cur[neg] / (cur[neg] - lam_try[neg])
            step = float(np.min(ratios)) if ratios.size else 0.0
            cur = cur + step * (lam_try - cur)
            cur[cur < tol] = 0.0
            lam[passive] = cur
            lam[~passive] = 0.0
            passive = lam > 0.0
            if not passive.any():
                break
        resid = x - rays @ lam

    w = rays.T @ (x - rays @ lam)
    w[passive] = 0.0
    raise ProjectionError(
        "nonnegative least-squares projection did not converge",
        float(np.max(np.abs(w))),
    )


class PolyhedralRays(Cone):
    """Finitely generated cone P = {sum_i lam_i r_i : lam >= 0}.

    Projection solves a nonnegative least-squares problem over the ray matrix
    with an active-set loop (iteration cap 50 * #rays, tolerance 1e-10).
    """

    __slots__ = ("dim", "rays")

    def __init__(self, rays):
        mat = np.atleast_2d(np.array(rays, dtype=float))
        if mat.size == 0 or not np.all(np.isfinite(mat)):
            raise ValueError("rays must form a non-empty finite matrix")
        mat.flags.writeable = False
        self.rays = mat  # one ray per row
        self.dim = mat.shape[1]

    def project(self, x) -> np.ndarray:
        x = self._check_dim(x)
        lam = _nnls_active_set(
            self.rays.T, x, max_iter=50 * self.rays.shape[0], tol=1e-10
        )
        return self.rays.T @ lam


class ProductCone(Cone):
    """Direct product of cones; projection acts blockwise."""

    __slots__ = ("dim", "parts", "_offsets")

    def __init__(self, parts):
        parts = tuple(parts)
        if not parts:
            raise ValueError("product of zero cones is not allowed")
        self.parts = parts
        offsets = np.cumsum([0] + [p.dim for p in parts])
        self._offsets = offsets
        self.dim = int(offsets[-1])

    def project(self, x) -> np.ndarray:
        x = self._check_dim(x)
        out = np.empty_like(x)
        for part, lo, hi in zip(self.parts, self._offsets, self._offsets[1:]):
            out[lo:hi] = part.project(x[lo:hi])
        return out
