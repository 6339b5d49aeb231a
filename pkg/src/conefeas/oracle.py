"""Independent brute-force references used by tests and by the gauge LP.

Deliberately implemented with different algorithms than the main solver path
(dense two-phase simplex, projected gradient with Dykstra corrections, grid
maximisation, Jacobi eigenvalues) so that agreement is evidence rather than
tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LpProblem",
    "LpSolution",
    "LpSizeError",
    "LpNumericalError",
    "OracleNonConvergenceError",
    "simplex_solve",
    "vertex_enumerate",
    "primal_reference",
    "conjugate_grid_check",
    "jacobi_eigenvalues",
]

_PIVOT_TOL = 1e-10
_RESIDUAL_TOL = 1e-9
_MAX_VARS = 50
_MAX_CONSTRAINTS = 50


class LpSizeError(ValueError):
    """Problem exceeds the deliberate size limits of the toy simplex."""


class LpNumericalError(RuntimeError):
    """The simplex failed numerically (distinct from an infeasible status)."""


class OracleNonConvergenceError(RuntimeError):
    """The projected-gradient reference did not reach its tolerance."""


@dataclass(frozen=True)
class LpProblem:
    """min c . lam  subject to  eq_matrix @ lam = eq_rhs,  lam >= 0."""

    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float)
        mat = np.atleast_2d(np.asarray(self.eq_matrix, dtype=float))
        rhs = np.asarray(self.eq_rhs, dtype=float)
        if mat.shape != (rhs.size, c.size):
            raise ValueError(
                f"inconsistent LP dimensions: matrix {mat.shape}, "
                f"objective {c.size}, rhs {rhs.size}"
            )
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "eq_matrix", mat)
        object.__setattr__(self, "eq_rhs", rhs)


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    lam: np.ndarray | None
    value: float | None


def _pivot(tableau, basis, row, col):
    tableau[row] /= tableau[row, col]
    for r in range(tableau.shape[0]):
        if r != row and abs(tableau[r, col]) > 0.0:
            tableau[r] -= tableau[r, col] * tableau[row]
    basis[row] = col


def _bland_iterate(tableau, basis, ncols, max_pivots):
    """Run simplex pivots with Bland's anti-cycling rule on the last row.

    Returns "optimal" or "unbounded".
    """
    m = tableau.shape[0] - 1
    for _ in range(max_pivots):
        cost = tableau[-1, :ncols]
        entering = -1
        for j in range(ncols):
            if cost[j] < -_PIVOT_TOL:
                entering = j
                break
        if entering < 0:
            return "optimal"
        leaving, best_ratio, best_var = -1, math.inf, math.inf
        for r in range(m):
            a = tableau[r, entering]
            if a > _PIVOT_TOL:
                ratio = tableau[r, -1] / a
                # smallest ratio; ties broken by smallest basis variable index
                if ratio < best_ratio - _PIVOT_TOL or (
                    ratio < best_ratio + _PIVOT_TOL and basis[r] < best_var
                ):
                    leaving, best_ratio, best_var = r, ratio, basis[r]
        if leaving < 0:
            return "unbounded"
        _pivot(tableau, basis, leaving, entering)
    raise LpNumericalError("simplex exceeded its pivot budget")


def simplex_solve(lp: LpProblem) -> LpSolution:
    """Two-phase dense simplex with Bland's rule.

    Optimal solutions satisfy the equality constraints with residual at most
    1e-9; infeasibility and unboundedness are reported as statuses.
    """
    m, n = lp.eq_matrix.shape
    if n > _MAX_VARS or m > _MAX_CONSTRAINTS:
        raise LpSizeError(f"LP size {m}x{n} exceeds the {_MAX_CONSTRAINTS}x{_MAX_VARS} cap")

    a = lp.eq_matrix.copy()
    b = lp.eq_rhs.copy()
    flip = b < 0
    a[flip] *= -1.0
    b[flip] *= -1.0

    max_pivots = 2000 + 200 * (m + n)

    # phase 1: minimise the sum of artificial variables
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = a
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = b
    tableau[-1, :n] = -a.sum(axis=0)
    tableau[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    status = _bland_iterate(tableau, basis, n + m, max_pivots)
    if status == "unbounded":  # cannot happen for a sum of nonnegatives
        raise LpNumericalError("phase-1 reported unbounded")
    if -tableau[-1, -1] > _RESIDUAL_TOL:
        return LpSolution("infeasible", None, None)

    # drive remaining artificial variables out of the basis
    for r in range(m):
        if basis[r] >= n:
            for j in range(n):
                if abs(tableau[r, j]) > _PIVOT_TOL:
                    _pivot(tableau, basis, r, j)
                    break

    rows = [r for r in range(m) if basis[r] < n]
    tableau = tableau[rows + [m]][:, list(range(n)) + [n + m]]
    basis = [basis[r] for r in rows]

    # phase 2: install the real objective and re-reduce over the basis
    tableau[-1, :] = 0.0
    tableau[-1, :n] = lp.objective
    for r, var in enumerate(basis):
        tableau[-1] -= tableau[-1, var] * tableau[r]
    status = _bland_iterate(tableau, basis, n, max_pivots)
    if status == "unbounded":
        return LpSolution("unbounded", None, None)

    lam = np.zeros(n)
    for r, var in enumerate(basis):
        lam[var] = tableau[r, -1]
    lam[np.abs(lam) < _PIVOT_TOL] = 0.0
    residual = float(np.linalg.norm(lp.eq_matrix @ lam - lp.eq_rhs))
    if residual > _RESIDUAL_TOL * max(1.0, float(np.linalg.norm(lp.eq_rhs))):
        raise LpNumericalError(f"simplex solution residual {residual:.3e} too large")
    return LpSolution("optimal", lam, float(lp.objective @ lam))


def _in_convex_hull(point, others, tol=1e-9):
    """Feasibility LP: point = sum mu_i q_i, mu >= 0, sum mu = 1."""
    if not others:
        return float(np.linalg.norm(point)) <= tol
    mat = np.vstack([np.column_stack(others), np.ones(len(others))])
    rhs = np.concatenate([point, [1.0]])
    lp = LpProblem(np.zeros(len(others)), mat, rhs)
    return simplex_solve(lp).status == "optimal"


def vertex_enumerate(points) -> list:
    """Extreme points of conv(points U {0}) via per-point LP separation."""
    pts = [np.asarray(p, dtype=float) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    if len(pts) > 20 or pts[0].size > 4:
        raise LpSizeError("vertex enumeration capped at 20 points in dimension 4")
    candidates = [np.zeros(pts[0].size)] + pts
    # drop duplicates before testing extremality
    unique = []
    for p in candidates:
        if not any(np.linalg.norm(p - q) <= 1e-12 for q in unique):
            unique.append(p)
    extreme = []
    for i, p in enumerate(unique):
        others = [q for j, q in enumerate(unique) if j != i]
        if not _in_convex_hull(p, others):
            extreme.append(p)
    return extreme


def jacobi_eigenvalues(sym, sweeps=100, tol=1e-12):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations."""
    a = np.array(sym, dtype=float)
    n = a.shape[0]
    for _ in range(sweeps):
        off = math.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tol * max(1.0, float(np.abs(np.diag(a)).max())):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-300:
                    continue
                theta = 0.5 * math.atan2(2.0 * a[p, q], a[q, q] - a[p, p])
                c, s = math.cos(theta), math.sin(theta)
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))


def _project_residual_ball(a_mat, b, eps, w, evd):
    """argmin ||z - w|| subject to ||A z - b|| <= eps (eps > 0).

    With A A^T = U diag(d) U^T, the residual of the projection is
    (I + mu A A^T)^{-1} (A w - b), so the multiplier solves the explicit
    secular equation sum h_i^2 / (1 + mu d_i)^2 = eps^2 with h = U^T (Aw - b);
    that equation is monotone and convex in mu, so Newton from the left
    converges monotonically.
    """
    r0 = a_mat @ w - b
    if float(np.linalg.norm(r0)) <= eps:
        return w
    d, u = evd
    h2 = (u.T @ r0) ** 2
    tail = float(np.sum(h2[d <= 1e-14]))
    if tail >= eps * eps:
        raise OracleNonConvergenceError(
            "residual ball is empty: b is too far from the range of A"
        )
    mu = 0.0
    for _ in range(200):
        denom = 1.0 + mu * d
        g = float(np.sum(h2 / denom**2)) - eps * eps
        if g <= 1e-30:
            break
        gprime = -2.0 * float(np.sum(h2 * d / denom**3))
        step = -g / gprime
        mu += step
        if step <= 1e-16 * (1.0 + mu):
            break
    denom = 1.0 + mu * d
    r = u @ ((u.T @ r0) / denom)
    return w - mu * (a_mat.T @ r)


def _dykstra(project1, project2, w, iters, tol):
    """Dykstra's alternating projections onto the intersection of two sets."""
    x = w.copy()
    p = np.zeros_like(w)
    q = np.zeros_like(w)
    for _ in range(iters):
        y = project1(x + p)
        p = x + p - y
        x_new = project2(y + q)
        q = y + q - x_new
        if float(np.linalg.norm(x_new - x)) <= tol * (1.0 + float(np.linalg.norm(x_new))):
            return x_new
        x = x_new
    return x


def primal_reference(inst, shrink=0.5, tol=1e-11, max_outer=600, dykstra_iters=2000):
    """Reference minimiser of 1/2 ||x||^2 over {x in P, ||A x - b|| <= eps}.

    Projected gradient (shrink toward the origin, then project back onto the
    feasible intersection via Dykstra).  Returns (x, 1/2 ||x||^2).  Requires a
    ball-cap generator, for which the gauge is the norm on the cone.
    """
    gen = inst.generator
    cone = getattr(gen, "cone", None)
    if cone is None:
        raise ValueError("primal reference requires a ball-cap generator")
    a_mat = inst.A.entries
    b = np.asarray(inst.b, dtype=float)
    eps = float(inst.epsilon)

    if eps > 0.0:
        evd = np.linalg.eigh(a_mat @ a_mat.T)

        def project_residual(w):
            return _project_residual_ball(a_mat, b, eps, w, evd)

    else:
        pinv = np.linalg.pinv(a_mat)

        def project_residual(w):
            return w - pinv @ (a_mat @ w - b)

    def project_intersection(w):
        return _dykstra(cone.project, project_residual, w, dykstra_iters, 1e-14)

    x = project_intersection(np.zeros(inst.A.cols))
    for _ in range(max_outer):
        x_new = project_intersection((1.0 - shrink) * x)
        if float(np.linalg.norm(x_new - x)) <= tol * (1.0 + float(np.linalg.norm(x_new))):
            x = x_new
            break
        x = x_new

    feas = float(np.linalg.norm(a_mat @ x - b))
    scale = 1.0 + float(np.linalg.norm(b))
    if feas > eps + 1e-7 * scale or not cone.contains(x, 1e-7 * scale):
        raise OracleNonConvergenceError(
            f"projected-gradient reference did not reach the feasible set "
            f"(residual {feas:.3e}, eps {eps})"
        )
    return x, 0.5 * float(np.dot(x, x))


_GRID_CACHE: dict = {}
_GRID_CACHE_LIMIT = 8


def _generator_cache_key(gen):
    parts = [type(gen).__name__]
    for attr in ("cone", "points", "upper"):
        val = getattr(gen, attr, None)
        if val is None:
            continue
        if attr == "cone":
            parts.append(repr(val))
        else:
            parts.append(np.asarray(val, dtype=float).tobytes())
    return tuple(parts)


def _gauge_grid(gen, grid_radius, grid_n):
    """Grid points in [-R, R]^d and their gauge values (cached per generator)."""
    key = (_generator_cache_key(gen), float(grid_radius), int(grid_n))
    hit = _GRID_CACHE.get(key)
    if hit is not None:
        return hit
    dim = gen.dim
    axes = [np.linspace(-grid_radius, grid_radius, grid_n)] * dim
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    gauges = np.array([gen.gauge(p) for p in pts])
    if len(_GRID_CACHE) >= _GRID_CACHE_LIMIT:
        _GRID_CACHE.clear()
    _GRID_CACHE[key] = (pts, gauges)
    return pts, gauges


def conjugate_grid_check(gen, z, grid_radius, grid_n) -> float:
    """Grid-evaluated convex conjugate of 1/2 * gauge^2 at z.

    Returns max over grid x of <z, x> - 1/2 gauge(x)^2, which approximates
    1/2 * support_value(z)^2 from below (O(h) grid bias).
    """
    z = np.asarray(z, dtype=float)
    if gen.dim > 3:
        raise ValueError("grid conjugate restricted to dimension <= 3")
    pts, gauges = _gauge_grid(gen, grid_radius, grid_n)
    finite = np.isfinite(gauges)
    vals = pts[finite] @ z - 0.5 * gauges[finite] ** 2
    return float(np.max(vals)) if vals.size else 0.0
