"""Top-level decision procedures for conic linear feasibility.

Decides whether b lies in A(P) (or its closure), recovers solutions through
the dual optimality system, emits verifiable infeasibility certificates, and
computes the sharp constant of the quantified solvability inequality
<b, y> <= C * sigma(A* y), namely C = sqrt(2 * pi0) with pi0 the primal value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import oracle
from .cones import Cone, NonnegativeOrthant, SecondOrderCone
from .duality import Instance, dual_objective
from .generators import BallCap, PolytopeHull, extremality_check
from .operators import LinearMap, as_vector
from .solvers import (
    SolverConfig,
    SolveStatus,
    UnsupportedGeneratorError,
    minimize_dual,
    pdhg_solve,
)

__all__ = [
    "Verdict",
    "DualAttained",
    "AttainmentKind",
    "AttainmentDiagnosis",
    "Outcome",
    "InfeasibleProblemError",
    "UnresolvedError",
    "certificate_verify",
    "solve_approximate",
    "solve_exact",
    "farkas_constant",
    "least_norm_pseudoinverse",
    "diagnose_attainment",
    "relax_and_solve",
]

CERT_TOL = 1e-7


class Verdict(Enum):
    FEASIBLE = "feasible"
    INFEASIBLE_CLOSURE = "infeasible_closure"
    EXACT_INFEASIBLE_EVIDENCE = "exact_infeasible_evidence"
    UNRESOLVED = "unresolved"


class DualAttained(Enum):
    YES = "yes"
    NO = "no"
    SUSPECTED = "suspected"
    UNKNOWN = "unknown"


class AttainmentKind(Enum):
    ATTAINED_POSSIBLE = "AttainedPossible"
    ALL_NORMALS_ORTHOGONAL = "AllNormalsOrthogonal"
    NO_SHARED_NORMAL = "NoSharedNormal"


@dataclass(frozen=True)
class AttainmentDiagnosis:
    kind: AttainmentKind
    witness: np.ndarray | None = None


class InfeasibleProblemError(RuntimeError):
    """The requested operation needs a feasible instance."""


class UnresolvedError(RuntimeError):
    """The solver could not classify the instance within its budget."""


@dataclass
class Outcome:
    verdict: Verdict
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    certificate: np.ndarray | None = None
    gap: float | None = None
    pi: float | None = None
    lambda_star: float | None = None
    dual_attained: DualAttained = DualAttained.UNKNOWN
    unique_recovery: bool = False
    in_original_cone: bool | None = None
    iterations: int = 0
    generator_kind: str = ""
    notes: list = field(default_factory=list)
    report: object = field(default=None, repr=False)


def certificate_verify(inst: Instance, y, tol: float = CERT_TOL) -> bool:
    """True iff y witnesses b outside the closure of A(P).

    The test couples sigma-smallness to ||y|| and the positivity of <b, y>
    to ||y|| * ||b||: certificates are rays, only the direction matters.
    """
    y = np.asarray(y, dtype=float)
    ny = float(np.linalg.norm(y))
    if ny == 0.0:
        raise ValueError("certificate must be a nonzero vector")
    sigma = inst.generator.support_value(inst.A.adjoint_apply(y))
    pay = float(np.dot(inst.b, y))
    nb = float(np.linalg.norm(inst.b))
    return sigma <= tol * ny and pay > tol * ny * nb


def _default_cfg(cfg):
    return cfg if cfg is not None else SolverConfig(schedule="polyak_estimate")


def _recover_primal(inst: Instance, y, feas_band: float):
    """Primal candidate from the scaled support-face subgradient at A* y.

    When the nominal witness misses feasibility and the generator is a
    polytope hull, the support-face tie is widened progressively and convex
    weights over the tied vertices are found by a feasibility LP; that path
    marks the recovery non-unique.  Returns (x, unique, notes).
    """
    gen = inst.generator
    z = inst.A.adjoint_apply(y)
    x, unique = gen.scaled_subgradient(z)
    residual = float(np.linalg.norm(inst.A.apply(x) - inst.b))
    notes: list = []
    if residual <= inst.epsilon + feas_band:
        return x, unique, notes

    face = gen.support_face(z)
    sigma = face.value
    if isinstance(gen, PolytopeHull) and sigma > 0.0:
        if inst.epsilon == 0.0:
            target = inst.b
        else:
            # aim at the contact point of the active residual ball
            r = inst.A.apply(x) - inst.b
            nr = float(np.linalg.norm(r))
            target = inst.b + (inst.epsilon / nr) * r if nr > 0.0 else inst.b
        scale = 1.0 + float(np.linalg.norm(z))
        for widen in (1e-9, 1e-7, 1e-5, 1e-3, 1e-2):
            idx = gen.support_candidates(z, widen * scale * (1.0 + sigma))
            if len(idx) < 2:
                continue
            pts = gen.points[idx]
            eq = np.vstack([(inst.A.entries @ (sigma * pts.T)), np.ones(len(idx))])
            rhs = np.concatenate([target, [1.0]])
            try:
                sol = oracle.simplex_solve(oracle.LpProblem(np.zeros(len(idx)), eq, rhs))
            except oracle.LpNumericalError:
                continue
            if sol.status != "optimal":
                continue
            x_tie = sigma * (pts.T @ sol.lam)
            res_tie = float(np.linalg.norm(inst.A.apply(x_tie) - inst.b))
            if res_tie <= inst.epsilon + feas_band:
                notes.append(
                    "support face tie resolved by a feasibility LP over "
                    f"{len(idx)} tied vertices"
                )
                return x_tie, False, notes

    notes.append(f"recovered candidate misses feasibility by {residual:.3e}")
    return x, unique, notes


def _feasible_outcome(inst, x, y, unique, attained, report, notes):
    g = inst.generator.gauge(x)
    pi = 0.5 * g * g if np.isfinite(g) else None
    gap = (pi + dual_objective(inst, y)) if pi is not None and y is not None else None
    return Outcome(
        verdict=Verdict.FEASIBLE,
        x=x,
        y=y,
        gap=gap,
        pi=pi,
        lambda_star=g if np.isfinite(g) else None,
        dual_attained=attained,
        unique_recovery=unique,
        iterations=len(report.trace) if report is not None else 0,
        generator_kind=type(inst.generator).__name__,
        notes=notes,
        report=report,
    )


def solve_approximate(
    inst: Instance,
    cfg: SolverConfig | None = None,
    feas_tol: float = 1e-6,
    cert_tol: float = CERT_TOL,
) -> Outcome:
    """Decide the eps-approximate problem (eps > 0) and construct a solution.

    A converged dual yields x through the support-face recovery (Feasible);
    a diverging dual yields a verified certificate (InfeasibleClosure);
    anything else is Unresolved.
    """
    if inst.epsilon <= 0.0:
        raise ValueError("solve_approximate requires epsilon > 0")
    cfg = _default_cfg(cfg)
    report = minimize_dual(inst, cfg)
    feas_band = feas_tol * (1.0 + float(np.linalg.norm(inst.b)))

    if report.status == SolveStatus.CONVERGED:
        x, unique, notes = _recover_primal(inst, report.y_final, feas_band)
        residual = float(np.linalg.norm(inst.A.apply(x) - inst.b))
        if residual <= inst.epsilon + feas_band:
            return _feasible_outcome(
                inst, x, report.y_final, unique, DualAttained.YES, report, notes
            )
        return Outcome(
            verdict=Verdict.UNRESOLVED,
            y=report.y_final,
            dual_attained=DualAttained.YES,
            iterations=len(report.trace),
            generator_kind=type(inst.generator).__name__,
            notes=notes + ["dual converged but no feasible recovery"],
            report=report,
        )

    if report.status == SolveStatus.UNBOUNDED_BELOW and report.ray is not None:
        if certificate_verify(inst, report.ray, cert_tol):
            return Outcome(
                verdict=Verdict.INFEASIBLE_CLOSURE,
                y=report.ray,
                certificate=report.ray,
                iterations=len(report.trace),
                generator_kind=type(inst.generator).__name__,
                notes=["dual objective unbounded below along the certificate ray"],
                report=report,
            )

    notes = [f"solver status {report.status.value}, best value {report.best_value:.6e}"]
    if report.status == SolveStatus.MAX_ITER:
        x, unique, rec_notes = _recover_primal(inst, report.best_y, feas_band)
        residual = float(np.linalg.norm(inst.A.apply(x) - inst.b))
        if residual <= inst.epsilon + feas_band:
            g = inst.generator.gauge(x)
            if np.isfinite(g):
                pi = 0.5 * g * g
                gap = pi + report.best_value
                if gap <= max(1e-6, 100.0 * cfg.grad_tol) * (1.0 + abs(pi)):
                    out = _feasible_outcome(
                        inst, x, report.best_y, unique, DualAttained.YES, report, rec_notes
                    )
                    out.notes.append(
                        f"iteration budget reached; duality gap {gap:.3e} certifies the pair"
                    )
                    return out

    return Outcome(
        verdict=Verdict.UNRESOLVED,
        iterations=len(report.trace),
        generator_kind=type(inst.generator).__name__,
        notes=notes,
        report=report,
    )


def _diagnose_or_none(inst, x):
    cone = getattr(inst.generator, "cone", None)
    if cone is None or not isinstance(cone, (NonnegativeOrthant, SecondOrderCone)):
        return None
    try:
        return diagnose_attainment(inst.A, cone, x)
    except (oracle.LpSizeError, oracle.LpNumericalError):
        return None


def solve_exact(
    inst: Instance,
    cfg: SolverConfig | None = None,
    feas_tol: float = 1e-6,
    cert_tol: float = CERT_TOL,
) -> Outcome:
    """Decide the exact problem (eps = 0).

    A converged dual gives a constructive solution (dual_attained = yes).  A
    suspected non-attained infimum falls back to a primal method for x (x is
    then only weakly constructive; the shared-normal diagnostic corroborates
    non-attainment when it returns AllNormalsOrthogonal).  A diverging dual
    is evidence that no finite constant C satisfies <b, y> <= C sigma(A* y),
    i.e. b is outside A(P); a strict certificate is attached when it also
    verifies against the closure.
    """
    if inst.epsilon != 0.0:
        raise ValueError("solve_exact requires epsilon = 0")
    cfg = _default_cfg(cfg)
    report = minimize_dual(inst, cfg)
    feas_band = feas_tol * (1.0 + float(np.linalg.norm(inst.b)))
    gen_kind = type(inst.generator).__name__

    if report.status == SolveStatus.CONVERGED:
        x, unique, notes = _recover_primal(inst, report.y_final, feas_band)
        residual = float(np.linalg.norm(inst.A.apply(x) - inst.b))
        if residual <= feas_band:
            return _feasible_outcome(
                inst, x, report.y_final, unique, DualAttained.YES, report, notes
            )
        return Outcome(
            verdict=Verdict.UNRESOLVED,
            y=report.y_final,
            dual_attained=DualAttained.YES,
            iterations=len(report.trace),
            generator_kind=gen_kind,
            notes=notes + ["dual converged but no feasible recovery"],
            report=report,
        )

    if report.status == SolveStatus.UNBOUNDED_BELOW and report.ray is not None:
        cert = report.ray if certificate_verify(inst, report.ray, cert_tol) else None
        notes = [
            "dual objective unbounded below: no finite constant C satisfies "
            f"the solvability inequality (best value {report.best_value:.3e})"
        ]
        if cert is None:
            notes.append("ray does not verify as a strict closure certificate")
        return Outcome(
            verdict=Verdict.EXACT_INFEASIBLE_EVIDENCE,
            y=report.ray,
            certificate=cert,
            iterations=len(report.trace),
            generator_kind=gen_kind,
            notes=notes,
            report=report,
        )

    if report.status == SolveStatus.NON_ATTAINED_SUSPECTED:
        notes = ["dual infimum finite but suspected not attained"]
        candidates = []
        x_dual, _, rec_notes = _recover_primal(inst, report.best_y, feas_band)
        candidates.append(x_dual)
        if isinstance(inst.generator, BallCap):
            try:
                x_pd, _, _ = pdhg_solve(inst, cfg)
                candidates.append(x_pd)
            except UnsupportedGeneratorError:  # pragma: no cover - guarded above
                pass
            try:
                x_ref, _ = oracle.primal_reference(inst)
                candidates.append(x_ref)
            except oracle.OracleNonConvergenceError:
                notes.append("projected-gradient reference did not converge")
        # valid candidates are near-feasible AND inside the generated cone;
        # among them the least-gauge one matches the problem's own selection
        valid = []
        for c in candidates:
            if float(np.linalg.norm(inst.A.apply(c) - inst.b)) > feas_band:
                continue
            g = inst.generator.gauge(c)
            if np.isfinite(g):
                valid.append((g, c))
        if valid:
            x = min(valid, key=lambda t: t[0])[1]
            diag = _diagnose_or_none(inst, x)
            if diag is not None and diag.kind != AttainmentKind.ATTAINED_POSSIBLE:
                attained = DualAttained.NO
                notes.append(f"shared-normal diagnostic: {diag.kind.value}")
            else:
                attained = DualAttained.SUSPECTED
                if diag is not None:
                    notes.append(f"shared-normal diagnostic: {diag.kind.value}")
            out = _feasible_outcome(inst, x, report.best_y, False, attained, report, notes)
            out.notes.extend(rec_notes)
            return out
        return Outcome(
            verdict=Verdict.UNRESOLVED,
            iterations=len(report.trace),
            generator_kind=gen_kind,
            notes=notes + ["no primal fallback reached feasibility"],
            report=report,
        )

    # iteration budget exhausted: the best iterate may still certify a
    # feasible pair through the duality gap (support-face ties block the
    # solver's internal recovery, the widened recovery here does not)
    x, unique, notes = _recover_primal(inst, report.best_y, feas_band)
    residual = float(np.linalg.norm(inst.A.apply(x) - inst.b))
    if residual <= feas_band:
        g = inst.generator.gauge(x)
        if np.isfinite(g):
            pi = 0.5 * g * g
            gap = pi + report.best_value
            if gap <= max(1e-6, 100.0 * cfg.grad_tol) * (1.0 + abs(pi)):
                out = _feasible_outcome(
                    inst, x, report.best_y, unique, DualAttained.YES, report, notes
                )
                out.notes.append(
                    f"iteration budget reached; duality gap {gap:.3e} certifies the pair"
                )
                return out

    return Outcome(
        verdict=Verdict.UNRESOLVED,
        iterations=len(report.trace),
        generator_kind=gen_kind,
        notes=notes
        + [f"solver status {report.status.value}, best value {report.best_value:.6e}"],
        report=report,
    )


def farkas_constant(inst: Instance, cfg: SolverConfig | None = None) -> float:
    """Best constant C in <b, y> <= C * sigma(A* y): sqrt(2 * pi0).

    Returns +inf when b is outside A(P); raises UnresolvedError when the
    solver cannot classify the instance.
    """
    if inst.epsilon != 0.0:
        raise ValueError("the sharp constant is defined for the exact problem")
    if float(np.linalg.norm(inst.b)) == 0.0:
        return 0.0
    out = solve_exact(inst, cfg)
    if out.verdict == Verdict.FEASIBLE and out.pi is not None:
        return math.sqrt(2.0 * out.pi)
    if out.verdict in (Verdict.EXACT_INFEASIBLE_EVIDENCE, Verdict.INFEASIBLE_CLOSURE):
        return math.inf
    raise UnresolvedError("; ".join(out.notes) or "unresolved instance")


def least_norm_pseudoinverse(
    A: LinearMap, b, P: Cone, cfg: SolverConfig | None = None
) -> np.ndarray:
    """The unique minimum-norm x with A x = b, x in P.

    Computed via the exact solve over the ball-cap generator of P, whose
    recovery map is the projection of A* y onto P.
    """
    inst = Instance(A, as_vector(b, A.rows), BallCap(P), 0.0)
    out = solve_exact(inst, cfg)
    if out.verdict == Verdict.FEASIBLE and out.x is not None:
        return out.x
    if out.verdict in (Verdict.EXACT_INFEASIBLE_EVIDENCE, Verdict.INFEASIBLE_CLOSURE):
        raise InfeasibleProblemError("b is not in the image of the cone under A")
    raise UnresolvedError("; ".join(out.notes) or "unresolved instance")


def _orthant_attainment(A, P, x_star, tol):
    n = P.dim
    scale = 1.0 + float(np.linalg.norm(x_star))
    zero_set = np.flatnonzero(x_star <= tol * scale)
    at = A.entries.T  # n x m
    m = at.shape[1]
    slack_cols = np.zeros((n, len(zero_set)))
    for col, i in enumerate(zero_set):
        slack_cols[i, col] = 1.0
    # residual variables make the equalities tolerant to noise in x_star
    eye = np.eye(n)
    budget = max(1e-7, 10.0 * tol) * scale

    def solvable(eq, rhs, extra_cost_cols):
        nvars = eq.shape[1]
        cost = np.zeros(nvars)
        cost[extra_cost_cols] = 1.0
        sol = oracle.simplex_solve(oracle.LpProblem(cost, eq, rhs))
        if sol.status != "optimal":
            return None
        if sol.value > budget:
            return None
        return sol.lam

    # shared normal with positive pairing: A* y = x_star + w, w <= 0 on the
    # zero set of x_star (scaling fixes the conic coefficient at 1)
    eq = np.hstack([at, -at, slack_cols, eye, -eye])
    resid_cols = list(range(2 * m + len(zero_set), 2 * m + len(zero_set) + 2 * n))
    lam = solvable(eq, x_star.copy(), resid_cols)
    if lam is not None:
        y = lam[:m] - lam[m : 2 * m]
        v = A.adjoint_apply(y)
        pairing = float(np.dot(v, x_star))
        if pairing >= math.sqrt(tol) * float(np.linalg.norm(v)) * float(
            np.linalg.norm(x_star)
        ):
            return AttainmentDiagnosis(AttainmentKind.ATTAINED_POSSIBLE, v)

    if len(zero_set) > 0:
        # any nonzero shared normal is then orthogonal to x_star:
        # A* y = w, w <= 0 supported on the zero set, normalised by sum(-w) = 1
        eq = np.hstack([at, -at, slack_cols, eye, -eye])
        eq = np.vstack([eq, np.zeros(eq.shape[1])])
        eq[-1, 2 * m : 2 * m + len(zero_set)] = 1.0
        rhs = np.concatenate([np.zeros(n), [1.0]])
        lam = solvable(eq, rhs, resid_cols)
        if lam is not None:
            y = lam[:m] - lam[m : 2 * m]
            return AttainmentDiagnosis(
                AttainmentKind.ALL_NORMALS_ORTHOGONAL, A.adjoint_apply(y)
            )
    return AttainmentDiagnosis(AttainmentKind.NO_SHARED_NORMAL)


def _in_range_of_adjoint(A, v, tol):
    """Least-squares test for v in Ran(A*); returns (ok, y) with A* y ~ v."""
    y, *_ = np.linalg.lstsq(A.entries.T, v, rcond=None)
    resid = float(np.linalg.norm(A.adjoint_apply(y) - v))
    return resid <= tol * (1.0 + float(np.linalg.norm(v))), y


def _soc_attainment(A, P, x_star, tol):
    a = P.alpha
    scale = 1.0 + float(np.linalg.norm(x_star))
    head, t = x_star[:-1], x_star[-1]
    r = float(np.linalg.norm(head))

    if float(np.linalg.norm(x_star)) <= tol * scale:
        # degenerate contact at the apex: the zero normal suffices
        return AttainmentDiagnosis(AttainmentKind.ATTAINED_POSSIBLE, np.zeros(P.dim))

    interior = r < a * t - tol * scale
    in_range, _ = _in_range_of_adjoint(A, x_star, tol)
    if interior:
        # normal cone is the ray through x_star only
        if in_range:
            return AttainmentDiagnosis(AttainmentKind.ATTAINED_POSSIBLE, x_star.copy())
        return AttainmentDiagnosis(AttainmentKind.NO_SHARED_NORMAL)

    # boundary contact: normals are rho * x_star + kappa * n_polar with the
    # unique polar boundary ray orthogonal to x_star
    n_polar = np.empty(P.dim)
    if r <= tol * scale:
        return AttainmentDiagnosis(AttainmentKind.NO_SHARED_NORMAL)
    n_polar[:-1] = head / r
    n_polar[-1] = -a
    # solve Q^T (x_star + kappa * n_polar) = 0 over kappa >= 0, with Q a basis
    # of Ran(A*)^perp = ker(A)
    _, svals, vt = np.linalg.svd(A.entries)
    rank = int(np.sum(svals > 1e-12 * max(1.0, svals[0] if svals.size else 1.0)))
    q = vt[rank:].T  # n x (n - rank)
    if q.shape[1] == 0:
        return AttainmentDiagnosis(AttainmentKind.ATTAINED_POSSIBLE, x_star.copy())
    qx = q.T @ x_star
    qn = q.T @ n_polar
    nqn = float(np.linalg.norm(qn))
    if nqn <= tol:
        # the polar ray lies in Ran(A*): shared normals exist along it
        if in_range:
            return AttainmentDiagnosis(AttainmentKind.ATTAINED_POSSIBLE, x_star.copy())
        return AttainmentDiagnosis(AttainmentKind.ALL_NORMALS_ORTHOGONAL, n_polar)
    kappa = -float(np.dot(qn, qx)) / (nqn * nqn)
    consistent = float(np.linalg.norm(qx + kappa * qn)) <= tol * scale
    if consistent and kappa >= -tol:
        v = x_star + max(kappa, 0.0) * n_polar
        # the witness must pair with x_star robustly relative to its own
        # size; a huge kappa is the orthogonal failure mode in disguise
        # (the direction of v collapses onto the polar ray)
        pairing = float(np.dot(v, x_star))
        if pairing >= math.sqrt(tol) * float(np.linalg.norm(v)) * float(
            np.linalg.norm(x_star)
        ):
            return AttainmentDiagnosis(AttainmentKind.ATTAINED_POSSIBLE, v)
        return AttainmentDiagnosis(AttainmentKind.ALL_NORMALS_ORTHOGONAL, n_polar)
    in_range_n, _ = _in_range_of_adjoint(A, n_polar, tol)
    if in_range_n:
        return AttainmentDiagnosis(AttainmentKind.ALL_NORMALS_ORTHOGONAL, n_polar)
    return AttainmentDiagnosis(AttainmentKind.NO_SHARED_NORMAL)


def diagnose_attainment(A: LinearMap, P: Cone, x_star, tol: float = 1e-8):
    """Search Ran(A*) for a normal vector shared with the scaled generator at x_star.

    AttainedPossible means a shared normal v with <v, x_star> > 0 exists (the
    dual problem can attain its infimum); AllNormalsOrthogonal means shared
    normals exist but all pair to zero with x_star (the attainment failure
    mode); NoSharedNormal otherwise.  Implemented for the nonnegative orthant
    and the second-order cone.
    """
    x_star = np.asarray(x_star, dtype=float)
    if isinstance(P, NonnegativeOrthant):
        return _orthant_attainment(A, P, x_star, tol)
    if isinstance(P, SecondOrderCone):
        return _soc_attainment(A, P, x_star, tol)
    raise UnsupportedGeneratorError(
        f"attainment diagnosis not implemented for {type(P).__name__}"
    )


def relax_and_solve(
    A: LinearMap,
    b,
    raw_points,
    epsilon: float = 0.0,
    cfg: SolverConfig | None = None,
    collinear_tol: float = 1e-8,
) -> Outcome:
    """Relax the (possibly nonconvex) cone of the given rays and solve.

    Builds the polytope hull of the raw points, checks the extremality
    hypothesis (every vertex of the hull is a raw point), and solves.  When
    the recovery is unique and extremality holds, the solution is certified
    to lie in the original ray-generated cone and must be a nonnegative
    multiple of some raw point; a support-face tie leaves membership open.
    """
    pts = [np.asarray(p, dtype=float) for p in raw_points]
    if not pts:
        raise ValueError("need at least one raw generator point")
    gen = PolytopeHull(pts)
    holds, violating = extremality_check(pts)
    inst = Instance(A, as_vector(b, A.rows), gen, epsilon)
    out = solve_exact(inst, cfg) if epsilon == 0.0 else solve_approximate(inst, cfg)

    if out.verdict != Verdict.FEASIBLE or out.x is None:
        return out
    if not holds:
        out.notes.append(f"extremality hypothesis fails for {len(violating)} hull vertices")
        return out
    if not out.unique_recovery:
        out.notes.append(
            "support-face tie: recovery set is not a singleton, membership in "
            "the original ray cone not certified"
        )
        return out

    nx = float(np.linalg.norm(out.x))
    if nx <= collinear_tol:
        out.in_original_cone = True
        out.notes.append("solution is the apex, trivially in the original cone")
        return out
    ux = out.x / nx
    for p in pts:
        npn = float(np.linalg.norm(p))
        if npn == 0.0:
            continue
        if float(np.linalg.norm(ux - p / npn)) <= collinear_tol:
            out.in_original_cone = True
            out.notes.append("solution is collinear with a raw generator")
            return out
    out.notes.append("unique recovery did not match any raw generator direction")
    return out
