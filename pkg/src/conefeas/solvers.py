"""First-order minimisation of the dual functional.

Two methods:

* :func:`minimize_dual` — a subgradient method on J_eps with either a
  scheduled step (step0 / sqrt(k+1)) or Polyak-style steps estimated from the
  running best value and safeguarded by backtracking.  Radial moves along the
  ray through the current iterate are closed-form (the objective restricted
  to a ray is a quadratic in the radius), which both accelerates flat valleys
  and detects divergence: certificate-like directions escape geometrically.
* :func:`pdhg_solve` — a primal-dual hybrid gradient (Chambolle-Pock) scheme
  on the saddle formulation, for ball-cap generators where the primal
  proximal map is closed form.

Failure modes are statuses, never exceptions: the dual being unbounded below
witnesses infeasibility, and a stabilised value with monotonically growing
iterate norm flags a suspected non-attained infimum (only possible for
eps = 0; coercivity excludes it otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .duality import Instance, dual_objective, dual_state
from .operators import LinearMap

__all__ = [
    "SolveStatus",
    "SolverConfig",
    "SolveReport",
    "UnsupportedGeneratorError",
    "minimize_dual",
    "pdhg_solve",
    "estimate_operator_norm",
]

_NORM_CAP = 1e18  # hard iterate-norm cap; keeps ray arithmetic finite
_STALL_TOL = 1e-8  # best-value stabilisation threshold over the stall window


class SolveStatus(Enum):
    CONVERGED = "converged"
    UNBOUNDED_BELOW = "unbounded_below"
    NON_ATTAINED_SUSPECTED = "non_attained_suspected"
    MAX_ITER = "max_iter"


class UnsupportedGeneratorError(ValueError):
    """The requested method needs a generator variant it does not support."""


@dataclass(frozen=True)
class SolverConfig:
    max_iter: int = 20000
    step0: float = 1.0
    schedule: str = "inv_sqrt"  # or "polyak_estimate"
    grad_tol: float = 1e-8
    diverge_norm: float = 1e6
    diverge_obj: float = -1e9
    stall_window: int = 200
    pdhg_tau: float | None = None
    pdhg_sigma: float | None = None

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if self.step0 <= 0 or self.grad_tol <= 0 or self.diverge_norm <= 0:
            raise ValueError("step0, grad_tol, diverge_norm must be positive")
        if self.schedule not in ("inv_sqrt", "polyak_estimate"):
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if self.stall_window < 1:
            raise ValueError("stall_window must be positive")
        for s in (self.pdhg_tau, self.pdhg_sigma):
            if s is not None and s <= 0:
                raise ValueError("pdhg step sizes must be positive")


@dataclass
class SolveReport:
    status: SolveStatus
    y_final: np.ndarray
    best_value: float
    best_y: np.ndarray
    ray: np.ndarray | None = None
    trace: list = field(default_factory=list, repr=False)


def estimate_operator_norm(A: LinearMap, iters: int = 200, rel_tol: float = 1e-8) -> float:
    """Largest singular value of A by power iteration on A* A."""
    v = np.ones(A.cols) + 0.01 * np.arange(A.cols) / max(A.cols, 1)
    nv = float(np.linalg.norm(v))
    v /= nv
    prev = 0.0
    for _ in range(iters):
        w = A.adjoint_apply(A.apply(v))
        nw = float(np.linalg.norm(w))
        if nw <= 0.0:
            return 0.0
        v = w / nw
        est = math.sqrt(nw)
        if abs(est - prev) <= rel_tol * max(est, 1.0):
            break
        prev = est
    return float(np.linalg.norm(A.apply(v)))


def _ray_value(sigma_hat: float, pay: float, eps: float, t: float) -> float:
    """J(t * yhat) for a unit direction with sigma(A* yhat) = sigma_hat and
    <b, yhat> = pay; exact by positive homogeneity of each term."""
    return 0.5 * (t * sigma_hat) ** 2 - t * (pay - eps)


def minimize_dual(inst: Instance, cfg: SolverConfig | None = None, y0=None) -> SolveReport:
    """Minimise the dual functional; all failure modes are report statuses.

    Converges when the subgradient norm drops below ``grad_tol`` or when the
    duality gap against the recovered primal candidate closes.  A divergence
    ray is returned only when it satisfies the certificate contract
    (sigma(A* ray) <= 10 * grad_tol and <b, ray> > 0); otherwise the run is
    downgraded to MAX_ITER.
    """
    cfg = cfg or SolverConfig()
    eps = inst.epsilon
    b = inst.b
    nb = float(np.linalg.norm(b))
    dir_tol = 1e-12 * (1.0 + nb)

    y = np.zeros(inst.A.rows) if y0 is None else np.asarray(y0, dtype=float).copy()
    state = dual_state(inst, y)
    best_value = state.value
    best_y = y.copy()
    trace: list = []
    eta_adapt = cfg.step0
    gap_every = 20
    # rolling windows for the stall detector
    win_best: list = []
    win_norm: list = []
    # secant snapshot for displacement extrapolation (traverses flat curved
    # valleys where subgradient steps crawl); a long baseline keeps the
    # secant close to the valley tangent, and extrapolated points are
    # accepted only on strict descent, so the best-value trace stays monotone
    extrap_every = 5
    snap_max_age = 400
    y_snap = y.copy()
    snap_age = 0

    def report(status, ray=None):
        return SolveReport(status, y, best_value, best_y, ray, trace)

    def ray_contract_ok(sigma_hat, pay):
        return sigma_hat <= 10.0 * cfg.grad_tol and pay > 0.0

    # ordinary growth stops here: beyond this radius the support-face
    # recovery degrades through floating-point cancellation (error grows
    # like eps_mach * ||y||); only certificate escapes may exceed it
    growth_cap = max(1e7, 10.0 * cfg.diverge_norm)

    k = 0
    while k < cfg.max_iter:
        value, g, sigma = state.value, state.subgrad, state.sigma
        ny = float(np.linalg.norm(y))
        gn = float(np.linalg.norm(g))
        trace.append((k, value, ny, gn))
        if value < best_value:
            best_value = value
            best_y = y.copy()
        k += 1

        # Convergence is certified only by duality-gap closure against the
        # recovered primal candidate: a small subgradient alone is unsound in
        # flat valleys (it vanishes like 1/||y||^2 while the value gap decays
        # like 1/||y|| when the infimum is not attained).  The feasibility
        # slack must shrink with ||y|| since weak duality only degrades like
        # p + J(y) >= -||y|| * slack.
        if k % gap_every == 0 or k == 1 or gn <= cfg.grad_tol:
            x_rec, _ = inst.generator.scaled_subgradient(inst.A.adjoint_apply(y))
            slack = max(
                float(np.linalg.norm(inst.A.apply(x_rec) - b)) - eps, 0.0
            )
            if slack <= 1e-6 * (1.0 + nb):
                gauge = inst.generator.gauge(x_rec)
                if np.isfinite(gauge):
                    pobj = 0.5 * gauge * gauge
                    gap = pobj + value + ny * slack
                    if gap <= cfg.grad_tol * (1.0 + abs(pobj)):
                        return report(SolveStatus.CONVERGED)

        if ny > 0.0:
            yhat = y / ny
            sigma_hat = sigma / ny  # support value is positively homogeneous
            pay = float(np.dot(b, yhat))
            beta = pay - eps

            if beta > dir_tol:
                if sigma_hat <= max(cfg.grad_tol, 1e-14):
                    # certificate-like direction: escape geometrically
                    t_try = min(max(4.0 * ny, 1.0), _NORM_CAP)
                    v_try = _ray_value(sigma_hat, pay, eps, t_try)
                    if v_try < value - 1e-12 * (1.0 + abs(value)):
                        y = t_try * yhat
                        if v_try < cfg.diverge_obj or t_try > cfg.diverge_norm:
                            if ray_contract_ok(sigma_hat, pay):
                                best_value = min(best_value, v_try)
                                return report(SolveStatus.UNBOUNDED_BELOW, ray=yhat.copy())
                            return report(SolveStatus.MAX_ITER)
                        state = dual_state(inst, y)
                        continue
                else:
                    # exact minimisation of J along the current ray; only
                    # worthwhile for a material improvement, otherwise fall
                    # through to the step logic below
                    t_opt = min(beta / (sigma_hat * sigma_hat), growth_cap)
                    v_opt = _ray_value(sigma_hat, pay, eps, t_opt)
                    if v_opt < value - 1e-9 * (1.0 + abs(value)):
                        y = t_opt * yhat
                        if v_opt < cfg.diverge_obj:
                            if ray_contract_ok(sigma_hat, pay):
                                best_value = min(best_value, v_opt)
                                return report(SolveStatus.UNBOUNDED_BELOW, ray=yhat.copy())
                            return report(SolveStatus.MAX_ITER)
                        state = dual_state(inst, y)
                        continue

        if value < cfg.diverge_obj:
            if ny > 0.0 and ray_contract_ok(sigma / max(ny, 1e-300), float(np.dot(b, y)) / ny):
                return report(SolveStatus.UNBOUNDED_BELOW, ray=(y / ny))
            return report(SolveStatus.MAX_ITER)

        # suspected non-attainment: value stabilised while ||y|| keeps growing
        win_best.append(best_value)
        win_norm.append(ny)
        if len(win_best) > cfg.stall_window:
            win_best.pop(0)
            win_norm.pop(0)
            sane_value = best_value > 1e-3 * cfg.diverge_obj
            if eps == 0.0 and ny > cfg.diverge_norm and sane_value:
                improved = win_best[0] - best_value
                norms = np.asarray(win_norm)
                growing = norms[-1] >= norms[0] and np.all(
                    np.diff(norms) >= -1e-3 * norms[:-1]
                )
                if improved <= _STALL_TOL and growing:
                    return report(SolveStatus.NON_ATTAINED_SUSPECTED)
        if ny > _NORM_CAP / 8.0:
            # keep arithmetic finite; classify with what we can still certify
            if eps == 0.0:
                return report(SolveStatus.NON_ATTAINED_SUSPECTED)
            return report(SolveStatus.MAX_ITER)

        # subgradient step
        if cfg.schedule == "inv_sqrt":
            eta = cfg.step0 / math.sqrt(k)
            y = y - eta * g
            state = dual_state(inst, y)
            continue

        snap_age += 1
        if k % extrap_every == 0:
            d = y - y_snap
            if float(np.linalg.norm(d)) > 0.0:
                t, v_ext, y_ext = 1.0, value, None
                for _ in range(80):
                    y_try = y + t * d
                    if float(np.linalg.norm(y_try)) > growth_cap:
                        break
                    v_try = dual_objective(inst, y_try)
                    if v_try < v_ext - 1e-16 * (1.0 + abs(v_ext)):
                        y_ext, v_ext = y_try, v_try
                        t *= 2.0
                    else:
                        break
                if y_ext is not None:
                    # the pre-jump iterate becomes the next secant base, so
                    # the baseline spans the whole accepted jump
                    y_snap = y.copy()
                    snap_age = 0
                    y = y_ext
                    state = dual_state(inst, y)
                    continue
            if snap_age >= snap_max_age:
                y_snap = y.copy()
                snap_age = 0

        # curvature-adapted Armijo step: doubling on first-try success keeps
        # the step near 1/L on smooth pieces and avoids transverse zigzag
        eta = eta_adapt
        accepted = None
        first_try = True
        for _ in range(60):
            y_try = y - eta * g
            v_try = dual_objective(inst, y_try)
            if v_try <= value - 1e-4 * eta * gn * gn:
                accepted = (y_try, v_try)
                break
            first_try = False
            eta *= 0.5
            if eta * gn <= 1e-18 * (1.0 + ny):
                break
        if accepted is not None:
            eta_adapt = min(eta * 2.0, 1e14) if first_try else max(eta, 1e-14)
        else:
            eta_adapt = max(eta_adapt * 0.5, 1e-14)

        # Polyak candidate sized from the running best: jumps along flat
        # valleys where the curvature-adapted step is microscopic
        slack = 0.1 * (1.0 + abs(best_value)) / math.sqrt(k)
        eta_p = max((value - best_value) + slack, 0.0) / max(gn * gn, 1e-300)
        if eta_p > 4.0 * eta:
            y_p = y - eta_p * g
            if float(np.linalg.norm(y_p)) <= growth_cap:
                v_p = dual_objective(inst, y_p)
                bar = accepted[1] if accepted is not None else value
                if v_p < bar - 1e-16 * (1.0 + abs(bar)):
                    accepted = (y_p, v_p)

        if accepted is not None:
            y = accepted[0]
        else:
            # nonsmooth kink: fall back to the scheduled step
            y = y - (cfg.step0 / math.sqrt(k)) * g
        state = dual_state(inst, y)

    return report(SolveStatus.MAX_ITER)


def pdhg_solve(inst: Instance, cfg: SolverConfig | None = None, x0=None, z0=None):
    """Primal-dual hybrid gradient iterations on the saddle formulation.

    Restricted to ball-cap generators: the primal proximal map of
    1/2 ||.||^2 + (cone indicator) is project(P, w) / (1 + tau).  The dual
    proximal map shifts by -sigma * b and shrinks radially by sigma * eps.
    Returns (x, y, report) with y = -z the dual variable of J_eps; the run is
    CONVERGED when the duality gap at (x, y) closes.
    """
    cfg = cfg or SolverConfig()
    cone = getattr(inst.generator, "cone", None)
    if cone is None:
        raise UnsupportedGeneratorError(
            "pdhg_solve requires a ball-cap generator (closed-form primal prox)"
        )
    opnorm = estimate_operator_norm(inst.A)
    tau = cfg.pdhg_tau if cfg.pdhg_tau is not None else 0.95 / max(opnorm, 1e-12)
    sig = cfg.pdhg_sigma if cfg.pdhg_sigma is not None else 0.95 / max(opnorm, 1e-12)
    if tau * sig * opnorm * opnorm > 1.0 + 1e-12:
        raise ValueError("pdhg step sizes violate tau * sigma * ||A||^2 <= 1")

    eps = inst.epsilon
    b = inst.b
    x = np.zeros(inst.A.cols) if x0 is None else np.asarray(x0, dtype=float).copy()
    z = np.zeros(inst.A.rows) if z0 is None else np.asarray(z0, dtype=float).copy()
    xbar = x.copy()
    trace: list = []
    best_value = math.inf
    best_y = -z
    status = SolveStatus.MAX_ITER
    check_every = 25

    for k in range(cfg.max_iter):
        u = z + sig * (inst.A.apply(xbar) - b)
        if eps > 0.0:
            nu = float(np.linalg.norm(u))
            z = u * max(0.0, 1.0 - sig * eps / nu) if nu > 0.0 else np.zeros_like(u)
        else:
            z = u
        x_new = cone.project(x - tau * inst.A.adjoint_apply(z)) / (1.0 + tau)
        step_res = float(np.linalg.norm(x_new - x)) / tau
        xbar = 2.0 * x_new - x
        x = x_new

        if k % check_every == 0 or k == cfg.max_iter - 1:
            y = -z
            value = dual_objective(inst, y)
            trace.append((k, value, float(np.linalg.norm(z)), step_res))
            if value < best_value:
                best_value = value
                best_y = y.copy()
            slack = max(float(np.linalg.norm(inst.A.apply(x) - b)) - eps, 0.0)
            if slack <= cfg.grad_tol / (1.0 + float(np.linalg.norm(z))):
                gauge = inst.generator.gauge(x)
                if np.isfinite(gauge):
                    pobj = 0.5 * gauge * gauge
                    gap = pobj + value + float(np.linalg.norm(z)) * slack
                    if gap <= cfg.grad_tol * (1.0 + abs(pobj)):
                        status = SolveStatus.CONVERGED
                        break

    y = -z
    report = SolveReport(status, y, best_value, best_y, None, trace)
    return x, y, report
