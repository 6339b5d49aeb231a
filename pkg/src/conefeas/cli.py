"""Command-line interface: parse problem files, normalise, solve, emit JSON.

Input is a UTF-8 JSON document::

    { "A": [[...], ...], "b": [...], "epsilon": 0.0,
      "cone": {"type": "orthant"} | {"type": "soc", "alpha": 1.0}
            | {"type": "subspace", "basis": [[...]]}
            | {"type": "rays", "rays": [[...]]} }

or with an explicit ``generator`` ({"type": "ball_cap", "cone": {...}} |
{"type": "polytope", "points": [[...]]} | {"type": "box", "upper": [...]});
a bare ``cone`` implies the ball-cap generator over it.

Before solving, b is rescaled so that ||b|| lies in [0.5, 2] (the problem is
positively homogeneous in b); solutions, certificates and values are rescaled
back on output.  Exit codes: 0 feasible, 2 infeasible (closure certificate or
exact evidence), 3 unresolved, 1 input/IO error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .cones import (
    LinearSubspace,
    NonnegativeOrthant,
    PolyhedralRays,
    SecondOrderCone,
)
from .duality import Instance, dual_objective, primal_objective
from .farkas import (
    DualAttained,
    InfeasibleProblemError,
    Outcome,
    UnresolvedError,
    Verdict,
    certificate_verify,
    diagnose_attainment,
    least_norm_pseudoinverse,
    solve_approximate,
    solve_exact,
)
from .generators import BallCap, Box, PolytopeHull
from .operators import LinearMap, as_vector
from .solvers import SolverConfig, pdhg_solve

__all__ = ["main", "SchemaError"]


class SchemaError(ValueError):
    """Problem file violates the input schema; names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.field_path = path


def _format_scalar(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return json.dumps(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            return "null"
        return format(v, ".17g")
    raise TypeError(f"cannot serialise {type(v)!r}")


def _to_json(obj, indent=0):
    """Serialise with floats at 17 significant digits, keys in insertion order."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  {json.dumps(k)}: {_to_json(v, indent + 1)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        flat = all(not isinstance(v, (dict, list, tuple)) for v in obj)
        if flat:
            return "[" + ", ".join(_format_scalar(v) for v in obj) + "]"
        items = [f"{pad}  {_to_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _format_scalar(obj)


def _vector_list(x):
    return None if x is None else [float(v) for v in np.asarray(x)]


def _require(doc, key, path):
    if key not in doc:
        raise SchemaError(f"{path}.{key}", "missing required field")
    return doc[key]


def _build_cone(spec, dim, path):
    if not isinstance(spec, dict):
        raise SchemaError(path, "cone must be an object")
    kind = _require(spec, "type", path)
    try:
        if kind == "orthant":
            return NonnegativeOrthant(dim)
        if kind == "soc":
            alpha = float(spec.get("alpha", 1.0))
            return SecondOrderCone(dim, alpha)
        if kind == "subspace":
            return LinearSubspace(_require(spec, "basis", path))
        if kind == "rays":
            return PolyhedralRays(_require(spec, "rays", path))
    except (ValueError, TypeError) as exc:
        raise SchemaError(path, str(exc)) from exc
    raise SchemaError(f"{path}.type", f"unknown cone type {kind!r}")


def _build_generator(doc, dim):
    if "generator" in doc:
        spec = doc["generator"]
        if not isinstance(spec, dict):
            raise SchemaError("generator", "generator must be an object")
        kind = _require(spec, "type", "generator")
        try:
            if kind == "ball_cap":
                cone = _build_cone(_require(spec, "cone", "generator"), dim, "generator.cone")
                return BallCap(cone)
            if kind == "polytope":
                return PolytopeHull(_require(spec, "points", "generator"))
            if kind == "box":
                return Box(_require(spec, "upper", "generator"))
        except SchemaError:
            raise
        except (ValueError, TypeError) as exc:
            raise SchemaError("generator", str(exc)) from exc
        raise SchemaError("generator.type", f"unknown generator type {kind!r}")
    if "cone" in doc:
        return BallCap(_build_cone(doc["cone"], dim, "cone"))
    raise SchemaError("cone", "problem needs either a cone or a generator")


def load_problem(path):
    """Parse and validate a problem file into (A, b, generator, epsilon)."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SchemaError(path, f"cannot read file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(path, f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("$", "top level must be an object")
    try:
        A = LinearMap(_require(doc, "A", "$"))
    except (ValueError, TypeError) as exc:
        raise SchemaError("A", str(exc)) from exc
    try:
        b = as_vector(_require(doc, "b", "$"), A.rows)
    except (ValueError, TypeError) as exc:
        raise SchemaError("b", str(exc)) from exc
    eps_raw = doc.get("epsilon", 0.0)
    if not isinstance(eps_raw, (int, float)) or isinstance(eps_raw, bool):
        raise SchemaError("epsilon", "must be a number")
    eps = float(eps_raw)
    if not (eps >= 0.0 and math.isfinite(eps)):
        raise SchemaError("epsilon", "must be finite and >= 0")
    generator = _build_generator(doc, A.cols)
    if generator.dim != A.cols:
        raise SchemaError("generator", f"dimension {generator.dim} != A columns {A.cols}")
    return A, b, generator, eps


def _normalisation_scale(b):
    nb = float(np.linalg.norm(b))
    if nb == 0.0 or 0.5 <= nb <= 2.0:
        return 1.0
    return 1.0 / nb


def _solver_config(args):
    kwargs = {"schedule": "polyak_estimate"}
    if args.max_iter is not None:
        kwargs["max_iter"] = args.max_iter
    if args.tol is not None:
        kwargs["grad_tol"] = args.tol
    return SolverConfig(**kwargs)


def _outcome_document(out: Outcome, scale: float, eps: float) -> dict:
    s = scale
    pi = None if out.pi is None else out.pi / (s * s)
    c_of_b = None
    if eps == 0.0 and out.verdict == Verdict.FEASIBLE and pi is not None:
        c_of_b = math.sqrt(2.0 * pi)
    cert = out.certificate
    if cert is not None:
        nc = float(np.linalg.norm(cert))
        cert = cert / nc if nc > 0 else cert
    return {
        "verdict": out.verdict.value,
        "x": _vector_list(None if out.x is None else out.x / s),
        "y": _vector_list(None if out.y is None else out.y / s),
        "certificate": _vector_list(cert),
        "gap": None if out.gap is None else out.gap / (s * s),
        "pi": pi,
        "lambda_star": None if out.lambda_star is None else out.lambda_star / s,
        "C_of_b": c_of_b,
        "dual_attained": out.dual_attained.value,
        "unique_recovery": out.unique_recovery,
        "in_original_cone": out.in_original_cone,
        "iterations": out.iterations,
        "normalisation": {"scale": s},
    }


_EXIT_BY_VERDICT = {
    Verdict.FEASIBLE: 0,
    Verdict.INFEASIBLE_CLOSURE: 2,
    Verdict.EXACT_INFEASIBLE_EVIDENCE: 2,
    Verdict.UNRESOLVED: 3,
}


def _write_trace(path, report):
    rows = report.trace if report is not None else []
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("iter,J_value,y_norm,subgrad_norm\n")
        for it, value, y_norm, g_norm in rows:
            fh.write(
                f"{it},{value:.17g},{y_norm:.17g},{g_norm:.17g}\n"
            )


def _solve_instance(A, b, generator, eps, cfg, solver):
    scale = _normalisation_scale(b)
    inst = Instance(A, b * scale, generator, eps * scale)
    if solver == "pdhg":
        x, y, report = pdhg_solve(inst, cfg)
        residual = float(np.linalg.norm(A.apply(x) - inst.b))
        band = 1e-6 * (1.0 + float(np.linalg.norm(inst.b)))
        if residual <= inst.epsilon + band:
            pobj = primal_objective(inst, x)
            pi = pobj if math.isfinite(pobj) else 0.5 * float(np.dot(x, x))
            out = Outcome(
                verdict=Verdict.FEASIBLE,
                x=x,
                y=y,
                gap=pi + dual_objective(inst, y),
                pi=pi,
                lambda_star=math.sqrt(2.0 * pi),
                dual_attained=DualAttained.UNKNOWN,
                unique_recovery=True,
                iterations=len(report.trace),
                generator_kind=type(generator).__name__,
                report=report,
            )
        else:
            out = Outcome(
                verdict=Verdict.UNRESOLVED,
                iterations=len(report.trace),
                generator_kind=type(generator).__name__,
                notes=[f"pdhg residual {residual:.3e} above tolerance"],
                report=report,
            )
    elif inst.epsilon > 0.0:
        out = solve_approximate(inst, cfg)
    else:
        out = solve_exact(inst, cfg)
    return out, scale


def cmd_solve(args) -> int:
    A, b, generator, eps = load_problem(args.path)
    cfg = _solver_config(args)
    out, scale = _solve_instance(A, b, generator, eps, cfg, args.solver)
    if args.trace:
        _write_trace(args.trace, out.report)
    print(_to_json(_outcome_document(out, scale, eps)))
    return _EXIT_BY_VERDICT[out.verdict]


def cmd_certify(args) -> int:
    A, b, generator, eps = load_problem(args.path)
    try:
        y = as_vector(json.loads(args.y), A.rows)
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: invalid certificate vector: {exc}", file=sys.stderr)
        return 1
    ny = float(np.linalg.norm(y))
    if ny == 0.0:
        print("error: certificate must be a nonzero vector", file=sys.stderr)
        return 1
    inst = Instance(A, b, generator, eps)
    sigma_ratio = generator.support_value(A.adjoint_apply(y)) / ny
    nb = float(np.linalg.norm(b))
    pay_ratio = float(np.dot(b, y)) / (ny * nb) if nb > 0 else 0.0
    print(f"sigma(A* y) / ||y|| = {sigma_ratio:.17g}")
    print(f"<b, y> / (||y|| ||b||) = {pay_ratio:.17g}")
    ok = certificate_verify(inst, y, tol=args.tol if args.tol else 1e-7)
    print("certificate: VALID" if ok else "certificate: invalid")
    return 0 if ok else 2


def cmd_diagnose(args) -> int:
    A, b, generator, eps = load_problem(args.path)
    cfg = _solver_config(args)
    out, scale = _solve_instance(A, b, generator, eps, cfg, "subgrad")
    if out.verdict != Verdict.FEASIBLE or out.x is None:
        print(f"verdict: {out.verdict.value}; no primal point to diagnose")
        return _EXIT_BY_VERDICT[out.verdict]
    cone = getattr(generator, "cone", None)
    if cone is None:
        print("diagnosis requires a ball-cap generator")
        return 1
    diag = diagnose_attainment(A, cone, out.x)
    attained = {"yes": "Yes", "no": "No", "suspected": "Suspected", "unknown": "Unknown"}[
        out.dual_attained.value
    ]
    print(f"{diag.kind.value}; dual attainment: {attained}")
    return 0


def cmd_pinv(args) -> int:
    A, b, generator, eps = load_problem(args.path)
    cone = getattr(generator, "cone", None)
    if cone is None:
        print("error: pinv requires a cone (ball-cap generator)", file=sys.stderr)
        return 1
    scale = _normalisation_scale(b)
    cfg = _solver_config(args)
    try:
        x = least_norm_pseudoinverse(A, b * scale, cone, cfg)
    except InfeasibleProblemError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except UnresolvedError as exc:
        print(f"unresolved: {exc}", file=sys.stderr)
        return 3
    print(_to_json(_vector_list(x / scale)))
    return 0


def _bench_instance(rng, index):
    """One seeded benchmark instance: feasible, boundary, or infeasible."""
    m = int(rng.integers(2, 6))
    n = int(rng.integers(2, 7))
    eps = 0.0 if index % 2 == 0 else 0.1
    regime = index % 3
    if regime == 2:
        # nonnegative matrix maps the orthant into the orthant, so a negative
        # component puts b strictly outside the closure of the image
        a_mat = rng.uniform(0.1, 1.0, size=(m, n))
        b = rng.uniform(0.2, 1.0, size=m)
        b[int(rng.integers(0, m))] = -1.0
    else:
        a_mat = rng.normal(size=(m, n))
        x0 = rng.uniform(0.0, 1.0, size=n)
        if regime == 1:
            x0[rng.random(size=n) < 0.5] = 0.0  # boundary of the cone
        b = a_mat @ x0
    A = LinearMap(a_mat)
    return A, as_vector(b), NonnegativeOrthant(n), eps, regime


def cmd_bench(args) -> int:
    rng = np.random.default_rng(args.seed)
    instances = [_bench_instance(rng, i) for i in range(args.count)]
    cfg = SolverConfig(schedule="polyak_estimate", max_iter=args.max_iter or 20000)

    def run(item):
        idx, (A, b, cone, eps, regime) = item
        out, scale = _solve_instance(A, b, BallCap(cone), eps, cfg, "subgrad")
        inst = Instance(A, b * scale, BallCap(cone), eps * scale)
        cert_ok = False
        if out.certificate is not None:
            cert_ok = certificate_verify(inst, out.certificate)
        feas_ok = False
        if out.verdict == Verdict.FEASIBLE and out.x is not None:
            residual = float(np.linalg.norm(A.apply(out.x) - inst.b))
            feas_ok = residual <= inst.epsilon + 1e-6 * (1.0 + float(np.linalg.norm(inst.b)))
        return idx, regime, out, cert_ok, feas_ok

    with ThreadPoolExecutor(max_workers=min(8, args.count or 1)) as pool:
        results = sorted(pool.map(run, enumerate(instances)), key=lambda r: r[0])

    gaps, cert_count, violations = [], 0, 0
    counts: dict = {}
    regime_names = {0: "feasible", 1: "boundary", 2: "infeasible"}
    for idx, regime, out, cert_ok, feas_ok in results:
        counts[out.verdict.value] = counts.get(out.verdict.value, 0) + 1
        if out.gap is not None:
            gaps.append(abs(out.gap))
        if cert_ok:
            cert_count += 1
        if cert_ok and feas_ok:
            violations += 1
        if out.verdict == Verdict.INFEASIBLE_CLOSURE and not cert_ok:
            violations += 1
        if args.dir:
            _dump_bench_case(args.dir, idx, regime_names[regime], out)
    print(f"instances: {len(results)}  seed: {args.seed}")
    for verdict in sorted(counts):
        print(f"  {verdict}: {counts[verdict]}")
    if gaps:
        print(f"gap |max|: {max(gaps):.17g}  gap mean: {sum(gaps) / len(gaps):.17g}")
    print(f"certificates verified: {cert_count}")
    print(f"exclusivity violations: {violations}")
    return 0 if violations == 0 else 3


def _dump_bench_case(directory, idx, regime, out):
    import os

    os.makedirs(directory, exist_ok=True)
    doc = _outcome_document(out, 1.0, 0.0)
    doc["regime"] = regime
    with open(os.path.join(directory, f"bench_{idx:04d}.json"), "w", encoding="utf-8") as fh:
        fh.write(_to_json(doc))
        fh.write("\n")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="conefeas",
        description="Conic linear-feasibility solver with Farkas certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--max-iter", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=0)

    p_solve = sub.add_parser("solve", help="solve a problem file")
    p_solve.add_argument("path")
    p_solve.add_argument("--trace", default=None, help="write a CSV convergence trace")
    p_solve.add_argument("--solver", choices=["subgrad", "pdhg"], default="subgrad")
    common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_cert = sub.add_parser("certify", help="verify an infeasibility certificate")
    p_cert.add_argument("path")
    p_cert.add_argument("--y", required=True, help="certificate vector as a JSON list")
    common(p_cert)
    p_cert.set_defaults(func=cmd_certify)

    p_diag = sub.add_parser("diagnose", help="dual attainment diagnosis")
    p_diag.add_argument("path")
    common(p_diag)
    p_diag.set_defaults(func=cmd_diagnose)

    p_pinv = sub.add_parser("pinv", help="cone-constrained least-norm pseudoinverse")
    p_pinv.add_argument("path")
    common(p_pinv)
    p_pinv.set_defaults(func=cmd_pinv)

    p_bench = sub.add_parser("bench", help="seeded random instance sweep")
    p_bench.add_argument("--dir", default=None, help="dump outcomes into this directory")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--count", type=int, default=20)
    p_bench.add_argument("--max-iter", type=int, default=None)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
