"""Command-line front end.

Subcommands: catalog, check-ellipticity, check-class-u, check-class-m,
bounds, counterexample, sums-demo. Reports print as human-readable lines by
default and as canonical JSON (sorted keys, two-space indent, no timestamps)
with --json, so identical seeds give byte-identical output.

Exit codes: 0 when the outcome matches the expectation (--expect defaults to
pass for checks and bounds, fail for counterexamples), 1 when it does not,
2 on usage or input errors. The environment variable ELLIPTIC_TOL overrides
the default Loewner tolerance everywhere.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import (
    BadArgument,
    BadParams,
    DimMismatch,
    InvalidMatrix,
    NotInClassM,
    OutOfDomain,
    SamplingExhausted,
    ToolkitError,
)
from .falsify import (
    Certificate,
    PassReport,
    SampleConfig,
    check_class_m,
    check_class_u,
    check_degenerate_ellipticity,
    counterexample,
)
from .operators import JetPoint, OperatorDescriptor, catalog, operator_from_json
from .symmat import (
    SymmetricMatrix,
    matrix_from_json_obj,
    matrix_to_json_obj,
    operator_norm,
    parse_matrix_text,
)
from .sums import (
    EpsilonSchedule,
    extract_limit,
    generate_admissible,
    hessian_blocks,
    lemma_upper_bound,
    quadratic_doubling,
    verify_eq1,
)
from .witnesses import (
    auto_witness_pair,
    class_u_constant,
    corollary_bounds,
    theorem_lower_bounds,
)

_INPUT_ERRORS = (BadParams, BadArgument, InvalidMatrix, DimMismatch, OutOfDomain,
                 SamplingExhausted, json.JSONDecodeError)


def _parse_operator(text: str) -> OperatorDescriptor:
    return operator_from_json(json.loads(text))


def _parse_matrix(text: str) -> SymmetricMatrix:
    """Inline JSON, or @path to a file in the text or JSON matrix format."""
    if text.startswith("@"):
        content = Path(text[1:]).read_text()
        if content.lstrip().startswith("{"):
            return matrix_from_json_obj(json.loads(content))
        return parse_matrix_text(content)
    return matrix_from_json_obj(json.loads(text))


def _parse_vector(text: str) -> np.ndarray:
    vec = np.asarray(json.loads(text), dtype=float)
    if vec.ndim != 1:
        raise BadParams(f"expected a JSON list of numbers, got {text!r}")
    return vec


def _default_jets(dim: int, nu_text: str | None):
    nu = _parse_vector(nu_text) if nu_text else None
    if nu is None:
        nu = np.zeros(dim)
        nu[0] = 1.0
    if nu.shape != (dim,):
        raise BadParams(f"nu must have length {dim}")
    omega = JetPoint(np.zeros(dim), 0.0, nu)
    return omega, omega


def _emit(obj: dict, args) -> None:
    if args.json:
        text = json.dumps(obj, indent=2, sort_keys=True)
        print(text)
        if getattr(args, "output", None):
            Path(args.output).write_text(text + "\n")
        return
    _emit_human(obj)
    if getattr(args, "output", None):
        Path(args.output).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _emit_human(obj: dict) -> None:
    kind = obj.get("type")
    if kind == "pass_report":
        print(f"PASS  {obj['kind']}  trials={obj['trials']} probes={obj['probes']} "
              f"{obj.get('details', {})}")
    elif kind == "certificate":
        print(f"VIOLATION  {obj['kind']}  margin={obj['margin']:.6g}")
        print(f"  {obj['description']}")
        print(f"  values: {obj['inequality_values']}")
    elif kind == "bound_report":
        print(f"BOUNDS  lower_X={obj['lower_X']:.10g}  lower_negY={obj['lower_negY']:.10g}  "
              f"upper_block_ok={obj['upper_block_ok']}  witness={obj['witness']}")
    elif kind == "catalog":
        for row in obj["families"]:
            print(f"{row['family']:<20} domain: {row['domain']:<40} fields: {row['fields']}")
    elif kind == "sums_trace":
        print(f"SUMS  op={obj['operator']}  alpha={obj['alpha']} dim={obj['dim']} "
              f"terms={len(obj['pairs'])}")
        rep = obj["report"]
        print(f"  lower_X={rep['lower_X']:.10g} lower_negY={rep['lower_negY']:.10g} "
              f"upper_block_ok={rep['upper_block_ok']} "
              f"implications_ok={rep['details']['implications_ok']}")
    else:
        print(json.dumps(obj, indent=2, sort_keys=True))


def _finish(obj: dict, outcome: str, args) -> int:
    """outcome is 'pass' or 'violation'; exit 0 iff it matches --expect."""
    _emit(obj, args)
    expected = args.expect
    return 0 if ((outcome == "pass") == (expected == "pass")) else 1


def _add_common(sub, default_expect: str = "pass"):
    sub.add_argument("--json", action="store_true", help="emit canonical JSON")
    sub.add_argument("--output", help="also write the JSON report to this path")
    sub.add_argument("--expect", choices=("pass", "fail"), default=default_expect,
                     help=f"exit 0 when the outcome matches (default: {default_expect})")


def _add_sampling(sub):
    sub.add_argument("--dim", type=int, required=True, help="matrix dimension N")
    sub.add_argument("--trials", type=int, default=10_000)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--scale", type=float, default=1.0)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="classm",
        description="Degenerate elliptic operator toolkit: membership checks, "
                    "counterexamples, bounds, and the two-sided block inequality pipeline.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("catalog", help="list operator families and their JSON fields")
    s.add_argument("--json", action="store_true")
    s.add_argument("--output", help="also write the JSON report to this path")

    s = subs.add_parser("check-ellipticity", help="sample X <= Y and test F(X) >= F(Y)")
    s.add_argument("--op", required=True, help="operator spec JSON")
    _add_sampling(s)
    _add_common(s)

    s = subs.add_parser("check-class-u", help="sample the uniform-ellipticity gap")
    s.add_argument("--op", required=True)
    s.add_argument("--lam", type=float, default=1.0, help="gap slope lambda > 0")
    s.add_argument("--hconst", type=float, default=0.0, help="constant H(omega)")
    _add_sampling(s)
    _add_common(s)

    s = subs.add_parser("check-class-m",
                        help="check witness conditions 1-4 with the canonical witness pair")
    s.add_argument("--op", required=True)
    s.add_argument("--lam", type=float, default=None,
                   help="embed a (lam, hconst) Class U witness instead of the family default")
    s.add_argument("--hconst", type=float, default=0.0)
    s.add_argument("--nu", default=None, help="gradient slot as a JSON list (default e1)")
    _add_sampling(s)
    _add_common(s)

    s = subs.add_parser("bounds", help="lower bounds from witness or Class U route")
    s.add_argument("--op", required=True)
    s.add_argument("--E", required=True, help="matrix JSON or @path (text/JSON formats)")
    s.add_argument("--D", required=True, help="matrix JSON or @path")
    s.add_argument("--route", choices=("theorem", "corollary"), default="theorem")
    s.add_argument("--lam", type=float, default=None)
    s.add_argument("--hconst", type=float, default=0.0)
    s.add_argument("--nu", default=None, help="gradient slot as a JSON list (default e1)")
    _add_common(s)

    s = subs.add_parser("counterexample", help="reproduce a named construction")
    s.add_argument("--name", required=True,
                   choices=("inf_laplace", "k_hessian", "p1_laplace", "power_not_u",
                            "p_laplace_not_u", "bounded_h"))
    s.add_argument("--dim", type=int, default=None)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--c", type=float, default=None)
    s.add_argument("--p", type=float, default=None)
    s.add_argument("--lam", type=float, default=None)
    s.add_argument("--hconst", type=float, default=None)
    s.add_argument("--d-root", type=int, default=None, dest="d_root",
                   help="odd root exponent d for power_not_u")
    s.add_argument("--homog", action="store_true",
                   help="use the homogeneous variant (inf_laplace only)")
    _add_common(s, default_expect="fail")

    s = subs.add_parser("sums-demo",
                        help="run the full pipeline on the quadratic doubling family")
    s.add_argument("--alpha", type=float, default=1.0)
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--op", required=True)
    s.add_argument("--eps0", type=float, default=1.0)
    s.add_argument("--terms", type=int, default=40)
    s.add_argument("--ratio", type=float, default=0.5)
    s.add_argument("--slack", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--lam", type=float, default=None)
    s.add_argument("--hconst", type=float, default=0.0)
    _add_common(s)
    return parser


def _fallback_certificate(op: OperatorDescriptor, dim: int) -> Certificate:
    """Divergence certificate for families with no witness pair."""
    fam = op.family
    if fam in ("inf_laplace", "inf_laplace_homog"):
        return counterexample("inf_laplace", dim=dim, homogeneous=fam.endswith("homog"))
    if fam in ("p_laplace", "p_laplace_homog"):
        return counterexample("p1_laplace", dim=dim)
    if fam == "k_hessian":
        return counterexample("k_hessian", dim=dim, k=min(op.params["k"], dim))
    if fam == "eig_sum":
        return counterexample("bounded_h", dim=dim, h=op.params["h"])
    raise NotInClassM(f"no witness pair and no divergence construction for {op.name}")


def _cmd_check_ellipticity(args) -> int:
    op = _parse_operator(args.op)
    cfg = SampleConfig(seed=args.seed, trials=args.trials, scale=args.scale, dim=args.dim)
    result = check_degenerate_ellipticity(op, cfg)
    outcome = "pass" if isinstance(result, PassReport) else "violation"
    return _finish(result.to_json_obj(), outcome, args)


def _cmd_check_class_u(args) -> int:
    op = _parse_operator(args.op)
    w = class_u_constant(args.lam, args.hconst)
    cfg = SampleConfig(seed=args.seed, trials=args.trials, scale=args.scale, dim=args.dim)
    result = check_class_u(op, w, cfg)
    outcome = "pass" if isinstance(result, PassReport) else "violation"
    return _finish(result.to_json_obj(), outcome, args)


def _cmd_check_class_m(args) -> int:
    op = _parse_operator(args.op)
    omega_x, omega_y = _default_jets(args.dim, args.nu)
    try:
        g1, g2 = auto_witness_pair(op, omega_x, omega_y, lam=args.lam, h_const=args.hconst)
    except NotInClassM:
        cert = _fallback_certificate(op, args.dim)
        return _finish(cert.to_json_obj(), "violation", args)
    cfg = SampleConfig(seed=args.seed, trials=args.trials, scale=args.scale, dim=args.dim)
    result = check_class_m(op, g1, g2, cfg)
    outcome = "pass" if isinstance(result, PassReport) else "violation"
    return _finish(result.to_json_obj(), outcome, args)


def _cmd_bounds(args) -> int:
    op = _parse_operator(args.op)
    e = _parse_matrix(args.E)
    d = _parse_matrix(args.D)
    omega_x, omega_y = _default_jets(e.dim, args.nu)
    if args.route == "corollary":
        lam = args.lam
        if lam is None and op.family == "linear_uniform":
            lam = op.params["theta"]
        if lam is None:
            raise BadParams("--route corollary needs --lam (or a linear_uniform operator)")
        report = corollary_bounds(op, class_u_constant(lam, args.hconst),
                                  omega_x, omega_y, e, d)
    else:
        g1, g2 = auto_witness_pair(op, omega_x, omega_y, lam=args.lam, h_const=args.hconst)
        report = theorem_lower_bounds(g1, g2, e, d)
    return _finish(report.to_json_obj(), "pass", args)


def _cmd_counterexample(args) -> int:
    params = {}
    if args.dim is not None:
        params["dim"] = args.dim
    if args.name == "k_hessian":
        if args.k is not None:
            params["k"] = args.k
        if args.n is not None:
            params["n"] = args.n
    if args.name in ("inf_laplace", "p1_laplace") and args.c is not None:
        params["c"] = args.c
    if args.name == "inf_laplace" and args.homog:
        params["homogeneous"] = True
    if args.name == "p_laplace_not_u" and args.p is not None:
        params["p"] = args.p
    if args.name in ("power_not_u", "p_laplace_not_u"):
        if args.lam is not None:
            params["lam"] = args.lam
        if args.hconst is not None:
            params["h_const"] = args.hconst
    if args.name == "power_not_u" and args.d_root is not None:
        params["d"] = args.d_root
    cert = counterexample(args.name, **params)
    cert.reverify()
    return _finish(cert.to_json_obj(), "violation", args)


def _cmd_sums_demo(args) -> int:
    op = _parse_operator(args.op)
    tf = quadratic_doubling(args.alpha, args.dim)
    omega_x = JetPoint(tf.x_hat, 0.0, tf.p)
    omega_y = JetPoint(tf.y_hat, 0.0, tf.q)
    g1, g2 = auto_witness_pair(op, omega_x, omega_y, lam=args.lam, h_const=args.hconst)
    blocks = hessian_blocks(tf)
    sched = EpsilonSchedule.geometric(args.eps0, args.ratio, args.terms)
    family = generate_admissible(blocks, sched, slack=args.slack, seed=args.seed)

    amat = blocks.assemble()
    norm_a = operator_norm(amat)
    rows = []
    for eps, (x, y) in zip(sched.values, family.pairs):
        w = SymmetricMatrix(amat.entries + eps * (amat.entries @ amat.entries))
        diag = np.zeros((2 * args.dim, 2 * args.dim))
        diag[:args.dim, :args.dim] = x.entries
        diag[args.dim:, args.dim:] = -y.entries
        upper_margin = float(SymmetricMatrix(w.entries - diag).eigenvalues()[0])
        floor = -(1.0 / eps + norm_a)
        lower_margin = float(SymmetricMatrix(diag).eigenvalues()[0]) - floor
        rows.append({"eps": eps, "eq1_ok": verify_eq1(blocks, eps, x, y),
                     "lower_margin": lower_margin, "upper_margin": upper_margin})

    lemma = lemma_upper_bound(blocks, args.eps0, family)
    limits = extract_limit(family)
    from .sums import verify_conclusion

    report = verify_conclusion(op, (g1, g2), tf, family, limits)
    ok = (isinstance(lemma, PassReport) and report.upper_block_ok
          and report.details["implications_ok"] and all(r["eq1_ok"] for r in rows)
          and report.details["limit_lower_X_ok"] and report.details["limit_lower_negY_ok"])
    trace = {
        "type": "sums_trace",
        "operator": op.name,
        "witness": report.witness,
        "alpha": args.alpha,
        "dim": args.dim,
        "slack": args.slack,
        "seed": args.seed,
        "schedule": sched.to_json_obj(),
        "pairs": rows,
        "limits": {"X": matrix_to_json_obj(limits[0]), "Y": matrix_to_json_obj(limits[1])},
        "uniform_upper_bound": lemma.to_json_obj(),
        "report": report.to_json_obj(),
    }
    return _finish(trace, "pass" if ok else "violation", args)


def run(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "catalog":
        obj = {"type": "catalog", "families": catalog()}
        _emit(obj, args)
        return 0
    handlers = {
        "check-ellipticity": _cmd_check_ellipticity,
        "check-class-u": _cmd_check_class_u,
        "check-class-m": _cmd_check_class_m,
        "bounds": _cmd_bounds,
        "counterexample": _cmd_counterexample,
        "sums-demo": _cmd_sums_demo,
    }
    return handlers[args.command](args)


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotInClassM as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToolkitError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
