"""Command-line entry point: ``gaussbm run`` and single-check subcommands."""

import argparse
from dataclasses import asdict
import json
import sys

import numpy as np

from .body2d import HalfPlane, body_from_json
from .ehrhard import cd1_counterexample, ehrhard_concavity
from .exceptions import SchemaError
from .inequalities import (dual_report, isoperimetric_and_ledoux, mean_curvature_slack,
                           poincare_report)
from .neumann import (WeightedDomain, d2n_probe, gamma2_identity, polynomial_from_json,
                      reilly_residual, solve_neumann)
from .suite import SuiteConfig, _clean, run_suite
from .variations import MODES, BoundaryFunction, fd_variations, function_from_json, variations


def _load_json(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{what}: invalid JSON in {path}: {exc}") from exc


def _body(path, what="body"):
    return body_from_json(_load_json(path, what), what)


def _function(path, what="f"):
    if path is None:
        return BoundaryFunction.constant(1.0)
    return function_from_json(_load_json(path, what), what)


def _profile_record(prof):
    return {"t": prof.t, "values": prof.values, "max_second_diff": prof.max_second_diff,
            "argmax_t": prof.t[prof.argmax + 1], "concave": prof.is_concave()}


def cmd_run(args):
    cfg = SuiteConfig.from_json(_load_json(args.config, "config")) if args.config \
        else SuiteConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if args.grid is not None:
        cfg.grid = args.grid
    if args.tol is not None:
        cfg.tol = args.tol
    if args.out is not None:
        cfg.out = args.out
    report, code = run_suite(cfg)
    for rec in report["checks"]:
        if rec["verdict"] == "fail":
            print(f"FAIL {rec['name']}: metric={rec['metric']!r} "
                  f"bound={rec['bound']!r} ({rec['relation']})", file=sys.stderr)
    s = report["summary"]
    print(f"{s['pass']} pass, {s['fail']} fail, {s['report-only']} report-only; "
          f"report written to {cfg.out}")
    return code, None


def cmd_poincare(args):
    rep = poincare_report(_body(args.body), _function(args.f))
    rec = asdict(rep)
    rec["refined_gap"] = rep.refined_gap
    return 0, rec


def cmd_variations(args):
    body, f = _body(args.body), _function(args.f)
    out = {}
    for mode in MODES if args.mode == "both" else (args.mode,):
        rep = variations(body, f, mode)
        d1, d2 = fd_variations(body, f, mode)
        out[mode] = {**asdict(rep), "fd_delta1": d1, "fd_delta2": d2}
    return 0, out


def cmd_ehrhard(args):
    prof = ehrhard_concavity(_body(args.a, "a"), _body(args.b, "b"), args.grid)
    return 0, _profile_record(prof)


def cmd_cd1(args):
    rep = cd1_counterexample(args.b, args.grid)
    return 0, {"b": args.b, "violated": rep.violated, "blow_up": rep.blow_up,
               "halfline_violated": rep.halfline_violated,
               "profile": _profile_record(rep.profile)}


def _domain(args):
    body = _body(args.body)
    if isinstance(body, HalfPlane):
        raise SchemaError("body.type: bounded body required for this command")
    return WeightedDomain(body, args.weight)


def cmd_neumann(args):
    dom = _domain(args)
    sol = solve_neumann(dom, _function(args.f), args.degree)
    ident = gamma2_identity(dom, sol)
    return 0, {"c": sol.c, "degree": sol.degree, "interior_residual": sol.interior_residual,
               "flux_residual": sol.flux_residual, "mean": sol.mean, "flagged": sol.flagged,
               "gamma2_lhs": ident.lhs, "gamma2_rhs": ident.rhs,
               "gamma2_residual": ident.residual}


def cmd_reilly(args):
    dom = _domain(args)
    u = polynomial_from_json(_load_json(args.u, "u"), "u")
    return 0, asdict(reilly_residual(dom, u))


def cmd_d2n(args):
    probe = d2n_probe(_domain(args), _function(args.f), args.degree)
    rec = {k: getattr(probe, k) for k in ("ratio", "F_conjectured", "margin", "mean_f",
                                          "zero_mean")}
    rec["verdict"] = "report-only"
    return 0, rec


def cmd_dual(args):
    rep = dual_report(_body(args.body), _function(args.f), args.C)
    return 0, {"lhs": rep.lhs, "rhs": rep.rhs, "C": rep.C, "gap": rep.gap}


def cmd_iso(args):
    body = _body(args.body)
    iso, fp, limits = isoperimetric_and_ledoux(body)
    mc = mean_curvature_slack(body)
    return 0, {"iso_slack": iso, "F_prime0": fp, "ledoux_limits": limits,
               "mean_curvature_slack": mc.slack, "measure": mc.measure}


def build_parser():
    p = argparse.ArgumentParser(prog="gaussbm",
                                description="Gaussian Brunn-Minkowski numerical checks.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full deterministic suite")
    run.add_argument("--config", help="JSON config file")
    run.add_argument("--seed", type=int)
    run.add_argument("--out", help="output directory")
    run.add_argument("--grid", type=int, help="boundary grid size M")
    run.add_argument("--tol", type=float, help="override every tolerance")
    run.set_defaults(func=cmd_run)

    def body_cmd(name, func, help, f=True):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--body", required=True, help="body JSON file")
        if f:
            sp.add_argument("--f", help="boundary function JSON file (default: f = 1)")
        sp.set_defaults(func=func)
        return sp

    body_cmd("poincare", cmd_poincare, "terms of the boundary Poincare inequality")
    sp = body_cmd("variations", cmd_variations, "variations and finite-difference check")
    sp.add_argument("--mode", choices=(*MODES, "both"), default="both")
    sp = body_cmd("dual", cmd_dual, "both sides of the dual inequality")
    sp.add_argument("--C", type=float, help="fixed constant (default: minimized)")
    body_cmd("iso", cmd_iso, "isoperimetric slack and Ledoux chain", f=False)
    for name, func, help in (("neumann", cmd_neumann, "solve the weighted Neumann problem"),
                             ("d2n", cmd_d2n, "Dirichlet-to-Neumann probe (report-only)")):
        sp = body_cmd(name, func, help)
        sp.add_argument("--weight", choices=("gaussian", "lebesgue"), default="gaussian")
        sp.add_argument("--degree", type=int, default=12)
    sp = body_cmd("reilly", cmd_reilly, "weighted Reilly residual", f=False)
    sp.add_argument("--u", required=True, help="polynomial JSON file")
    sp.add_argument("--weight", choices=("gaussian", "lebesgue"), default="gaussian")

    sp = sub.add_parser("ehrhard", help="concavity profile between two bodies")
    sp.add_argument("--a", required=True, help="first body JSON file")
    sp.add_argument("--b", required=True, help="second body JSON file")
    sp.add_argument("--grid", type=int, default=65)
    sp.set_defaults(func=cmd_ehrhard)

    sp = sub.add_parser("cd1", help="conditioned half-line counterexample")
    sp.add_argument("--b", type=float, default=0.0)
    sp.add_argument("--grid", type=int, default=65)
    sp.set_defaults(func=cmd_cd1)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code, record = args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if record is not None:
        print(json.dumps(_clean(record), indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
