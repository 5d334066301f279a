"""Deterministic check suite and report writers.

Every acceptance criterion is a function ``cfg -> list[Check]``.  Checks
are aggregated per criterion part (worst case over the seeded cases) so a
report has a fixed, small set of records whatever the case counts.
"""

from dataclasses import asdict, dataclass, field, fields
import csv
import hashlib
import io
import json
import math
from pathlib import Path

import mpmath
import numpy as np
from scipy import integrate

from . import __version__
from .body2d import HalfPlane, SupportBody, disc, gaussian_functionals
from .ehrhard import (cd1_counterexample, ehrhard_concavity, halfline_pair)
from .exceptions import SchemaError
from .gaussfn import gaussian_profile, std_normal
from .generators import (case_rng, ellipse_like_body, mean_convex_body, mild_body,
                         random_body, random_function, random_polynomial, zero_mean)
from .inequalities import (dual_report, isoperimetric_and_ledoux, ledoux_limit,
                           poincare_report)
from .neumann import (BivariatePolynomial, WeightedDomain, concave_chain_check,
                      cs_pointwise, d2n_halfline, d2n_halfline_ode, d2n_probe,
                      gamma2_identity, reilly_residual, solve_neumann)
from .variations import (MODES, BoundaryFunction, fd_variations,
                         minkowski_second_slack, steiner_fit, variations)

SCHEMA = "gauss-bm-report/1"

DEFAULT_COUNTS = {
    "poincare": 200,
    "variations": 100,
    "ehrhard": 50,
    "reilly": 20,
    "dual": 50,
    "chain": 20,
    "d2n": 3,
}


@dataclass
class SuiteConfig:
    seed: int = 20160101
    counts: dict = field(default_factory=lambda: dict(DEFAULT_COUNTS))
    grid: int = 512
    tol: float | None = None
    """Overrides every tolerance when set; decisive thresholds are unaffected."""
    neumann_degree: int = 12
    out: str = "report"

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise SchemaError("config: expected an object")
        known = {f.name for f in fields(cls)}
        for key in obj:
            if key not in known:
                raise SchemaError(f"config.{key}: unknown field")
        cfg = cls()
        if "seed" in obj:
            cfg.seed = _int_field(obj, "seed", "config", lo=0, hi=2 ** 64 - 1)
        if "grid" in obj:
            cfg.grid = _int_field(obj, "grid", "config", lo=16)
        if "neumann_degree" in obj:
            cfg.neumann_degree = _int_field(obj, "neumann_degree", "config", lo=2, hi=18)
        if "tol" in obj and obj["tol"] is not None:
            tol = obj["tol"]
            if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol <= 0:
                raise SchemaError(f"config.tol: expected a positive number, got {tol!r}")
            cfg.tol = float(tol)
        if "out" in obj:
            if not isinstance(obj["out"], str):
                raise SchemaError("config.out: expected a string")
            cfg.out = obj["out"]
        if "counts" in obj:
            counts = obj["counts"]
            if not isinstance(counts, dict):
                raise SchemaError("config.counts: expected an object")
            for key in counts:
                if key not in DEFAULT_COUNTS:
                    raise SchemaError(f"config.counts.{key}: unknown suite")
                cfg.counts[key] = _int_field(counts, key, "config.counts", lo=1)
        return cfg

    def to_json(self):
        # the output location does not affect results and is not echoed
        d = asdict(self)
        del d["out"]
        return d

    def tolerance(self, default):
        return default if self.tol is None else self.tol


def _int_field(obj, key, path, lo=None, hi=None):
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise SchemaError(f"{path}.{key}: expected an integer, got {val!r}")
    if (lo is not None and val < lo) or (hi is not None and val > hi):
        raise SchemaError(f"{path}.{key}: {val} out of range")
    return val


def _clean(obj):
    """JSON-safe copy: numpy scalars to float, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def digest(inputs):
    blob = json.dumps(_clean(inputs), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class Check:
    name: str
    criterion: int | None
    relation: str
    metric: float | None
    bound: float | None
    verdict: str
    values: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)

    def record(self):
        return _clean({
            "name": self.name,
            "criterion": self.criterion,
            "relation": self.relation,
            "metric": self.metric,
            "bound": self.bound,
            "verdict": self.verdict,
            "values": self.values,
            "inputs_digest": digest(self.inputs),
        })


def _verdict(ok):
    return "pass" if ok else "fail"


def _at_most(name, crit, metric, bound, **kw):
    return Check(name, crit, "metric <= bound", metric, bound,
                 _verdict(metric <= bound), **kw)


def _at_least(name, crit, metric, bound, **kw):
    return Check(name, crit, "metric >= bound", metric, bound,
                 _verdict(metric >= bound), **kw)


def _body_json(body):
    if isinstance(body, HalfPlane):
        return {"t": body.t, "angle": body.angle}
    return {"a0": body.a0, "cos": body.cos, "sin": body.sin, "grid": body.grid}


# --- seeded case families (shared between criteria) -------------------------

def poincare_cases(cfg):
    out = []
    for i in range(cfg.counts["poincare"]):
        rng = case_rng(cfg.seed, "poincare", i)
        body = random_body(rng, grid=cfg.grid)
        f = random_function(rng)
        if i % 4 == 3:
            f = zero_mean(f, body)
        out.append((body, f))
    return out


def ehrhard_pairs(cfg):
    out = []
    for i in range(cfg.counts["ehrhard"]):
        rng = case_rng(cfg.seed, "ehrhard", i)
        out.append((random_body(rng, grid=cfg.grid), random_body(rng, grid=cfg.grid)))
    return out


def suite_bodies(cfg):
    bodies = [disc(r, grid=cfg.grid) for r in (0.5, 1.0, 2.0)]
    bodies += [b for b, _ in poincare_cases(cfg)]
    for K, L in ehrhard_pairs(cfg):
        bodies += [K, L]
    return bodies


# --- criteria ---------------------------------------------------------------

def c01_halfplane_equality(cfg):
    tol = cfg.tolerance(1e-12)
    rows = []
    worst = 0.0
    f = BoundaryFunction.constant(1.0)
    for t in range(-3, 4):
        rep = poincare_report(HalfPlane(float(t)), f)
        dens, cdf = std_normal(float(t))
        coef_err = abs(gaussian_profile(cdf)[1] + t / dens)
        d2_err = abs(rep.term_curvature + t * dens)
        worst = max(worst, abs(rep.gap))
        rows.append({"t": t, "gap": rep.gap, "coefficient_error": coef_err,
                     "delta2_error": d2_err, "refined_extra": rep.refined_extra})
    return [_at_most("C01.halfplane_equality", 1, worst, tol,
                     values={"cases": rows}, inputs={"t": list(range(-3, 4))})]


def c02_disc_closed_forms(cfg):
    tol = cfg.tolerance(1e-10)
    rows, worst = [], 0.0
    for r in (0.5, 1.0, 2.0):
        m, b = gaussian_functionals(disc(r, grid=cfg.grid))
        em = abs(m - (1.0 - math.exp(-0.5 * r * r)))
        eb = abs(b - r * math.exp(-0.5 * r * r))
        worst = max(worst, em, eb)
        rows.append({"r": r, "measure": m, "boundary_mass": b,
                     "measure_error": em, "boundary_error": eb})
    return [_at_most("C02.disc_closed_forms", 2, worst, tol,
                     values={"cases": rows}, inputs={"grid": cfg.grid})]


def c03_poincare_suite(cfg):
    tol = cfg.tolerance(1e-7)
    eq_tol = cfg.tolerance(1e-10)
    min_gap = min_refined = math.inf
    zero_mean_dev = 0.0
    min_improvement = math.inf
    missing_refined = 0
    n_zero = 0
    for i, (body, f) in enumerate(poincare_cases(cfg)):
        rep = poincare_report(body, f)
        min_gap = min(min_gap, rep.gap)
        if rep.refined_gap is None:
            missing_refined += 1
        else:
            min_refined = min(min_refined, rep.refined_gap)
        if i % 4 == 3:
            n_zero += 1
            zero_mean_dev = max(zero_mean_dev, abs(rep.prev_gap - rep.gap))
        else:
            min_improvement = min(min_improvement, rep.prev_gap - rep.gap)
    inputs = {"seed": cfg.seed, "count": cfg.counts["poincare"], "grid": cfg.grid}
    refined = _at_least("C03.refined_gap", 3, min_refined, -tol,
                        values={"missing_refined": missing_refined}, inputs=inputs)
    if missing_refined:
        refined.verdict = "fail"
    return [
        _at_least("C03.poincare_gap", 3, min_gap, -tol, inputs=inputs),
        refined,
        _at_most("C03.prev_gap_zero_mean", 3, zero_mean_dev, eq_tol,
                 values={"zero_mean_cases": n_zero}, inputs=inputs),
        Check("C03.prev_gap_strict", 3, "metric > bound", min_improvement, 0.0,
              _verdict(min_improvement > 0.0), inputs=inputs),
    ]


def c04_variation_crosscheck(cfg):
    tol1 = cfg.tolerance(1e-6)
    tol2 = cfg.tolerance(1e-5)
    out = []
    inputs = {"seed": cfg.seed, "count": cfg.counts["variations"], "grid": cfg.grid}
    for mode in MODES:
        e1 = e2 = 0.0
        for i in range(cfg.counts["variations"]):
            rng = case_rng(cfg.seed, "variations", i)
            body = random_body(rng, grid=cfg.grid)
            f = random_function(rng)
            rep = variations(body, f, mode)
            d1, d2 = fd_variations(body, f, mode)
            e1 = max(e1, abs(rep.delta1 - d1) / max(1.0, abs(rep.delta1)))
            e2 = max(e2, abs(rep.delta2 - d2) / max(1.0, abs(rep.delta2)))
        out.append(_at_most(f"C04.delta1_fd.{mode}", 4, e1, tol1, inputs=inputs))
        out.append(_at_most(f"C04.delta2_fd.{mode}", 4, e2, tol2, inputs=inputs))
    return out


HALFLINE_PAIRS = ((-2.0, 1.5), (0.5, -1.0), (-3.0, 3.0), (1.0, 2.0))


def c05_ehrhard(cfg, profiles=None):
    tol = cfg.tolerance(1e-8)
    lin_tol = cfg.tolerance(1e-12)
    worst = -math.inf
    for i, (K, L) in enumerate(ehrhard_pairs(cfg)):
        prof = ehrhard_concavity(K, L, 65)
        worst = max(worst, prof.max_second_diff)
        if profiles is not None and i == 0:
            profiles["ehrhard_pair0"] = prof
    if profiles is not None:
        profiles["ehrhard_disc1_disc2"] = ehrhard_concavity(
            disc(1.0, grid=cfg.grid), disc(2.0, grid=cfg.grid), 65)
    lin = 0.0
    for a, c in HALFLINE_PAIRS:
        prof = ehrhard_concavity(*halfline_pair(a, c), 65)
        lin = max(lin, float(np.max(np.abs(prof.second_diffs))))
    return [
        _at_most("C05.ehrhard_concavity", 5, worst, tol,
                 inputs={"seed": cfg.seed, "count": cfg.counts["ehrhard"],
                         "grid": cfg.grid, "points": 65}),
        _at_most("C05.halfline_linearity", 5, lin, lin_tol,
                 inputs={"pairs": HALFLINE_PAIRS}),
    ]


def _conditioned_mp(t, b):
    ratio = mpmath.ncdf(t) / mpmath.ncdf(b)
    return mpmath.sqrt(2) * mpmath.erfinv(2 * ratio - 1)


def c06_cd1(cfg, profiles=None):
    rep = cd1_counterexample(0.0)
    prof = rep.profile
    if profiles is not None:
        profiles["cd1_counterexample"] = prof
    # triples whose middle node lies in [-1/2, 0)
    near = np.flatnonzero(prof.t[1:-1] >= -0.5)
    j = int(near[np.argmax(prof.second_diffs[near])])
    rel = 0.0
    with mpmath.workdps(50):
        for k in near:
            exact = sum(c * _conditioned_mp(mpmath.mpf(float(prof.t[k + o])), 0)
                        for c, o in ((1, 0), (-2, 1), (1, 2)))
            rel = max(rel, abs(float(exact) - prof.second_diffs[k]) / abs(float(exact)))
        triple = [-0.3, -0.2, -0.1]
        fixed = float(sum(c * _conditioned_mp(mpmath.mpf(x), 0)
                          for c, x in zip((1, -2, 1), triple)))
    inputs = {"b": 0.0, "points": prof.t.size}
    return [
        _at_least("C06.cd1_convexity", 6, float(prof.second_diffs[j]), 1e-3,
                  values={"t_triple": prof.t[j:j + 3], "violated": rep.violated,
                          "halfline_violated": rep.halfline_violated,
                          "blow_up": rep.blow_up, "fixed_triple": triple,
                          "fixed_triple_second_diff": fixed},
                  inputs=inputs),
        _at_most("C06.cd1_oracle", 6, rel, cfg.tolerance(1e-8), inputs=inputs),
    ]


def c07_log_derivative(cfg):
    v = np.linspace(1e-4, 1.0 - 1e-4, 10_000)
    margin = 1.0 / v - gaussian_profile(v)[1]
    k = int(np.argmin(margin))
    return [Check("C07.log_derivative_below_inverse", 7, "metric > bound",
                  float(margin[k]), 0.0, _verdict(margin[k] > 0.0),
                  values={"argmin_v": v[k]}, inputs={"grid": 10_000})]


def c08_isoperimetry(cfg):
    tol = cfg.tolerance(1e-9)
    min_iso = min_fp = math.inf
    bodies = suite_bodies(cfg)
    for body in bodies:
        iso, fp, _ = isoperimetric_and_ledoux(body, radii=())
        min_iso = min(min_iso, iso)
        min_fp = min(min_fp, fp)
    limits = [ledoux_limit(t) for t in (5.0, 8.0, 12.0)]
    monotone = all(b > a for a, b in zip(limits, limits[1:]))
    inputs = {"seed": cfg.seed, "bodies": len(bodies)}
    lim = Check("C08.ledoux_limit", 8, "|metric - 1| <= bound and increasing",
                limits[1], 5e-2, _verdict(abs(limits[1] - 1.0) <= 5e-2 and monotone),
                values={"radii": [5.0, 8.0, 12.0], "estimates": limits,
                        "monotone": monotone},
                inputs={"radii": [5.0, 8.0, 12.0]})
    return [
        _at_least("C08.isoperimetric_floor", 8, min_iso, -tol, inputs=inputs),
        _at_least("C08.ledoux_F_prime0", 8, min_fp, 1.0 - tol, inputs=inputs),
        lim,
    ]


def c09_reilly(cfg):
    tol = cfg.tolerance(1e-8)
    cs_tol = cfg.tolerance(1e-12)
    worst, min_cs = 0.0, math.inf
    n = cfg.counts["reilly"]
    for b in range(5):
        body = ellipse_like_body(case_rng(cfg.seed, "reilly-body", b), grid=cfg.grid)
        for potential in ("gaussian", "lebesgue"):
            dom = WeightedDomain(body, potential)
            for i in range(n):
                u = random_polynomial(case_rng(cfg.seed, "reilly", i))
                worst = max(worst, reilly_residual(dom, u).residual)
                min_cs = min(min_cs, cs_pointwise(dom, u))
    inputs = {"seed": cfg.seed, "count": n, "bodies": 5, "grid": cfg.grid}
    return [_at_most("C09.reilly_residual", 9, worst, tol, inputs=inputs),
            _at_least("C09.cs_pointwise", 9, min_cs, -cs_tol, inputs=inputs)]


def radial_oracle(radius=1.0):
    """Gaussian disc with f = 1: ``c`` and ``u'(rho)`` by dense integration.

    ``(e^{-rho^2/2} rho u')' = c rho e^{-rho^2/2}``; integrate the unit-``c``
    flux ``y`` and rescale so that ``u'(radius) = 1``.
    """
    sol = integrate.solve_ivp(lambda r, y: [r * math.exp(-0.5 * r * r)],
                              (0.0, radius), [0.0], method="DOP853",
                              rtol=1e-13, atol=1e-16, dense_output=True)
    c = radius * math.exp(-0.5 * radius ** 2) / sol.sol(radius)[0]

    def du(r):
        r = np.asarray(r, dtype=float)
        return c * sol.sol(r)[0] * np.exp(0.5 * r * r) / r

    return c, du


def c10_neumann(cfg):
    deg = cfg.neumann_degree
    out = []
    # Lebesgue disc, f = cos: exact solution x1
    dom = WeightedDomain(disc(1.0, grid=cfg.grid), "lebesgue")
    sol = solve_neumann(dom, BoundaryFunction(0.0, (1.0,)), deg)
    err = float(np.max(np.abs(sol.u(dom.points) - dom.points[:, 0])))
    out.append(_at_most("C10.lebesgue_disc_linear", 10, err, cfg.tolerance(1e-10),
                        values={"c": sol.c, "flux_residual": sol.flux_residual},
                        inputs={"degree": deg}))
    solved = [(dom, sol)]

    # Gaussian disc, f = 1 against the radial oracle
    gdom = WeightedDomain(disc(1.0, grid=cfg.grid), "gaussian")
    gsol = solve_neumann(gdom, BoundaryFunction.constant(1.0), deg)
    c_ref, du = radial_oracle(1.0)
    r = np.linspace(0.05, 1.0, 40)
    pts = np.stack([r, np.zeros_like(r)], axis=-1)
    radial_err = float(np.max(np.abs(gsol.u.grad(pts)[:, 0] - du(r))))
    low = solve_neumann(gdom, BoundaryFunction.constant(1.0), 8)
    out.append(_at_most("C10.gaussian_disc_flux", 10, gsol.flux_residual,
                        cfg.tolerance(1e-6),
                        values={"c": gsol.c, "c_oracle": c_ref,
                                "c_error": abs(gsol.c - c_ref),
                                "radial_derivative_error": radial_err,
                                "flux_residual_degree8": low.flux_residual},
                        inputs={"degree": deg}))
    out.append(_at_least("C10.solver_convergence", 10,
                         low.flux_residual / max(gsol.flux_residual, 1e-300), 10.0,
                         inputs={"degrees": [8, deg]}))
    solved.append((gdom, gsol))
    for i in range(4):
        rng = case_rng(cfg.seed, "neumann", i)
        body, f = mild_body(rng, grid=cfg.grid), random_function(rng, 3)
        for potential in ("gaussian", "lebesgue"):
            d = WeightedDomain(body, potential)
            solved.append((d, solve_neumann(d, f, deg)))
    worst = max(gamma2_identity(d, s).residual for d, s in solved)
    out.append(_at_most("C10.gamma2_identity", 10, worst, cfg.tolerance(1e-4),
                        values={"cases": len(solved)},
                        inputs={"seed": cfg.seed, "degree": deg}))
    return out


def c11_dual(cfg):
    tol = cfg.tolerance(1e-7)
    min_gap, min_h = math.inf, math.inf
    for i in range(cfg.counts["dual"]):
        rng = case_rng(cfg.seed, "dual", i)
        body = mean_convex_body(rng, 0.1, grid=cfg.grid)
        f = random_function(rng, 4)
        rep = dual_report(body, f)
        min_gap = min(min_gap, rep.gap)
    return [_at_least("C11.dual_gap", 11, min_gap, -tol,
                      inputs={"seed": cfg.seed, "count": cfg.counts["dual"],
                              "grid": cfg.grid})]


def c12_chain(cfg):
    tol = cfg.tolerance(1e-6)
    worst = math.inf
    for i in range(cfg.counts["chain"]):
        rng = case_rng(cfg.seed, "chain", i)
        body, f = mild_body(rng, grid=cfg.grid), random_function(rng, 3)
        rep = concave_chain_check(WeightedDomain(body, "lebesgue"), f,
                                  cfg.neumann_degree)
        worst = min(worst, rep.slack)
    return [_at_least("C12.concave_chain", 12, worst, -tol,
                      inputs={"seed": cfg.seed, "count": cfg.counts["chain"],
                              "degree": cfg.neumann_degree})]


def c13_d2n(cfg):
    tol = cfg.tolerance(1e-8)
    rows, worst = [], 0.0
    for t in (-2.0, -1.0, 0.0, 1.0, 2.0):
        _, _, closed = d2n_halfline(t)
        _, _, dense, flux = d2n_halfline_ode(t)
        worst = max(worst, abs(closed), abs(dense))
        rows.append({"t": t, "margin_closed_form": closed, "margin_ode": dense,
                     "ode_flux": flux})
    out = [_at_most("C13.d2n_halfline", 13, worst, tol, values={"cases": rows},
                    inputs={"t": [-2, -1, 0, 1, 2]})]
    cases = [("disc1_const", disc(1.0, grid=cfg.grid), BoundaryFunction.constant(1.0)),
             ("disc1_cos", disc(1.0, grid=cfg.grid), BoundaryFunction(1.0, (0.3,)))]
    for i in range(cfg.counts["d2n"]):
        rng = case_rng(cfg.seed, "d2n", i)
        cases.append((f"seeded{i}", mild_body(rng, grid=cfg.grid),
                      random_function(rng, 3)))
    for label, body, f in cases:
        probe = d2n_probe(WeightedDomain(body, "gaussian"), f, cfg.neumann_degree)
        out.append(Check(f"C13.d2n_probe.{label}", 13, "report-only", probe.margin,
                         None, "report-only",
                         values={"ratio": probe.ratio, "F_conjectured": probe.F_conjectured,
                                 "mean_f": probe.mean_f,
                                 "flux_residual": probe.solution.flux_residual
                                 if probe.solution else None},
                         inputs={"body": _body_json(body), "f": asdict(f)}))
    return out


def c14_classical(cfg):
    res_tol = cfg.tolerance(1e-9)
    c2_tol = cfg.tolerance(1e-8)
    eq_tol = cfg.tolerance(1e-10)
    bodies = [disc(1.0, grid=cfg.grid), SupportBody(1.0, (0, 0, 0, 0.05), grid=cfg.grid)]
    bodies += [b for b, _ in poincare_cases(cfg)[:20]]
    worst_res = worst_c2 = 0.0
    min_slack = math.inf
    for body in bodies:
        _, _, c2, res = steiner_fit(body)
        worst_res = max(worst_res, res)
        worst_c2 = max(worst_c2, abs(c2 - math.pi))
        min_slack = min(min_slack, minkowski_second_slack(body))
    disc_eq = max(abs(minkowski_second_slack(disc(r, grid=cfg.grid)))
                  for r in (0.5, 1.0, 3.0))
    inputs = {"seed": cfg.seed, "bodies": len(bodies)}
    return [
        _at_most("C14.steiner_residual", 14, worst_res, res_tol, inputs=inputs),
        _at_most("C14.steiner_t2_coefficient", 14, worst_c2, c2_tol, inputs=inputs),
        _at_least("C14.minkowski_second_slack", 14, min_slack, -res_tol, inputs=inputs),
        _at_most("C14.minkowski_disc_equality", 14, disc_eq, eq_tol,
                 inputs={"r": [0.5, 1.0, 3.0]}),
    ]


CRITERIA = {
    1: c01_halfplane_equality,
    2: c02_disc_closed_forms,
    3: c03_poincare_suite,
    4: c04_variation_crosscheck,
    5: c05_ehrhard,
    6: c06_cd1,
    7: c07_log_derivative,
    8: c08_isoperimetry,
    9: c09_reilly,
    10: c10_neumann,
    11: c11_dual,
    12: c12_chain,
    13: c13_d2n,
    14: c14_classical,
}


def run_criteria(cfg, profiles=None):
    checks = []
    for k, func in CRITERIA.items():
        if profiles is not None and k in (5, 6):
            checks += func(cfg, profiles)
        else:
            checks += func(cfg)
    return sorted(checks, key=lambda c: c.name)


def build_report(cfg, checks):
    summary = {"pass": 0, "fail": 0, "report-only": 0}
    for c in checks:
        summary[c.verdict] += 1
    return {
        "schema": SCHEMA,
        "version": __version__,
        "config": _clean(cfg.to_json()),
        "checks": [c.record() for c in checks],
        "summary": summary,
    }


def report_json(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def report_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "criterion", "verdict", "relation", "metric", "bound",
                "inputs_digest"])
    for r in report["checks"]:
        w.writerow([r["name"], r["criterion"], r["verdict"], r["relation"],
                    repr(r["metric"]), repr(r["bound"]), r["inputs_digest"]])
    return buf.getvalue()


def profile_svg(x, y, title, width=480, height=320, pad=40):
    """Minimal deterministic SVG line plot."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = float(y.min()), float(y.max())
    if y1 == y0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    sx = (width - 2 * pad) / (x1 - x0)
    sy = (height - 2 * pad) / (y1 - y0)
    pts = " ".join(f"{pad + (a - x0) * sx:.2f},{height - pad - (b - y0) * sy:.2f}"
                   for a, b in zip(x, y))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" '
        f'height="{height - 2 * pad}" fill="none" stroke="#888"/>\n'
        f'<polyline fill="none" stroke="#1f77b4" stroke-width="1.5" points="{pts}"/>\n'
        f'<text x="{width / 2:.0f}" y="{pad / 2:.0f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{title}</text>\n'
        f'<text x="{pad}" y="{height - pad / 3:.0f}" font-family="sans-serif" '
        f'font-size="10">t in [{x0:.4g}, {x1:.4g}], F in [{y0:.4g}, {y1:.4g}]</text>\n'
        '</svg>\n')


def run_suite(cfg, out=None):
    """Run every criterion and write report.json, report.csv and SVG profiles.

    Returns
    -------
    report : dict
    exit_code : int
        0 iff no check failed.
    """
    out = Path(cfg.out if out is None else out)
    out.mkdir(parents=True, exist_ok=True)
    profiles = {}
    checks = run_criteria(cfg, profiles)
    report = build_report(cfg, checks)
    (out / "report.json").write_text(report_json(report))
    (out / "report.csv").write_text(report_csv(report))
    for name, prof in sorted(profiles.items()):
        (out / f"{name}.svg").write_text(profile_svg(prof.t, prof.values, name))
    return report, (1 if report["summary"]["fail"] else 0)
