# scripts/cmd_verify.py
# ---------------------------------------------------------------------------
# verify: run the invariant suite on one graph + filter pair and write verify.json.
#
# Checks (each reported with passed / skipped and details):
#   laplacian_eigen   orthonormality, reconstruction, spectrum in [0, 2]
#   filters           range and sup-norm of f and g_hat
#   operator_norms    ||M_f||, ||C_g||, ||S|| <= 1, R(theta) within |cos| + |sin|
#   sigma1_norms      the four operator-norm characterizations of sigma1 agree
#   top_simple_bound  both top eigenvalues simple => sigma1 < 1
#   samples_in_box    Monte-Carlo localization pairs lie in [0,1]^2
#   w_gamma           every sample passes the four gamma corner constraints
#   gamma_chain       sigma1 <= sigma1/t <= 1-t+sigma1 <= gamma(t) <= 1 and endpoint identities
#   sandwich          samples and inner polygon inside the outer polygon
#   refinement        uniform K = 8, 16, 32 give nested inner/outer polygons
#   scatter_inside    eigenvector localization pairs inside the outer polygon
#   diagonal_bound    sqrt2 rho_n(pi/4) <= m + c <= sqrt2 rho_1(pi/4) on samples
#   expansion_bounds  threshold and interval truncation errors below their bounds,
#                     spectral distribution moments match s_bar and var_S
#
# Exit code 0 iff every non-skipped check passes.
# ---------------------------------------------------------------------------
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from graphs.core import normalized_laplacian
from localization import geometry
from localization.approximation import spectral_distribution, truncate_by_interval, truncate_by_threshold
from localization.filters import validate
from localization.operators import OperatorBundle, rotated, sigma1_characterizations, uncertainty_gap, variances
from localization.uncertainty import (
    CornerBounds,
    RangeApproximation,
    SupportOracle,
    algorithm1,
    corner_bounds,
    eigenvector_scatter,
    gamma,
    in_W_gamma_many,
    is_refinement,
    sample_admissible,
    uniform_angles,
)
from render.exports import write_json
from scripts.common import Problem, compute_range, load_pair, load_problem, make_bundle, meta, out_path
from scripts.pairs import PairChoice
from utils import telemetry
from utils.errors import CheckFailed, GraphRangeError
from utils.logger import log
from utils.params import RunConfig

TOL = 1e-9
EXPANSION_SIGNALS = 200


@dataclass
class Check:
    name: str
    passed: bool = True
    skipped: bool = False
    details: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        status = "skipped" if self.skipped else ("pass" if self.passed else "fail")
        return {"name": self.name, "status": status, **self.details}


@dataclass
class Context:
    cfg: RunConfig
    problem: Problem
    choice: PairChoice
    bundle: OperatorBundle
    samples: np.ndarray
    corners: Optional[CornerBounds] = None
    approx: Optional[RangeApproximation] = None
    oracle: Optional[SupportOracle] = None


def _skip(name: str, why: str) -> Check:
    return Check(name, passed=True, skipped=True, details={"reason": why})


# ---------- checks ----------

def check_laplacian(ctx: Context) -> Check:
    d = ctx.problem.decomp
    U, lam = d.vectors, d.values
    ortho = float(np.max(np.abs(U.T @ U - np.eye(d.n))))
    L = (U * lam) @ U.T
    recon = float(np.max(np.abs(normalized_laplacian(ctx.problem.graph) - L)))
    ok = ortho <= 1e-9 and recon <= 1e-9 and lam[0] >= -1e-9 and lam[-1] <= 2 + 1e-9
    return Check("laplacian_eigen", ok, details={
        "orthonormality_residual": ortho, "reconstruction_residual": recon,
        "lambda_min": float(lam[0]), "lambda_max": float(lam[-1]),
    })


def check_filters(ctx: Context) -> Check:
    rep = validate(ctx.choice.pair)
    return Check("filters", rep.ok, details=rep.as_dict())


def check_norms(ctx: Context) -> Check:
    b = ctx.bundle
    if b.violations:
        return _skip("operator_norms", "; ".join(b.violations))
    nm = float(np.linalg.norm(b.Mf, 2))
    nc = float(np.linalg.norm(b.Cg, 2))
    ns = float(np.linalg.norm(b.S, 2))
    rot = rotated(b, ctx.cfg.theta)
    nr = float(np.max(np.abs(rot.rho)))
    cap = abs(math.cos(rot.theta)) + abs(math.sin(rot.theta))
    ok = max(nm, nc, ns) <= 1 + TOL and nr <= cap + TOL and float(b.spectrum.sigma[-1]) >= -TOL
    return Check("operator_norms", ok, details={"Mf": nm, "Cg": nc, "S": ns, "R_theta": nr, "R_cap": cap})


def check_sigma1_norms(ctx: Context) -> Check:
    vals = sigma1_characterizations(ctx.bundle)
    spread = max(vals) - min(vals)
    return Check("sigma1_norms", spread <= TOL, details={"values": list(vals), "spread": spread})


def check_top_simple(ctx: Context) -> Check:
    if ctx.bundle.dual:
        return _skip("top_simple_bound", "spectral-domain pair")
    rep = validate(ctx.choice.pair)
    sigma1 = ctx.bundle.spectrum.sigma1
    if not rep.both_tops_simple:
        return _skip("top_simple_bound", "top eigenvalue of M_f or C_g is not simple")
    return Check("top_simple_bound", sigma1 < 1 - 1e-12, details={"sigma1": sigma1})


def check_box(ctx: Context) -> Check:
    if ctx.bundle.violations:
        return _skip("samples_in_box", "; ".join(ctx.bundle.violations))
    s = ctx.samples
    worst = float(np.max(np.maximum(-s, s - 1.0)))
    return Check("samples_in_box", worst <= TOL, details={"samples": len(s), "worst_excess": max(worst, 0.0)})


def check_w_gamma(ctx: Context) -> Check:
    if ctx.corners is None:
        return _skip("w_gamma", "corner bounds need 0 <= C <= I")
    ok = in_W_gamma_many(ctx.corners, ctx.samples, TOL)
    return Check("w_gamma", bool(np.all(ok)), details={
        "failures": int(np.count_nonzero(~ok)),
        "vacuous": [k for k, b in ctx.corners.items() if b.vacuous],
    })


def check_gamma_chain(ctx: Context) -> Check:
    if ctx.corners is None:
        return _skip("gamma_chain", "corner bounds need 0 <= C <= I")
    worst = 0.0
    for _, bound in ctx.corners.items():
        if bound.vacuous:
            continue
        s1 = bound.sigma1
        worst = max(worst, abs(gamma(bound, s1) - 1.0), abs(gamma(bound, 1.0) - s1))
        for t in np.linspace(s1, 1.0, 1000):
            if t <= 0:
                continue
            g = gamma(bound, t)
            chain = (s1, s1 / t, 1 - t + s1, g, 1.0)
            worst = max(worst, max(chain[i] - chain[i + 1] for i in range(4)))
    return Check("gamma_chain", worst <= 1e-12, details={"worst_violation": worst})


def check_sandwich(ctx: Context) -> Check:
    if ctx.problem.n < 3:
        return _skip("sandwich", "n < 3")
    a = ctx.approx
    inside = geometry.contains(a.outer, ctx.samples, TOL)
    inner_ok = bool(np.all(geometry.contains(a.outer, a.inner, TOL)))
    ok = bool(np.all(inside)) and inner_ok
    return Check("sandwich", ok, details={
        "K": a.K, "area_inner": a.area_inner, "area_outer": a.area_outer,
        "area_gap": a.area_gap, "hausdorff_gap": a.hausdorff_gap, "converged": a.converged,
        "samples_outside": int(np.count_nonzero(~inside)),
    })


def check_refinement(ctx: Context) -> Check:
    if ctx.problem.n < 3:
        return _skip("refinement", "n < 3")
    seq = [algorithm1(ctx.bundle, uniform_angles(K), oracle=ctx.oracle) for K in (8, 16, 32)]
    ok = all(is_refinement(seq[i], seq[i + 1], TOL) for i in range(len(seq) - 1))
    return Check("refinement", ok, details={"area_gaps": [s.area_gap for s in seq]})


def check_scatter(ctx: Context) -> Check:
    if ctx.problem.n < 3:
        return _skip("scatter_inside", "n < 3")
    pts = [sp.point for sp in eigenvector_scatter(ctx.bundle, "S")]
    pts += [sp.point for sp in eigenvector_scatter(ctx.bundle, "R", theta=ctx.cfg.theta)]
    arr = np.array([[p.m, p.c] for p in pts])
    ok = geometry.contains(ctx.approx.outer, arr, TOL)
    return Check("scatter_inside", bool(np.all(ok)), details={"outside": int(np.count_nonzero(~ok))})


def check_diagonal(ctx: Context) -> Check:
    rot = rotated(ctx.bundle, math.pi / 4)
    lo, hi = math.sqrt(2) * float(rot.rho[-1]), math.sqrt(2) * float(rot.rho[0])
    tot = ctx.samples.sum(axis=1)
    ok = bool(np.all(tot >= lo - TOL) and np.all(tot <= hi + TOL))
    return Check("diagonal_bound", ok, details={"lower": lo, "upper": hi,
                                                "sample_min": float(tot.min()), "sample_max": float(tot.max())})


def check_expansion(ctx: Context) -> Check:
    b = ctx.bundle
    rng = np.random.default_rng(ctx.cfg.seed + 1)
    spec = b.spectrum
    rot = rotated(b, ctx.cfg.theta)
    sigma = spec.sigma
    s_grid = np.linspace(float(sigma[-1]), float(sigma[0]), 21, endpoint=False)[1:] if sigma[0] > sigma[-1] else []
    worst_bound = 0.0
    worst_moment = 0.0
    count = 0
    for _ in range(min(EXPANSION_SIGNALS, ctx.cfg.samples)):
        x = rng.standard_normal(b.n)
        for s in s_grid:
            rep = truncate_by_threshold(spec, x, float(s))
            worst_bound = max(worst_bound, rep.actual_error_sq - rep.bound)
            count += 1
        for which in (spec, rot):
            for a in np.geomspace(1e-3, 2.0, 20):
                rep = truncate_by_interval(which, x, float(a))
                worst_bound = max(worst_bound, rep.actual_error_sq - rep.bound)
                count += 1
        dist = spectral_distribution(spec, x / np.linalg.norm(x))
        var_s, _ = variances(b, rot, x)
        worst_moment = max(worst_moment, abs(dist.mu.sum() - 1.0), abs(dist.variance - var_s),
                           abs(dist.mean - float(x @ b.S @ x) / float(x @ x)))
    ok = worst_bound <= TOL and worst_moment <= 1e-10
    return Check("expansion_bounds", ok, details={
        "cases": count, "worst_excess": worst_bound, "worst_moment_error": worst_moment,
    })


CHECKS: List[Callable[[Context], Check]] = [
    check_laplacian,
    check_filters,
    check_norms,
    check_sigma1_norms,
    check_top_simple,
    check_box,
    check_w_gamma,
    check_gamma_chain,
    check_sandwich,
    check_refinement,
    check_scatter,
    check_diagonal,
    check_expansion,
]


def build_context(cfg: RunConfig) -> Context:
    problem = load_problem(cfg)
    choice = load_pair(cfg, problem)
    bundle = make_bundle(problem, choice)
    samples = sample_admissible(bundle, cfg.samples, seed=cfg.seed)
    ctx = Context(cfg, problem, choice, bundle, samples)
    if not bundle.violations:
        ctx.corners = corner_bounds(problem.decomp, choice.pair, dual=choice.dual)
    if problem.n >= 3:
        ctx.oracle = SupportOracle(bundle, maxsize=cfg.cache_size)
        ctx.approx = compute_range(bundle, cfg.angle_schedule, workers=cfg.workers, oracle=ctx.oracle)
    return ctx


def verify(cfg: RunConfig) -> Dict[str, Any]:
    ctx = build_context(cfg)
    results: List[Check] = []
    for fn in CHECKS:
        try:
            chk = fn(ctx)
        except GraphRangeError as e:
            chk = Check(fn.__name__.replace("check_", ""), passed=False, details={"error": str(e)})
        log.info(f"verify: {chk.name} {chk.as_dict()['status']}")
        results.append(chk)
    failed = [c.name for c in results if not c.skipped and not c.passed]
    sigma1 = ctx.bundle.spectrum.sigma1
    report: Dict[str, Any] = {
        "meta": meta(cfg, ctx.problem, ctx.choice),
        "ok": not failed,
        "failed": failed,
        "sigma1": sigma1,
        "uncertainty_gap": uncertainty_gap(ctx.bundle),
        "violations": list(ctx.bundle.violations),
        "checks": [c.as_dict() for c in results],
    }
    if ctx.corners is not None:
        report["corners"] = {
            k: {"sigma1": b.sigma1, "corner": list(b.corner), "vacuous": b.vacuous}
            for k, b in ctx.corners.items()
        }
        # sigma1 = 1 for a reflected pair means its unit-square corner is an admissible pair
        report["attained_corners"] = [list(b.corner) for _, b in ctx.corners.items() if b.vacuous]
    report["telemetry"] = telemetry.counters()
    return report


def run(cfg: RunConfig) -> List[str]:
    log.info("cmd: verify_start")
    report = verify(cfg)
    p = out_path(cfg, "verify.json")
    write_json(p, report)
    log.info(f"verify: ok={report['ok']} sigma1={report['sigma1']:.12g}")
    log.info("cmd: verify_done")
    if not report["ok"]:
        raise CheckFailed(report["failed"])
    return [p]
