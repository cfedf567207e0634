# scripts/cmd_range.py
# ---------------------------------------------------------------------------
# range: sandwich the set of admissible localization pairs for one filter pair.
#
# Writes (per --format):
#   polygons.json  angles, rho1, boundary points, inner/outer polygons, corner sigma1 values
#   boundary.csv   one "m,c" row per support point
#   range.svg      outer + inner polygon, gamma arcs of the non-vacuous corners,
#                  eigenvector scatter of S (black) and R(theta) (grey), psi_1 / phi_1 ringed
# ---------------------------------------------------------------------------
from __future__ import annotations

from typing import List, Optional

import numpy as np

from localization import geometry
from localization.operators import OperatorBundle
from localization.uncertainty import (
    CornerBounds,
    RangeApproximation,
    ScatterPoint,
    SupportOracle,
    corner_bounds,
    eigenvector_scatter,
    gamma_curve,
)
from render.exports import write_boundary_csv, write_polygons_json
from render.svg import SvgCanvas
from scripts.common import compute_range, load_pair, load_problem, make_bundle, meta, out_path
from utils.logger import log
from utils.params import RunConfig


def render_range(approx: RangeApproximation, corners: Optional[CornerBounds],
                 s_scatter: List[ScatterPoint], r_scatter: List[ScatterPoint], header: dict) -> SvgCanvas:
    pts = np.vstack([approx.outer, [[0.0, 0.0], [1.0, 1.0]]])
    lo = np.minimum(pts.min(axis=0), 0.0)
    hi = np.maximum(pts.max(axis=0), 1.0)
    svg = SvgCanvas(box=(lo[0] - 0.02, hi[0] + 0.02, lo[1] - 0.02, hi[1] + 0.02))
    svg.comment(" ".join(f"{k}={v}" for k, v in header.items()))
    svg.axes(xlabel="m_f(x)", ylabel="c_g(x)")
    svg.polygon([(0, 0), (1, 0), (1, 1), (0, 1)], stroke="#cccccc", width=0.5)
    svg.polygon(approx.outer, stroke="#d62728", fill="#d62728", opacity=0.08, width=1.0)
    svg.polygon(approx.inner, stroke="#1f77b4", fill="#1f77b4", opacity=0.15, width=1.0)
    if corners is not None:
        for _, bound in corners.items():
            arc = gamma_curve(bound)
            if len(arc):
                svg.polyline(arc, stroke="#2ca02c", width=1.0, dash="4,3")
    for sp in r_scatter:
        svg.circle(sp.point.m, sp.point.c, r=1.5, fill="#999999")
    for sp in s_scatter:
        svg.circle(sp.point.m, sp.point.c, r=1.5, fill="#000000")
    if r_scatter:
        top = r_scatter[0].point
        svg.circle(top.m, top.c, r=5.0, fill="none", stroke="#999999", width=1.2)
    if s_scatter:
        top = s_scatter[0].point
        svg.circle(top.m, top.c, r=5.0, fill="none", stroke="#000000", width=1.2)
    return svg


def outside_count(approx: RangeApproximation, scatter: List[ScatterPoint], tol: float = 1e-9) -> int:
    if not scatter:
        return 0
    pts = np.array([[sp.point.m, sp.point.c] for sp in scatter])
    return int(np.count_nonzero(~geometry.contains(approx.outer, pts, tol)))


def run(cfg: RunConfig) -> List[str]:
    log.info("cmd: range_start")
    problem = load_problem(cfg)
    choice = load_pair(cfg, problem)
    bundle: OperatorBundle = make_bundle(problem, choice)
    oracle = SupportOracle(bundle, maxsize=cfg.cache_size)
    approx = compute_range(bundle, cfg.angle_schedule, workers=cfg.workers, oracle=oracle)
    corners = None
    if not bundle.violations:
        corners = corner_bounds(problem.decomp, choice.pair, dual=choice.dual)
    s_scatter = eigenvector_scatter(bundle, "S")
    r_scatter = eigenvector_scatter(bundle, "R", theta=cfg.theta)
    bad = outside_count(approx, s_scatter) + outside_count(approx, r_scatter)
    if bad:
        log.warning(f"range: {bad} eigenvector point(s) outside the outer polygon")
    header = meta(cfg, problem, choice)
    written: List[str] = []
    if "json" in cfg.formats:
        p = out_path(cfg, "polygons.json")
        write_polygons_json(p, approx, corners, header)
        written.append(p)
    if "csv" in cfg.formats:
        p = out_path(cfg, "boundary.csv")
        write_boundary_csv(p, approx.boundary_points, header)
        written.append(p)
    if "svg" in cfg.formats:
        p = out_path(cfg, "range.svg")
        render_range(approx, corners, s_scatter, r_scatter, header).save(p)
        written.append(p)
    log.info(
        f"range: K={approx.K} area_in={approx.area_inner:.6f} area_out={approx.area_outer:.6f} "
        f"gap={approx.area_gap:.3g} converged={approx.converged} sigma1={bundle.spectrum.sigma1:.12g}"
    )
    log.info("cmd: range_done")
    return written
