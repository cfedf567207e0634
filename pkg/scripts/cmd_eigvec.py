# scripts/cmd_eigvec.py
# ---------------------------------------------------------------------------
# eigvec: one eigenvector of S (or R(theta) with --operator R) drawn on the graph.
#
#   eigvec_<k>.svg          nodes colored by the eigenvector entries (blue < 0 < red)
#   eigvec_<k>_coeffs.csv   graph Fourier coefficients u_j^T psi_k
#   eigvec_<k>_coeffs.svg   coefficient magnitudes as bars
#   eigvec_<k>.json         eigenvalue, localization pair, coefficients
# k is 1-based (k = 1 is the eigenvector of the largest eigenvalue).
# ---------------------------------------------------------------------------
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from localization.operators import LocalizationPoint, mean_values, rotated
from render.exports import write_coefficients_csv, write_json
from render.svg import SvgCanvas, diverging
from scripts.common import layout, load_pair, load_problem, make_bundle, meta, out_path
from spectral.transform import gft
from utils.errors import ValidationError
from utils.logger import log
from utils.params import RunConfig


@dataclass(frozen=True, eq=False)
class EigvecView:
    k: int
    operator: str
    eigenvalue: float
    vector: np.ndarray
    coeffs: np.ndarray
    point: LocalizationPoint


def select(bundle, k: int, operator: str, theta: float) -> EigvecView:
    n = bundle.n
    if not 1 <= k <= n:
        raise ValidationError(f"eigenvector index k={k} out of range 1..{n}")
    if operator == "S":
        values, vectors = bundle.spectrum.sigma, bundle.spectrum.Psi
    else:
        rot = rotated(bundle, theta)
        values, vectors = rot.rho, rot.Phi
    v = vectors[:, k - 1]
    return EigvecView(k, operator, float(values[k - 1]), v, gft(bundle.decomp, v), mean_values(bundle, v))


def render_nodes(problem, view: EigvecView, header: dict) -> SvgCanvas:
    pos = layout(problem)
    lo, hi = pos.min(axis=0), pos.max(axis=0)
    pad = 0.05 * max(float(np.max(hi - lo)), 1e-9)
    svg = SvgCanvas(box=(lo[0] - pad, hi[0] + pad, lo[1] - pad, hi[1] + pad))
    svg.comment(" ".join(f"{k}={v}" for k, v in header.items()))
    for i, j, _ in problem.graph.edges():
        svg.polyline([pos[i], pos[j]], stroke="#dddddd", width=0.5)
    vmax = float(np.max(np.abs(view.vector)))
    for i in range(problem.n):
        svg.circle(pos[i, 0], pos[i, 1], r=3.0, fill=diverging(float(view.vector[i]), vmax),
                   stroke="#555555", width=0.3)
    svg.text(8, 16, f"{view.operator} eigenvector {view.k}, eigenvalue {view.eigenvalue:.6f}", raw=True)
    return svg


def render_coeffs(view: EigvecView, header: dict) -> SvgCanvas:
    mags = np.abs(view.coeffs)
    n = mags.size
    svg = SvgCanvas(box=(0.5, n + 0.5, 0.0, max(float(mags.max()), 1e-12)), width=640, height=320)
    svg.comment(" ".join(f"{k}={v}" for k, v in header.items()))
    svg.axes(xlabel="frequency index", ylabel="|coefficient|")
    for j, m in enumerate(mags, start=1):
        svg.rect(j - 0.4, 0.0, 0.8, float(m), fill="#1f77b4")
    return svg


def run(cfg: RunConfig) -> List[str]:
    log.info("cmd: eigvec_start")
    problem = load_problem(cfg)
    choice = load_pair(cfg, problem)
    bundle = make_bundle(problem, choice)
    view = select(bundle, cfg.k, cfg.operator, cfg.theta)
    header = meta(cfg, problem, choice)
    header.update(k=view.k, operator=view.operator)
    stem = f"eigvec_{view.k}"
    written: List[str] = []
    if "svg" in cfg.formats:
        p = out_path(cfg, f"{stem}.svg")
        render_nodes(problem, view, header).save(p)
        written.append(p)
        p = out_path(cfg, f"{stem}_coeffs.svg")
        render_coeffs(view, header).save(p)
        written.append(p)
    if "csv" in cfg.formats:
        p = out_path(cfg, f"{stem}_coeffs.csv")
        write_coefficients_csv(p, view.coeffs, header)
        written.append(p)
    if "json" in cfg.formats:
        p = out_path(cfg, f"{stem}.json")
        write_json(p, {
            "meta": header,
            "index": view.k,
            "operator": view.operator,
            "eigenvalue": view.eigenvalue,
            "m": view.point.m,
            "c": view.point.c,
            "vector": [float(v) for v in view.vector],
            "coefficients": [float(v) for v in view.coeffs],
        })
        written.append(p)
    log.info(f"eigvec: k={view.k} eigenvalue={view.eigenvalue:.12g} m={view.point.m:.6f} c={view.point.c:.6f}")
    log.info("cmd: eigvec_done")
    return written
