# scripts/cmd_spectrum.py
# ---------------------------------------------------------------------------
# spectrum: eigenvalue decay of S and R(theta) for the four experiment pairs
# (plus the configured pair when it is not one of them).
#
# Writes spectrum.csv (pair, operator, 1-based index, value) and spectrum.svg
# (one line per pair and operator, index on x, eigenvalue on y).
# ---------------------------------------------------------------------------
from __future__ import annotations

from typing import Dict, List, Tuple

import numpy as np

from localization.operators import rotated
from render.exports import SpectrumRow, write_spectrum_csv
from render.svg import SvgCanvas
from scripts.common import load_problem, make_bundle, meta, out_path
from scripts.pairs import build_pair, experiment_specs, parse_pair_spec
from utils.errors import GraphRangeError, ValidationError
from utils.logger import log
from utils.params import RunConfig

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def spectra(cfg: RunConfig, problem) -> Dict[str, Tuple[np.ndarray, np.ndarray]]:
    """pair label -> (sigma descending, rho(theta) descending)."""
    out: Dict[str, Tuple[np.ndarray, np.ndarray]] = {}
    user = parse_pair_spec(cfg.pair)
    for spec in experiment_specs(user, has_fixture=problem.fixture_pair is not None):
        try:
            choice = build_pair(spec, problem.graph, problem.decomp, problem.fixture_pair)
            bundle = make_bundle(problem, choice)
        except GraphRangeError as e:
            log.warning(f"spectrum: skipping {spec.kind}: {e}")
            continue
        out[spec.describe()] = (bundle.spectrum.sigma, rotated(bundle, cfg.theta).rho)
    if not out:
        raise ValidationError("spectrum: no filter pair could be built on this graph")
    return out


def rows_for(specs: Dict[str, Tuple[np.ndarray, np.ndarray]]) -> List[SpectrumRow]:
    rows: List[SpectrumRow] = []
    for label, (sigma, rho) in specs.items():
        rows.extend((label, "S", k + 1, float(v)) for k, v in enumerate(sigma))
        rows.extend((label, "R", k + 1, float(v)) for k, v in enumerate(rho))
    return rows


def render_spectrum(specs: Dict[str, Tuple[np.ndarray, np.ndarray]], header: dict) -> SvgCanvas:
    n = max(len(s) for s, _ in specs.values())
    lo = min(min(float(s.min()), float(r.min())) for s, r in specs.values())
    svg = SvgCanvas(box=(1.0, float(max(n, 2)), min(0.0, lo), 1.5), width=640, height=400)
    svg.comment(" ".join(f"{k}={v}" for k, v in header.items()))
    svg.axes(xlabel="index k", ylabel="eigenvalue")
    for i, (label, (sigma, rho)) in enumerate(specs.items()):
        color = _COLORS[i % len(_COLORS)]
        ks = np.arange(1, len(sigma) + 1)
        svg.polyline(np.column_stack([ks, sigma]), stroke=color, width=1.2)
        svg.polyline(np.column_stack([ks, rho]), stroke=color, width=1.0, dash="3,2")
        px, py = svg.px(1.0, 1.5)
        svg.text(px + 8, py + 14 * (i + 1), f"{label} (solid S, dashed R)", size=9, color=color, raw=True)
    return svg


def run(cfg: RunConfig) -> List[str]:
    log.info("cmd: spectrum_start")
    problem = load_problem(cfg)
    specs = spectra(cfg, problem)
    header = meta(cfg, problem)
    written: List[str] = []
    if "csv" in cfg.formats:
        p = out_path(cfg, "spectrum.csv")
        write_spectrum_csv(p, rows_for(specs), header)
        written.append(p)
    if "svg" in cfg.formats:
        p = out_path(cfg, "spectrum.svg")
        render_spectrum(specs, header).save(p)
        written.append(p)
    for label, (sigma, _) in specs.items():
        log.info(f"spectrum: {label} sigma1={sigma[0]:.12g} sigma_n={sigma[-1]:.3g}")
    log.info("cmd: spectrum_done")
    return written
