# scripts/common.py
# Shared plumbing for the subcommands: graph loading, pair/bundle setup,
# the range computation for a configured angle schedule, and output paths.
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from graphs.core import Graph, largest_component, normalized_laplacian, radius_graph, sensor_graph
from graphs.fixtures import load_fixture
from graphs.io import read_edge_list, read_point_cloud
from localization.filters import FilterPair
from localization.operators import OperatorBundle, build_bundle, dual_bundle
from localization.uncertainty import RangeApproximation, SupportOracle, adaptive_sandwich, algorithm1, uniform_angles
from scripts.pairs import PairChoice, build_pair, parse_pair_spec
from spectral.eig import EigenDecomposition, eig_sym
from utils.errors import InputError, SpecError
from utils.logger import log
from utils.params import AngleSchedule, GraphSource, RunConfig


@dataclass(frozen=True, eq=False)
class Problem:
    source: GraphSource
    graph: Graph
    decomp: EigenDecomposition
    kept: np.ndarray                        # original node ids of graph's nodes
    fixture_pair: Optional[FilterPair] = None

    @property
    def n(self) -> int:
        return self.graph.n


def load_problem(cfg: RunConfig) -> Problem:
    src = cfg.graph_source
    if src.kind == "fixture":
        fx = load_fixture(src.fixture)
        return Problem(src, fx.graph, fx.decomp, np.arange(fx.graph.n), fx.pair)
    if src.kind == "sensor":
        g = sensor_graph(src.n, src.R, src.seed)
    elif src.kind == "csv":
        g = radius_graph(read_point_cloud(src.path), cfg.radius)
    elif src.kind == "edges":
        g = read_edge_list(src.path)
    else:
        raise SpecError(f"unsupported graph source {src.kind!r}")
    kept = np.arange(g.n)
    if src.kind in ("sensor", "csv"):
        g, kept = largest_component(g)
    log.info(f"graph: {src.describe()} n={g.n} edges={g.edge_count}")
    decomp = eig_sym(normalized_laplacian(g))
    return Problem(src, g, decomp, kept)


def load_pair(cfg: RunConfig, problem: Problem, spec_text: Optional[str] = None) -> PairChoice:
    spec = parse_pair_spec(spec_text if spec_text is not None else cfg.pair)
    return build_pair(spec, problem.graph, problem.decomp, problem.fixture_pair)


def make_bundle(problem: Problem, choice: PairChoice) -> OperatorBundle:
    if choice.dual:
        return dual_bundle(problem.decomp, choice.pair)
    return build_bundle(problem.decomp, choice.pair)


def compute_range(bundle: OperatorBundle, schedule: AngleSchedule, workers: int = 1,
                  oracle: Optional[SupportOracle] = None) -> RangeApproximation:
    if schedule.kind == "uniform":
        return algorithm1(bundle, uniform_angles(schedule.K), workers=workers, oracle=oracle)
    return adaptive_sandwich(bundle, schedule.tol, schedule.K_max, workers=workers, oracle=oracle)


def meta(cfg: RunConfig, problem: Problem, choice: Optional[PairChoice] = None) -> Dict[str, object]:
    """Header fields written into every output file (no timestamps)."""
    src = problem.source
    out: Dict[str, object] = {
        "graph": src.describe(),
        "graph_seed": src.seed if src.kind == "sensor" else None,
        "n": problem.n,
        "edges": problem.graph.edge_count,
    }
    if choice is not None:
        out["pair"] = choice.spec.describe()
        out["dual"] = choice.dual
    out.update({"angles": cfg.angles, "theta": repr(float(cfg.theta)), "seed": cfg.seed})
    return out


def out_path(cfg: RunConfig, name: str) -> str:
    try:
        os.makedirs(cfg.out, exist_ok=True)
    except OSError as e:
        raise InputError(f"cannot create output directory: {e.strerror or e}", path=cfg.out)
    return os.path.join(cfg.out, name)


def layout(problem: Problem) -> np.ndarray:
    """2-D node positions: point coordinates when known, else the u_2/u_3 spectral layout."""
    g = problem.graph
    if g.points is not None:
        P = g.points.points
        if P.shape[1] == 1:
            return np.column_stack([P[:, 0], np.zeros(P.shape[0])])
        return P[:, :2]
    U = problem.decomp.vectors
    if U.shape[1] >= 3:
        return U[:, 1:3]
    return np.column_stack([np.arange(g.n, dtype=float), np.zeros(g.n)])
