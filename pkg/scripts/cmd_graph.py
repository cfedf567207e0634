# scripts/cmd_graph.py
# ---------------------------------------------------------------------------
# graph: build (or load) the configured graph, log a summary and export it.
#
#   graph_edges.txt   edge list ("n <count>" header, then "i j w")
#   graph_points.csv  node coordinates, when the graph has them
#   graph.json        summary (nodes, edges, degrees, components, spectrum range)
# ---------------------------------------------------------------------------
from __future__ import annotations

from typing import Any, Dict, List

import numpy as np

from graphs.core import connected_components, degree_matrix
from graphs.io import write_edge_list, write_point_cloud
from render.exports import write_json
from scripts.common import Problem, load_problem, meta, out_path
from utils.logger import log
from utils.params import RunConfig


def summary(problem: Problem) -> Dict[str, Any]:
    g = problem.graph
    deg = degree_matrix(g).degrees
    count, labels = connected_components(g)
    lam = problem.decomp.values
    return {
        "nodes": g.n,
        "edges": g.edge_count,
        "degree_min": float(deg.min()),
        "degree_max": float(deg.max()),
        "degree_mean": float(deg.mean()),
        "components": count,
        "component_sizes": sorted((int(c) for c in np.bincount(labels)), reverse=True),
        "kept_nodes": [int(v) for v in problem.kept],
        "lambda_min": float(lam[0]),
        "lambda_max": float(lam[-1]),
        "lambda_2": float(lam[1]) if lam.size > 1 else None,
    }


def run(cfg: RunConfig) -> List[str]:
    log.info("cmd: graph_start")
    problem = load_problem(cfg)
    info = summary(problem)
    header = meta(cfg, problem)
    head_text = " ".join(f"{k}={v}" for k, v in header.items())
    written: List[str] = []
    p = out_path(cfg, "graph_edges.txt")
    write_edge_list(p, problem.graph, header=head_text)
    written.append(p)
    if problem.graph.points is not None and "csv" in cfg.formats:
        p = out_path(cfg, "graph_points.csv")
        write_point_cloud(p, problem.graph.points, header=head_text)
        written.append(p)
    if "json" in cfg.formats:
        p = out_path(cfg, "graph.json")
        write_json(p, {"meta": header, **info})
        written.append(p)
    log.info(
        f"graph: n={info['nodes']} edges={info['edges']} degree=[{info['degree_min']:g}, {info['degree_max']:g}] "
        f"components={info['components']}"
    )
    log.info("cmd: graph_done")
    return written
