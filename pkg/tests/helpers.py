# tests/helpers.py
from __future__ import annotations

import numpy as np

from graphs.core import Graph, geodesic, graph_from_edges, normalized_laplacian
from spectral.eig import eig_sym
from localization.filters import (
    FilterPair,
    SpatialFilter,
    SpectralFilter,
    distance_spatial,
    laplace_spectral,
    projection_spatial,
    projection_spectral,
    smoothed_bandlimit,
)

PAIR_KINDS = (
    "projection-projection",
    "distance-projection",
    "modified-distance-projection",
    "distance-laplace",
)


def random_connected_graph(n: int, seed: int, p: float = 0.35, weighted: bool = True) -> Graph:
    """Random spanning path plus Bernoulli(p) extra edges."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    pairs = {tuple(sorted((int(order[i]), int(order[i + 1])))) for i in range(n - 1)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                pairs.add((i, j))
    edges = [(i, j, float(rng.uniform(0.5, 2.0)) if weighted else 1.0) for i, j in sorted(pairs)]
    return graph_from_edges(n, edges)


def random_pair(g: Graph, decomp, kind: str, seed: int) -> FilterPair:
    rng = np.random.default_rng(seed)
    n = g.n
    N = max(1, n // 2)
    w = int(rng.integers(n))
    if kind == "projection-projection":
        A = rng.choice(n, size=max(1, n // 3), replace=False)
        return FilterPair(projection_spatial(n, A), projection_spectral(n, range(1, N + 1)), kind)
    if kind == "distance-projection":
        return FilterPair(distance_spatial(geodesic(g, w), 1.0), projection_spectral(n, range(1, N + 1)), kind)
    if kind == "modified-distance-projection":
        return FilterPair(distance_spatial(geodesic(g, w), 0.5),
                          smoothed_bandlimit(decomp.values, range(1, N + 1), 2.0), kind)
    if kind == "distance-laplace":
        return FilterPair(distance_spatial(geodesic(g, w), 2.0), laplace_spectral(decomp.values), kind)
    raise ValueError(kind)


def random_strict_pair(n: int, seed: int) -> FilterPair:
    """f and g_hat in [0, 0.9] except one entry equal to 1 (simple top eigenvalues)."""
    rng = np.random.default_rng(seed)
    f = rng.uniform(0.0, 0.9, n)
    g = rng.uniform(0.0, 0.9, n)
    f[rng.integers(n)] = 1.0
    g[rng.integers(n)] = 1.0
    return FilterPair(SpatialFilter(f), SpectralFilter(g), "custom")


def unit_rows(count: int, n: int, seed: int) -> np.ndarray:
    X = np.random.default_rng(seed).standard_normal((count, n))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def random_problem_pair(n: int, seed: int, kind: str):
    """Random connected graph, its decomposition and a filter pair of the given kind."""
    g = random_connected_graph(n, seed)
    decomp = eig_sym(normalized_laplacian(g))
    return g, decomp, random_pair(g, decomp, kind, seed + 1)
