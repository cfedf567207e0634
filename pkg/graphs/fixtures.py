# graphs/fixtures.py
# Small graphs with known answers, used by tests and by --graph fixture:NAME.
#
#   bipartite : two disjoint edges 0-1, 2-3; f = g_hat = (1,0,1,0); the range is the whole unit square
#   k4        : complete graph on 4 nodes; f = (1,1,0,0), g_hat = (0,0,1,0); the corner (1,1) is attained
#   path4     : path 0-1-2-3; distance filter from node 0 against the two lowest frequencies
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from graphs.core import Graph, PointCloud, geodesic, graph_from_edges, normalized_laplacian
from localization.filters import (
    FilterPair,
    SpatialFilter,
    SpectralFilter,
    distance_spatial,
    projection_spectral,
)
from spectral.eig import EigenDecomposition, eig_sym
from utils.errors import SpecError

_R2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class Fixture:
    name: str
    graph: Graph
    decomp: EigenDecomposition
    pair: FilterPair


def bipartite_fixture() -> Fixture:
    pts = PointCloud([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    g = graph_from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)], points=pts)
    U = np.array([
        [_R2, 0.0, _R2, 0.0],
        [_R2, 0.0, -_R2, 0.0],
        [0.0, _R2, 0.0, _R2],
        [0.0, _R2, 0.0, -_R2],
    ])
    decomp = EigenDecomposition.from_basis(normalized_laplacian(g), [0.0, 0.0, 2.0, 2.0], U)
    pair = FilterPair(SpatialFilter([1, 0, 1, 0]), SpectralFilter([1, 0, 1, 0]), "projection-projection")
    return Fixture("bipartite", g, decomp, pair)


def complete4_fixture() -> Fixture:
    pts = PointCloud([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    g = graph_from_edges(4, [(i, j, 1.0) for i in range(4) for j in range(i + 1, 4)], points=pts)
    U = np.array([
        [0.5, 0.5, _R2, 0.0],
        [0.5, 0.5, -_R2, 0.0],
        [0.5, -0.5, 0.0, _R2],
        [0.5, -0.5, 0.0, -_R2],
    ])
    lam = [0.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0]
    decomp = EigenDecomposition.from_basis(normalized_laplacian(g), lam, U)
    pair = FilterPair(SpatialFilter([1, 1, 0, 0]), SpectralFilter([0, 0, 1, 0]), "projection-projection")
    return Fixture("k4", g, decomp, pair)


def path_fixture() -> Fixture:
    pts = PointCloud([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
    g = graph_from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], points=pts)
    decomp = eig_sym(normalized_laplacian(g))
    pair = FilterPair(distance_spatial(geodesic(g, 0), 1.0), projection_spectral(4, [1, 2]), "distance-projection")
    return Fixture("path4", g, decomp, pair)


FIXTURES = {
    "bipartite": bipartite_fixture,
    "k4": complete4_fixture,
    "path4": path_fixture,
}


def load_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name.strip().lower()]()
    except KeyError:
        raise SpecError(f"unknown fixture {name!r} (choose from {', '.join(FIXTURES)})")
