# graphs/core.py
"""
Graph construction and the normalized Laplacian.

Graphs are dense: adjacency is an n x n float array, symmetric, nonnegative,
zero diagonal. Degrees are checked when the Laplacian is built, not here, so
a disconnected graph with positive degrees (two separate edges) is legal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csgraph
from scipy.spatial.distance import cdist, pdist, squareform

from utils.errors import (
    DimensionError,
    DisconnectedGraphError,
    IsolatedNodeError,
    ValidationError,
)
from utils.logger import log

SYM_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise ValidationError("point cloud must be a nonempty list of coordinates")
        if not np.all(np.isfinite(pts)):
            bad = int(np.argwhere(~np.isfinite(pts))[0][0])
            raise ValidationError(f"point {bad} has a nonfinite coordinate")
        object.__setattr__(self, "points", _frozen(pts))

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def subset(self, nodes: Sequence[int]) -> "PointCloud":
        return PointCloud(self.points[np.asarray(nodes, dtype=int)])


@dataclass(frozen=True, eq=False)
class Graph:
    adjacency: np.ndarray
    points: Optional[PointCloud] = None

    def __post_init__(self):
        A = np.asarray(self.adjacency, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValidationError(f"adjacency must be square, got shape {A.shape}")
        if A.shape[0] == 0:
            raise ValidationError("graph needs at least one node")
        if not np.all(np.isfinite(A)):
            raise ValidationError("adjacency has nonfinite entries")
        if np.any(A < 0):
            raise ValidationError("adjacency weights must be nonnegative")
        if np.max(np.abs(A - A.T)) > SYM_TOL:
            raise ValidationError("adjacency is not symmetric")
        loops = np.flatnonzero(np.diag(A))
        if loops.size:
            raise ValidationError(f"self-loop at node {int(loops[0])}")
        if self.points is not None and self.points.n != A.shape[0]:
            raise DimensionError("point cloud", A.shape[0], self.points.n)
        object.__setattr__(self, "adjacency", _frozen(A))

    @property
    def n(self) -> int:
        return int(self.adjacency.shape[0])

    def edges(self) -> List[Tuple[int, int, float]]:
        iu, ju = np.nonzero(np.triu(self.adjacency, k=1))
        return [(int(i), int(j), float(self.adjacency[i, j])) for i, j in zip(iu, ju)]

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.adjacency, k=1)))

    def subgraph(self, nodes: Sequence[int]) -> "Graph":
        idx = np.asarray(nodes, dtype=int)
        pts = self.points.subset(idx) if self.points is not None else None
        return Graph(self.adjacency[np.ix_(idx, idx)], pts)


@dataclass(frozen=True, eq=False)
class DegreeMatrix:
    degrees: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.degrees)


@dataclass(frozen=True, eq=False)
class GeodesicProfile:
    center: int
    dist: np.ndarray
    dmax: int


# ---------- construction ----------

def radius_graph(points: PointCloud, R: float) -> Graph:
    if not isinstance(points, PointCloud):
        points = PointCloud(points)
    if not (R > 0) or not np.isfinite(R):
        raise ValidationError(f"radius must be a positive finite number, got {R}")
    if points.n == 1:
        return Graph(np.zeros((1, 1)), points)
    D = squareform(pdist(points.points))
    A = ((D > 0) & (D <= R)).astype(float)
    dup = int(np.count_nonzero(np.triu(D == 0, k=1)))
    if dup:
        log.warning(f"radius_graph: {dup} coincident point pair(s) left unconnected")
    return Graph(A, points)


def graph_from_edges(n: int, edges: Iterable[Tuple[int, int, float]],
                     points: Optional[PointCloud] = None) -> Graph:
    if n < 1:
        raise ValidationError(f"node count must be >= 1, got {n}")
    A = np.zeros((n, n), dtype=float)
    for e in edges:
        i, j, w = int(e[0]), int(e[1]), float(e[2])
        if not (0 <= i < n and 0 <= j < n):
            raise ValidationError(f"edge ({i}, {j}) out of range for n={n}")
        if i == j:
            raise ValidationError(f"self-loop at node {i}")
        if not (w > 0) or not np.isfinite(w):
            raise ValidationError(f"edge ({i}, {j}) has nonpositive weight {w}")
        if A[i, j] != 0:
            raise ValidationError(f"duplicate edge ({min(i, j)}, {max(i, j)})")
        A[i, j] = A[j, i] = w
    return Graph(A, points)


def sensor_points(n: int, seed: int, dim: int = 2) -> PointCloud:
    """Seeded uniform points in the unit square."""
    rng = np.random.default_rng(seed)
    return PointCloud(rng.random((n, dim)))


def sensor_graph(n: int, R: float, seed: int) -> Graph:
    return radius_graph(sensor_points(n, seed), R)


# ---------- laplacian ----------

def degree_matrix(g: Graph) -> DegreeMatrix:
    return DegreeMatrix(_frozen(g.adjacency.sum(axis=1)))


def normalized_laplacian(g: Graph) -> np.ndarray:
    deg = degree_matrix(g).degrees
    zero = np.flatnonzero(deg <= 0)
    if zero.size:
        raise IsolatedNodeError(int(zero[0]))
    d = 1.0 / np.sqrt(deg)
    L = np.eye(g.n) - d[:, None] * g.adjacency * d[None, :]
    L = 0.5 * (L + L.T)
    np.fill_diagonal(L, 1.0)
    return L


# ---------- distances and components ----------

def _unweighted(g: Graph):
    return (g.adjacency > 0).astype(float)


def geodesic(g: Graph, w: int) -> GeodesicProfile:
    if not 0 <= w < g.n:
        raise ValidationError(f"center node {w} out of range for n={g.n}")
    dist = csgraph.shortest_path(_unweighted(g), method="D", unweighted=True, indices=int(w))
    unreachable = np.flatnonzero(~np.isfinite(dist))
    if unreachable.size:
        raise DisconnectedGraphError(int(w), unreachable)
    hops = dist.astype(int)
    dmax = int(hops.max())
    if dmax < 1:
        raise ValidationError("geodesic profile needs at least two connected nodes")
    hops.setflags(write=False)
    return GeodesicProfile(center=int(w), dist=hops, dmax=dmax)


def connected_components(g: Graph) -> Tuple[int, np.ndarray]:
    count, labels = csgraph.connected_components(_unweighted(g), directed=False)
    return int(count), labels


def is_connected(g: Graph) -> bool:
    return connected_components(g)[0] == 1


def largest_component(g: Graph) -> Tuple[Graph, np.ndarray]:
    """Restrict to the largest connected component (ties -> the one holding the lowest node)."""
    count, labels = connected_components(g)
    if count == 1:
        return g, np.arange(g.n)
    sizes = np.bincount(labels)
    keep = np.flatnonzero(labels == int(np.argmax(sizes)))
    log.warning(f"graph has {count} components; keeping largest ({keep.size} of {g.n} nodes)")
    return g.subgraph(keep), keep


def euclidean_ball(points: PointCloud, center: int, r: float) -> np.ndarray:
    d = cdist(points.points[[center]], points.points)[0]
    return np.flatnonzero(d <= r)


def hop_ball(profile: GeodesicProfile, r: int) -> np.ndarray:
    return np.flatnonzero(profile.dist <= r)


def central_node(g: Graph) -> int:
    """Node nearest the point-cloud centroid; minimum eccentricity without coordinates."""
    if g.points is not None:
        c = g.points.points.mean(axis=0, keepdims=True)
        return int(np.argmin(cdist(c, g.points.points)[0]))
    D = csgraph.shortest_path(_unweighted(g), method="D", unweighted=True)
    if not np.all(np.isfinite(D)):
        raise DisconnectedGraphError(0, np.flatnonzero(~np.isfinite(D[0])))
    return int(np.argmin(D.max(axis=1)))
