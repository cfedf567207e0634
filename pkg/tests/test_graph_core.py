import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphs.core import (
    Graph,
    PointCloud,
    central_node,
    connected_components,
    euclidean_ball,
    geodesic,
    graph_from_edges,
    hop_ball,
    largest_component,
    normalized_laplacian,
    radius_graph,
    sensor_graph,
)
from utils.errors import DisconnectedGraphError, IsolatedNodeError, ValidationError
from tests.helpers import random_connected_graph


def test_radius_graph_far_points_have_no_edge():
    g = radius_graph(PointCloud([[0.0, 0.0], [0.2, 0.0]]), 0.1)
    assert g.n == 2
    assert g.edge_count == 0


def test_radius_graph_close_points_form_k5():
    ang = np.linspace(0, 2 * np.pi, 5, endpoint=False)
    pts = PointCloud(np.column_stack([0.1 * np.cos(ang), 0.1 * np.sin(ang)]))
    g = radius_graph(pts, 1.0)
    assert g.edge_count == 10
    assert np.array_equal(g.adjacency, np.ones((5, 5)) - np.eye(5))


def test_radius_graph_rejects_bad_input():
    with pytest.raises(ValidationError):
        PointCloud(np.zeros((0, 2)))
    with pytest.raises(ValidationError):
        PointCloud([[0.0, np.nan]])
    with pytest.raises(ValidationError):
        radius_graph(PointCloud([[0.0, 0.0], [1.0, 1.0]]), 0.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_radius_graph_is_permutation_equivariant(seed):
    rng = np.random.default_rng(seed)
    pts = rng.random((12, 2))
    perm = rng.permutation(12)
    A = radius_graph(PointCloud(pts), 0.3).adjacency
    B = radius_graph(PointCloud(pts[perm]), 0.3).adjacency
    assert np.array_equal(B, A[np.ix_(perm, perm)])


def test_graph_from_edges_counterexample_graphs():
    bip = graph_from_edges(4, [(0, 1, 1), (2, 3, 1)])
    assert bip.edges() == [(0, 1, 1.0), (2, 3, 1.0)]
    k4 = graph_from_edges(4, [(i, j, 1) for i in range(4) for j in range(i + 1, 4)])
    assert k4.edge_count == 6
    two = graph_from_edges(2, [(0, 1, 1)])
    assert two.n == 2


@pytest.mark.parametrize(
    "edges",
    [
        [(0, 4, 1.0)],
        [(1, 1, 1.0)],
        [(0, 1, 1.0), (1, 0, 2.0)],
        [(0, 1, 0.0)],
        [(0, 1, -1.0)],
    ],
)
def test_graph_from_edges_rejects(edges):
    with pytest.raises(ValidationError):
        graph_from_edges(4, edges)


def test_graph_rejects_asymmetric_and_negative():
    with pytest.raises(ValidationError):
        Graph(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValidationError):
        Graph(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    with pytest.raises(ValidationError):
        Graph(np.array([[1.0, 1.0], [1.0, 0.0]]))


def test_laplacian_bipartite():
    L = normalized_laplacian(graph_from_edges(4, [(0, 1, 1), (2, 3, 1)]))
    expected = np.array([[1, -1, 0, 0], [-1, 1, 0, 0], [0, 0, 1, -1], [0, 0, -1, 1]], dtype=float)
    assert np.allclose(L, expected, atol=1e-12)


def test_laplacian_k4():
    L = normalized_laplacian(graph_from_edges(4, [(i, j, 1) for i in range(4) for j in range(i + 1, 4)]))
    expected = (4 * np.eye(4) - np.ones((4, 4))) / 3
    assert np.allclose(L, expected, atol=1e-12)


def test_laplacian_single_edge():
    L = normalized_laplacian(graph_from_edges(2, [(0, 1, 1)]))
    assert np.allclose(L, [[1, -1], [-1, 1]], atol=1e-12)


def test_laplacian_names_isolated_node():
    g = graph_from_edges(3, [(0, 2, 1.0)])
    with pytest.raises(IsolatedNodeError) as err:
        normalized_laplacian(g)
    assert err.value.node == 1
    assert "node 1" in str(err.value)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=3, max_value=14), st.integers(min_value=0, max_value=10_000))
def test_laplacian_symmetric_with_unit_diagonal(n, seed):
    L = normalized_laplacian(random_connected_graph(n, seed))
    assert np.max(np.abs(L - L.T)) <= 1e-12
    assert np.allclose(np.diag(L), 1.0, atol=1e-12)


def test_geodesic_path_and_k4(path4, k4):
    prof = geodesic(path4.graph, 0)
    assert prof.dist.tolist() == [0, 1, 2, 3]
    assert prof.dmax == 3
    prof = geodesic(k4.graph, 2)
    assert prof.dist.tolist() == [1, 1, 0, 1]
    assert prof.dmax == 1


def test_geodesic_rejects_disconnected(bipartite):
    with pytest.raises(DisconnectedGraphError) as err:
        geodesic(bipartite.graph, 0)
    assert err.value.unreachable == [2, 3]


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=4, max_value=12), st.integers(min_value=0, max_value=10_000))
def test_geodesic_triangle_inequality(n, seed):
    g = random_connected_graph(n, seed, p=0.2)
    D = np.array([geodesic(g, w).dist for w in range(n)])
    rng = np.random.default_rng(seed)
    for _ in range(50):
        u, v, w = rng.integers(n, size=3)
        assert D[u, v] <= D[u, w] + D[w, v]


def test_sensor_graph_is_seeded_and_plausible():
    g1 = sensor_graph(253, 1.0 / 6.0, 7)
    g2 = sensor_graph(253, 1.0 / 6.0, 7)
    assert g1.n == 253
    assert g1.edge_count == g2.edge_count
    assert np.array_equal(g1.adjacency, g2.adjacency)
    # around 2400 expected for 253 uniform points at R = 1/6
    assert 1800 <= g1.edge_count <= 3000


def test_largest_component_keeps_biggest_piece():
    g = graph_from_edges(6, [(0, 1, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1)])
    count, _ = connected_components(g)
    assert count == 2
    sub, kept = largest_component(g)
    assert kept.tolist() == [2, 3, 4, 5]
    assert sub.n == 4 and sub.edge_count == 3


def test_balls_and_center(path4):
    pts = path4.graph.points
    assert euclidean_ball(pts, 1, 1.0).tolist() == [0, 1, 2]
    assert hop_ball(geodesic(path4.graph, 0), 2).tolist() == [0, 1, 2]
    # centroid x = 1.5 -> nodes 1 and 2 tie, first wins
    assert central_node(path4.graph) == 1
    bare = graph_from_edges(5, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)])
    assert central_node(bare) == 2
