# tests/conftest.py
from __future__ import annotations

import pytest

from graphs.core import normalized_laplacian
from graphs.fixtures import bipartite_fixture, complete4_fixture, path_fixture
from spectral.eig import eig_sym
from tests.helpers import random_connected_graph
from utils import telemetry


@pytest.fixture
def bipartite():
    return bipartite_fixture()


@pytest.fixture
def k4():
    return complete4_fixture()


@pytest.fixture
def path4():
    return path_fixture()


@pytest.fixture
def random_problem():
    """(graph, decomposition) for a 10-node random connected graph."""
    g = random_connected_graph(10, seed=3)
    return g, eig_sym(normalized_laplacian(g))


@pytest.fixture(autouse=True)
def _fresh_telemetry():
    telemetry.reset()
    yield
