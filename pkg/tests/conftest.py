import random

import networkx as nx
import pytest

from dcnflow.basegraph import BaseGraph
from dcnflow.build import build_topology


@pytest.fixture(scope="session")
def gq23():
    return build_topology("gqstar:2:3")


@pytest.fixture(scope="session")
def gq33():
    return build_topology("gqstar:3:3")


@pytest.fixture(scope="session")
def ficonn14():
    return build_topology("ficonn:1:4")


@pytest.fixture(scope="session")
def ficonn24():
    return build_topology("ficonn:2:4")


@pytest.fixture(scope="session")
def dpillar24():
    return build_topology("dpillar:2:4")


def random_connected_graph(rng: random.Random, max_nodes: int = 12,
                           min_nodes: int = 4):
    """Seeded connected simple graph with at least one cycle's worth of
    edges; returned as (BaseGraph, networkx.Graph)."""
    n = rng.randint(min_nodes, max_nodes)
    while True:
        p = rng.uniform(0.3, 0.7)
        G = nx.gnp_random_graph(n, p, seed=rng.randint(0, 10 ** 9))
        if nx.is_connected(G) and G.number_of_edges() >= n - 1:
            break
    edges = sorted((min(u, v), max(u, v)) for u, v in G.edges())
    return BaseGraph(n, edges), G


def hops_of(topology, nodes):
    return sum(1 for v in nodes if v < topology.num_servers) - 1
