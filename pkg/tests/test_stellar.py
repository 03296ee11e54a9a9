import random

import networkx as nx
import pytest

from dcnflow.basegraph import GQParams, parse_edge_list
from dcnflow.bfs import bfs_tree
from dcnflow.errors import CapacityError
from dcnflow.stellar import (build_gq_star, lift_base_path, stellar_inverse,
                             stellar_transform)

from conftest import random_connected_graph

K4 = "0 1\n0 2\n0 3\n1 2\n1 3\n2 3"
C5 = "0 1\n1 2\n2 3\n3 4\n4 0"


def test_k4_counts():
    topo, sm = stellar_transform(parse_edge_list(K4))
    assert topo.num_servers == 12
    assert topo.num_switches == 4
    assert topo.num_links == 18
    topo.validate()


def test_every_server_has_one_server_and_one_switch_neighbor():
    topo, _ = stellar_transform(parse_edge_list(C5))
    for s in topo.servers():
        kinds = sorted(topo.is_server(v) for v, _ in topo.adjacency[s])
        assert kinds == [False, True]


def test_switch_degrees_match_base_degrees():
    base = parse_edge_list(K4)
    topo, sm = stellar_transform(base)
    degs = base.degrees()
    for u in range(base.num_nodes):
        assert topo.degree(sm.switch_of_base_node(u)) == degs[u]


def test_server_pair_orientation():
    # server 2e attaches the lower-numbered endpoint of edge e
    base = parse_edge_list(C5)
    topo, sm = stellar_transform(base)
    for e, (u, v) in enumerate(base.edges):
        assert sm.attach[2 * e] == sm.switch_of_base_node(u)
        assert sm.attach[2 * e + 1] == sm.switch_of_base_node(v)


def test_rejects_trivial_and_disconnected():
    from dcnflow.basegraph import BaseGraph
    with pytest.raises(ValueError):
        stellar_transform(BaseGraph(2, []))
    with pytest.raises(ValueError):
        stellar_transform(parse_edge_list("0 1\n2 3"))


def test_capacity_error():
    with pytest.raises(CapacityError):
        build_gq_star(GQParams(3, 10), max_nodes=100)


def test_gq_star_3_10_table_counts():
    topo = build_gq_star(GQParams(3, 10))
    assert topo.num_servers == 27_000
    assert topo.num_switches == 1_000
    assert topo.num_channels == 81_000


def test_stellar_c5_hop_diameter_is_5():
    topo, _ = stellar_transform(parse_edge_list(C5))
    diam = max(max(bfs_tree(topo, s)) for s in topo.servers())
    assert diam == 5  # base diameter 2, upper end of {3,4,5}


@pytest.mark.parametrize("k,n", [(1, 3), (2, 3), (2, 4), (3, 3)])
def test_gq_star_hop_diameter_is_2k_plus_1(k, n):
    topo = build_gq_star(GQParams(k, n))
    diam = max(max(bfs_tree(topo, s)) for s in topo.servers())
    assert diam == 2 * k + 1


def test_stellar_closure_roundtrip():
    rng = random.Random(2024)
    for _ in range(12):
        bg, G = random_connected_graph(rng, max_nodes=10)
        topo, _ = stellar_transform(bg)
        back = stellar_inverse(topo)
        H = nx.Graph(back.edges)
        H.add_nodes_from(range(back.num_nodes))
        assert nx.is_isomorphic(G, H)


def test_inverse_rejects_non_stellar(ficonn14):
    with pytest.raises(ValueError):
        stellar_inverse(ficonn14)  # FiConn has degree-1 servers


def test_path_correspondence():
    # every base path of length m lifts to hop-length in {2m-1, 2m, 2m+1}
    rng = random.Random(7)
    for _ in range(6):
        bg, G = random_connected_graph(rng, max_nodes=8)
        topo, sm = stellar_transform(bg)
        count = 0
        for u in G.nodes:
            for v in G.nodes:
                if u >= v:
                    continue
                for path in nx.all_simple_paths(G, u, v, cutoff=4):
                    m = len(path) - 1
                    nodes = lift_base_path(topo, sm, path)
                    hops = sum(1 for x in nodes if topo.is_server(x)) - 1
                    assert 2 * m - 1 <= hops <= 2 * m + 1
                    count += 1
                    if count > 300:
                        return
