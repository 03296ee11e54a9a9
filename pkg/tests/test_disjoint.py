import random

import networkx as nx
import pytest

from dcnflow.basegraph import parse_edge_list
from dcnflow.disjoint import parallel_paths, server_parallel_paths
from dcnflow.errors import RoutingDomainError
from dcnflow.stellar import stellar_transform

from conftest import random_connected_graph


def stellar_of(text):
    return stellar_transform(parse_edge_list(text))


def test_k4_disjoint_edge_pair_has_three_parallel_paths():
    topo, sm = stellar_of("0 1\n0 2\n0 3\n1 2\n1 3\n2 3")
    # server 0 on edge (0,1), server 10 on edge (2,3)
    assert parallel_paths(topo, 0, 10) == 3
    assert server_parallel_paths(topo, 0, 10) == 3


def test_k2_partner_pair():
    topo, _ = stellar_of("0 1")
    with pytest.raises(RoutingDomainError):
        parallel_paths(topo, 0, 1)
    assert server_parallel_paths(topo, 0, 1) == 1


def test_c5_server_parallel_is_two():
    topo, _ = stellar_of("0 1\n1 2\n2 3\n3 4\n4 0")
    assert server_parallel_paths(topo, 0, 4) == 2
    assert parallel_paths(topo, 0, 4) == 2


def test_gq23_parallel_paths_equal_k_times_n_minus_1(gq23):
    sm = gq23.meta.stellar
    vals = set()
    for s in (0, 3, 10):
        for t in range(gq23.num_servers - 8, gq23.num_servers):
            if s == t or sm.attach[s] == sm.attach[t] or sm.partner[s] == t:
                continue
            vals.add(parallel_paths(gq23, s, t))
    assert vals == {4}
    assert server_parallel_paths(gq23, 0, gq23.num_servers - 1) == 4


def test_same_switch_pairs_rejected(gq23):
    sm = gq23.meta.stellar
    s = 0
    t = next(x for x in gq23.servers()
             if x != s and sm.attach[x] == sm.attach[s])
    with pytest.raises(RoutingDomainError):
        parallel_paths(gq23, s, t)
    with pytest.raises(RoutingDomainError):
        server_parallel_paths(gq23, s, t)


def test_menger_agreement_small_graphs():
    rng = random.Random(99)
    pairs_checked = 0
    for _ in range(8):
        bg, G = random_connected_graph(rng, max_nodes=8, min_nodes=5)
        topo, sm = stellar_transform(bg)
        ns = topo.num_servers
        for s in range(ns):
            for t in range(s + 1, ns):
                u = sm.attach[s] - ns
                v = sm.attach[t] - ns
                if u == v or sm.partner[s] == t:
                    continue
                assert parallel_paths(topo, s, t) == nx.node_connectivity(G, u, v)
                assert server_parallel_paths(topo, s, t) == nx.edge_connectivity(G, u, v)
                pairs_checked += 1
    assert pairs_checked > 200


def test_min_parallel_paths_equals_graph_connectivity():
    rng = random.Random(4242)
    for _ in range(6):
        bg, G = random_connected_graph(rng, max_nodes=9, min_nodes=5)
        topo, sm = stellar_transform(bg)
        ns = topo.num_servers
        best = None
        for s in range(ns):
            for t in range(s + 1, ns):
                if sm.attach[s] == sm.attach[t] or sm.partner[s] == t:
                    continue
                pp = parallel_paths(topo, s, t)
                best = pp if best is None else min(best, pp)
        assert best == nx.node_connectivity(G)
