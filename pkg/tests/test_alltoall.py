import numpy as np
import pytest

from dcnflow.alltoall import (alltoall_table_dpillar, alltoall_table_ficonn,
                              alltoall_table_gqstar, dpillar_per_source_steps,
                              exact_alltoall_table)
from dcnflow.build import build_topology
from dcnflow.metrics import LinkLoadTable
from dcnflow.routing import route_pair, DEFAULT_POLICY
from dcnflow.faults import NO_FAULTS


def brute_table(topology, router):
    table = LinkLoadTable(topology)
    for s in topology.servers():
        for t in topology.servers():
            if s != t:
                table.record_flow(
                    route_pair(topology, NO_FAULTS, router, s, t, DEFAULT_POLICY))
    return table


def assert_tables_equal(a, b):
    assert np.array_equal(a.counts, b.counts)
    assert a.routed_flows == b.routed_flows
    assert a.hop_sum == b.hop_sum
    assert a.hop_max == b.hop_max


@pytest.mark.parametrize("spec", ["gqstar:1:3", "gqstar:2:3", "gqstar:2:4",
                                  "gqstar:3:3", "gqstar:1:2"])
def test_gqstar_exact_matches_streamed(spec):
    topo = build_topology(spec)
    assert_tables_equal(alltoall_table_gqstar(topo), brute_table(topo, "gq-star"))


@pytest.mark.parametrize("spec", ["ficonn:0:4", "ficonn:1:4", "ficonn:2:4",
                                  "ficonn:1:6"])
def test_ficonn_exact_matches_streamed(spec):
    topo = build_topology(spec)
    assert_tables_equal(alltoall_table_ficonn(topo), brute_table(topo, "ficonn-tor"))


@pytest.mark.parametrize("spec", ["dpillar:2:4", "dpillar:3:4", "dpillar:2:6"])
def test_dpillar_exact_matches_streamed(spec):
    topo = build_topology(spec)
    assert_tables_equal(alltoall_table_dpillar(topo), brute_table(topo, "dpillar-sp"))


def test_dpillar_per_source_steps_small():
    # DPillar(2,4): enumevable by hand via the clockwise rule
    topo = build_topology("dpillar:2:4")
    total = 0
    for s in topo.servers():
        for t in topo.servers():
            if s == t:
                continue
            nodes = route_pair(topo, NO_FAULTS, "dpillar-sp", s, t, DEFAULT_POLICY)
            total += sum(1 for v in nodes if v < topo.num_servers) - 1
    assert total == topo.num_servers * dpillar_per_source_steps(2, 2)


def test_dispatcher(gq23, ficonn14, dpillar24):
    assert exact_alltoall_table(gq23, "gq-star") is not None
    assert exact_alltoall_table(gq23, "gq-dimension-order") is not None
    assert exact_alltoall_table(gq23, "bfs") is None
    assert exact_alltoall_table(ficonn14, "ficonn-tor") is not None
    assert exact_alltoall_table(dpillar24, "dpillar-sp") is not None
    assert exact_alltoall_table(dpillar24, "dpillar-mp") is None
