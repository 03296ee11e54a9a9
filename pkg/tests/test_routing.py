import pytest

from dcnflow.bfs import bfs_route, bfs_tree
from dcnflow.build import build_topology
from dcnflow.errors import IncompatibleRouterError, RoutingDomainError
from dcnflow.faults import NO_FAULTS, FaultSet, inject_uniform
from dcnflow.routing import (FailureReason, RetryPolicy, RouteFailure,
                             dpillar_mp, dpillar_sp, ficonn_tor,
                             gq_dimension_order, gq_star_route, mix64, route,
                             route_pair, strip_loops)
from dcnflow.topology import Path, check_path

from conftest import hops_of


# --------------------------------------------------------------------------
# GQ* dimension-order

def test_partner_pair_is_one_hop(gq23):
    sm = gq23.meta.stellar
    nodes = gq_dimension_order(gq23, 0, sm.partner[0])
    assert nodes == [0, sm.partner[0]]


def test_same_switch_is_one_hop_via_switch(gq23):
    sm = gq23.meta.stellar
    s = 0
    t = next(x for x in gq23.servers() if x != s and sm.attach[x] == sm.attach[s])
    nodes = gq_dimension_order(gq23, s, t)
    assert nodes == [s, sm.attach[s], t]
    assert hops_of(gq23, nodes) == 1


def test_self_route_empty(gq23):
    assert gq_dimension_order(gq23, 3, 3) == [3]


def test_dimension_order_is_shortest_on_gq23(gq23):
    total_do = total_bfs = 0
    for s in gq23.servers():
        dist = bfs_tree(gq23, s)
        for t in gq23.servers():
            if s == t:
                continue
            nodes = gq_dimension_order(gq23, s, t)
            check_path(gq23, Path.from_nodes(gq23, nodes), frozenset(), s, t)
            total_do += hops_of(gq23, nodes)
            total_bfs += dist[t]
    assert total_do <= 1.02 * total_bfs
    assert total_do == total_bfs  # endpoint-aware ordering is exactly optimal


def test_dimension_order_hop_bound(gq33):
    k = gq33.params["k"]
    for s in range(0, gq33.num_servers, 7):
        for t in range(gq33.num_servers):
            if s != t:
                assert hops_of(gq33, gq_dimension_order(gq33, s, t)) <= 2 * k + 1


def test_dimension_order_requires_gq(ficonn14):
    with pytest.raises(RoutingDomainError):
        gq_dimension_order(ficonn14, 0, 5)


# --------------------------------------------------------------------------
# fault-tolerant GQ* routing

def test_fault_free_matches_dimension_order_exactly(gq23):
    for s in gq23.servers():
        for t in gq23.servers():
            if s == t:
                continue
            assert gq_star_route(gq23, None, s, t) == gq_dimension_order(gq23, s, t)


def test_single_fault_local_proxy_detour(gq23):
    # one-dimension pair whose only direct crossing is blocked: the reroute
    # crosses the dimension in two steps through a local proxy, +2 hops
    meta = gq23.meta
    n = meta.n
    a, b = meta.cross[0][0 * n + 1]   # the crossing edge between (0,0), (1,0)
    s = meta.cross[0][1 * n + 1][0]   # dimension-1 server at (0,0): its
    t = meta.cross[1][1 * n + 1][0]   # partner cannot shortcut dimension 0
    base = gq_dimension_order(gq23, s, t)
    assert hops_of(gq23, base) == 3
    assert a in base and b in base
    faults = FaultSet(frozenset([gq23.link_id(a, b)]))
    out = gq_star_route(gq23, faults, s, t)
    assert not isinstance(out, RouteFailure)
    check_path(gq23, Path.from_nodes(gq23, out), faults.link_ids, s, t)
    assert hops_of(gq23, out) == 3 + 2
    assert hops_of(gq23, bfs_route(gq23, faults, s, t)) == 5


def test_partner_pair_with_dead_link_reroutes(gq23):
    sm = gq23.meta.stellar
    s, t = 0, gq23.meta.stellar.partner[0]
    faults = FaultSet(frozenset([gq23.link_id(s, t)]))
    out = gq_star_route(gq23, faults, s, t)
    assert not isinstance(out, RouteFailure)
    check_path(gq23, Path.from_nodes(gq23, out), faults.link_ids, s, t)
    assert hops_of(gq23, out) == hops_of(gq23, bfs_route(gq23, faults, s, t))


def test_paths_never_traverse_failed_links(gq33):
    faults = inject_uniform(gq33, 0.12, 5)
    ns = gq33.num_servers
    for s in range(0, ns, 9):
        for t in range(0, ns, 4):
            if s == t:
                continue
            out = gq_star_route(gq33, faults, s, t, RetryPolicy(seed=mix64(1, s * ns + t)))
            if isinstance(out, RouteFailure):
                continue
            check_path(gq33, Path.from_nodes(gq33, out), faults.link_ids, s, t)


def test_bfs_dominates_routed_hops(gq33):
    faults = inject_uniform(gq33, 0.10, 11)
    ns = gq33.num_servers
    for s in range(0, ns, 13):
        dist = bfs_tree(gq33, s, faults)
        for t in range(ns):
            if s == t:
                continue
            out = gq_star_route(gq33, faults, s, t, RetryPolicy(seed=mix64(2, s * ns + t)))
            if isinstance(out, RouteFailure):
                continue
            assert dist[t] >= 0
            assert dist[t] <= hops_of(gq33, out)


def test_deterministic_outcomes(gq33):
    faults = inject_uniform(gq33, 0.15, 3)
    policy = RetryPolicy(seed=77)
    for s, t in [(0, 50), (10, 101), (7, 33)]:
        a = gq_star_route(gq33, faults, s, t, policy)
        b = gq_star_route(gq33, faults, s, t, policy)
        assert a == b


def test_attachment_fault_reason(gq23):
    sm = gq23.meta.stellar
    s = 0
    dead = frozenset([gq23.link_id(s, sm.attach[s]),
                      gq23.link_id(s, sm.partner[s])])
    out = gq_star_route(gq23, FaultSet(dead), s, 20)
    assert isinstance(out, RouteFailure)
    assert out.reason is FailureReason.ATTACHMENT_FAULT


def test_routed_connectivity_near_bfs_optimum():
    # degraded network: routed connectivity within 2% of the BFS optimum
    topo = build_topology("gqstar:3:5")
    faults = inject_uniform(topo, 0.10, 1)
    ns = topo.num_servers
    routed = reachable = pairs = 0
    for s in range(0, ns, 30):
        dist = bfs_tree(topo, s, faults)
        for t in range(ns):
            if s == t:
                continue
            pairs += 1
            if dist[t] >= 0:
                reachable += 1
            out = gq_star_route(topo, faults, s, t,
                                RetryPolicy(seed=mix64(3, s * ns + t)))
            if not isinstance(out, RouteFailure):
                routed += 1
    assert routed >= 0.98 * reachable


# --------------------------------------------------------------------------
# FiConn TOR

def test_tor_same_ficonn0_one_hop(ficonn14):
    nodes = ficonn_tor(ficonn14, 0, 1)
    assert hops_of(ficonn14, nodes) == 1
    assert len(nodes) == 3


@pytest.mark.parametrize("spec,bound", [("ficonn:1:4", 3), ("ficonn:2:4", 7)])
def test_tor_hop_bound_exhaustive(spec, bound):
    t = build_topology(spec)
    mx = 0
    for s in t.servers():
        for u in t.servers():
            if s == u:
                continue
            nodes = ficonn_tor(t, s, u)
            check_path(t, Path.from_nodes(t, nodes), frozenset(), s, u)
            mx = max(mx, hops_of(t, nodes))
    assert mx == bound  # 2^(k+1) - 1, attained


def test_tor_at_least_bfs_with_same_copy_equality(ficonn14):
    for s in ficonn14.servers():
        dist = bfs_tree(ficonn14, s)
        for u in ficonn14.servers():
            if s == u:
                continue
            h = hops_of(ficonn14, ficonn_tor(ficonn14, s, u))
            assert h >= dist[u]
            if s // 4 == u // 4:
                assert h == dist[u] == 1


def test_tor_rejects_faults(ficonn14):
    faults = FaultSet(frozenset([0]))
    with pytest.raises(RoutingDomainError):
        route(ficonn14, faults, "ficonn-tor", 0, 5)


# --------------------------------------------------------------------------
# DPillar

def test_sp_adjacent_column_same_group_one_hop(dpillar24):
    meta = dpillar24.meta
    s = meta.encode_server(0, (0, 0))
    t = meta.encode_server(1, (1, 0))  # rewrite digit 0 while stepping
    nodes = dpillar_sp(dpillar24, s, t)
    assert hops_of(dpillar24, nodes) == 1


def test_sp_bound_exhaustive():
    for spec, k in [("dpillar:2:4", 2), ("dpillar:3:4", 3)]:
        t = build_topology(spec)
        mx = 0
        for s in t.servers():
            for u in t.servers():
                if s == u:
                    continue
                nodes = dpillar_sp(t, s, u)
                check_path(t, Path.from_nodes(t, nodes), frozenset(), s, u)
                mx = max(mx, hops_of(t, nodes))
        assert mx == 2 * k - 1


def test_sp_uses_only_clockwise_channels(dpillar24):
    # under all-to-all, exactly half of the directional channels are unused
    from dcnflow.metrics import LinkLoadTable
    table = LinkLoadTable(dpillar24)
    for s in dpillar24.servers():
        for u in dpillar24.servers():
            if s != u:
                table.record_flow(dpillar_sp(dpillar24, s, u))
    assert table.zero_channels() == dpillar24.num_channels // 2
    # the unused ones are exactly: into the right switch, out of the left
    for srv in dpillar24.servers():
        assert table.counts[2 * (2 * srv) + 1] == 0      # right switch -> server
        assert table.counts[2 * (2 * srv + 1)] == 0      # server -> left switch


def test_mp_equals_sp_fault_free(dpillar24):
    for s in dpillar24.servers():
        for u in dpillar24.servers():
            if s != u:
                assert dpillar_mp(dpillar24, None, s, u) == dpillar_sp(dpillar24, s, u)


def test_mp_detours_around_single_fault():
    t = build_topology("dpillar:2:6")
    detours = 0
    for s in range(0, t.num_servers, 2):
        for u in t.servers():
            if s == u:
                continue
            sp = dpillar_sp(t, s, u)
            if len(sp) < 3:
                continue
            faults = FaultSet(frozenset([t.link_id(sp[1], sp[2])]))
            out = dpillar_mp(t, faults, s, u)
            if isinstance(out, RouteFailure):
                assert bfs_route(t, faults, s, u) is None
                continue
            check_path(t, Path.from_nodes(t, out), faults.link_ids, s, u)
            detours += 1
    assert detours > 50


def test_sp_rejects_faults(dpillar24):
    with pytest.raises(RoutingDomainError):
        route(dpillar24, FaultSet(frozenset([0])), "dpillar-sp", 0, 3)


# --------------------------------------------------------------------------
# dispatch and utilities

def test_router_family_gates(gq23, ficonn14, dpillar24):
    with pytest.raises(IncompatibleRouterError):
        route(gq23, None, "ficonn-tor", 0, 1)
    with pytest.raises(IncompatibleRouterError):
        route(ficonn14, None, "dpillar-sp", 0, 1)
    with pytest.raises(IncompatibleRouterError):
        route(dpillar24, None, "gq-star", 0, 1)
    with pytest.raises(IncompatibleRouterError):
        route(gq23, None, "no-such-router", 0, 1)


def test_route_returns_path_or_failure(gq23):
    out = route(gq23, None, "gq-star", 0, 9)
    assert isinstance(out, Path)
    t = build_topology("ficonn:0:2")
    f = FaultSet(frozenset([t.link_id(0, t.num_servers)]))
    out = route(t, f, "bfs", 1, 0)
    assert isinstance(out, RouteFailure)
    assert out.reason is FailureReason.NO_ROUTE_FOUND


def test_strip_loops():
    assert strip_loops([1, 2, 3, 2, 4]) == [1, 2, 4]
    assert strip_loops([1, 2, 3]) == [1, 2, 3]
    assert strip_loops([5, 6, 5]) == [5]
    assert strip_loops([1, 2, 3, 4, 2, 5, 3, 6]) == [1, 2, 5, 3, 6]


def test_mix64_is_stable():
    assert mix64(0, 0) == mix64(0, 0)
    assert mix64(1, 2) != mix64(2, 1)
    vals = {mix64(13, i) for i in range(1000)}
    assert len(vals) == 1000


def test_retry_policy_validation():
    with pytest.raises(ValueError):
        RetryPolicy(max_random_intermediates=-1)
