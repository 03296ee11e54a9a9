"""Disjoint-path counts between servers, for test-scale instances.

Both counts are unit-capacity max-flow values on a node-split directed copy
of the topology.  *Parallel paths* may share only the two attachment
switches (those switch capacities are lifted); *server-parallel paths* must
be disjoint in internal server-nodes only (every switch capacity is lifted).
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .errors import RoutingDomainError
from .topology import Topology

_BIG = 1 << 20


def _node_split_flow(topology: Topology, s: int, t: int, uncapped: set,
                     unit_edges: set = frozenset()) -> int:
    """Max s->t flow where every node outside ``uncapped`` admits one path.

    Node x splits into 2x (in) -> 2x+1 (out); undirected links become a pair
    of directed big-capacity arcs between the split halves.  Links listed in
    ``unit_edges`` (as (min,max) pairs) carry one unit per direction instead.
    """
    n = topology.num_nodes
    rows, cols, caps = [], [], []
    for x in range(n):
        rows.append(2 * x)
        cols.append(2 * x + 1)
        caps.append(_BIG if x in uncapped else 1)
    for u, v in topology.links:
        cap = 1 if (u, v) in unit_edges else _BIG
        rows.extend((2 * u + 1, 2 * v + 1))
        cols.extend((2 * v, 2 * u))
        caps.extend((cap, cap))
    graph = csr_matrix((np.asarray(caps, dtype=np.int32), (rows, cols)),
                       shape=(2 * n, 2 * n))
    return int(maximum_flow(graph, 2 * s + 1, 2 * t).flow_value)


def _partner_of(topology: Topology, s: int):
    for v, _ in topology.adjacency[s]:
        if topology.is_server(v):
            return v
    return None


def parallel_paths(topology: Topology, s: int, t: int) -> int:
    """Maximum number of s-t paths pairwise internally disjoint except
    possibly at the endpoints' attachment switches.

    Undefined (domain error) for servers on the same switch or on the same
    base edge: the path correspondence needs two distinct attachment
    switches that are not the endpoints of the pair's own edge.
    """
    if not (topology.is_server(s) and topology.is_server(t)) or s == t:
        raise ValueError("need two distinct servers")
    sw_s = _attachment_switch(topology, s)
    sw_t = _attachment_switch(topology, t)
    if sw_s == sw_t:
        raise RoutingDomainError(
            "parallel paths are undefined for servers on the same switch")
    if _partner_of(topology, s) == t:
        raise RoutingDomainError(
            "parallel paths are undefined for partner servers")
    return _node_split_flow(topology, s, t, {sw_s, sw_t})


def server_parallel_paths(topology: Topology, s: int, t: int) -> int:
    """Maximum number of s-t paths disjoint in internal server-nodes
    (switches may be shared).

    Partner pairs count the direct link once.  Same-switch pairs are
    rejected: the unit-capacity flow formulation has no finite value for
    them (the two-link path through the shared switch is uncapacitated).
    """
    if not (topology.is_server(s) and topology.is_server(t)) or s == t:
        raise ValueError("need two distinct servers")
    if _attachment_switch(topology, s) == _attachment_switch(topology, t):
        raise RoutingDomainError(
            "server-parallel paths are undefined for servers on the same switch")
    uncapped = set(topology.switches())
    unit = set()
    if _partner_of(topology, s) == t:
        unit.add((min(s, t), max(s, t)))
    return _node_split_flow(topology, s, t, uncapped, unit)


def _attachment_switch(topology: Topology, server: int) -> int:
    for v, _ in topology.adjacency[server]:
        if not topology.is_server(v):
            return v
    raise ValueError(f"server {server} has no switch link")
