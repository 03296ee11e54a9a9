"""The stellar transformation and the GQ* instantiation.

Every edge of a base graph is replaced by a 3-path holding two new
server-nodes; the original nodes become switch-nodes.  For base edge ``e``
(endpoints ``u < v``) the two servers get ids ``2e`` and ``2e+1``: server
``2e`` attaches to ``switch(u)``, server ``2e+1`` to ``switch(v)``, and the
two are partners over a direct server-server link.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .basegraph import BaseGraph, GQParams, build_gq
from .errors import CapacityError
from .topology import Family, Topology


@dataclass
class StellarMap:
    """Construction record of a stellar transform.

    ``attach[s]`` is the switch of server ``s``; ``partner[s]`` its edge
    twin; ``base_edge[s]`` the base-edge index it sits on.  ``link_dims``
    labels each link with the base-graph dimension of its edge when the base
    carries coordinates (used for CSV export), else -1.
    """

    num_base_nodes: int
    num_base_edges: int
    attach: list
    partner: list
    base_edge: list
    link_dims: Optional[list] = None

    def servers_of_edge(self, e: int) -> tuple:
        return 2 * e, 2 * e + 1

    def switch_of_base_node(self, u: int) -> int:
        return 2 * self.num_base_edges + u


def stellar_transform(base: BaseGraph, family: Family = Family.GENERIC_STELLAR,
                      name: str = "", max_nodes: int = 4_000_000) -> tuple:
    """Apply the stellar transformation; returns ``(topology, stellar_map)``.

    The base must be connected with at least one edge and no self-loops.
    """
    if base.num_edges == 0:
        raise ValueError("base graph is trivial (no edges)")
    if not base.is_connected():
        raise ValueError("base graph is disconnected")
    ns = 2 * base.num_edges
    nw = base.num_nodes
    if ns + nw > max_nodes:
        raise CapacityError(f"stellar transform yields {ns + nw} nodes > cap {max_nodes}")

    attach = [0] * ns
    partner = [0] * ns
    edge_of = [0] * ns
    links = []
    adjacency = [[] for _ in range(ns + nw)]

    def add_link(a: int, b: int) -> int:
        lid = len(links)
        links.append((a, b) if a < b else (b, a))
        adjacency[a].append((b, lid))
        adjacency[b].append((a, lid))
        return lid

    for e, (u, v) in enumerate(base.edges):
        sa, sb = 2 * e, 2 * e + 1
        su, sv = ns + u, ns + v
        attach[sa], attach[sb] = su, sv
        partner[sa], partner[sb] = sb, sa
        edge_of[sa] = edge_of[sb] = e
        add_link(sa, sb)
        add_link(sa, su)
        add_link(sb, sv)

    sm = StellarMap(base.num_nodes, base.num_edges, attach, partner, edge_of)

    labels = None
    if base.labels is not None:
        labels = [None] * ns + list(base.labels)

    topo = Topology(
        num_servers=ns,
        num_switches=nw,
        links=links,
        adjacency=adjacency,
        family=family,
        labels=labels,
        meta=sm,
        name=name or family.value,
    )
    return topo, sm


def stellar_inverse(topology: Topology) -> BaseGraph:
    """Recover the base graph from a topology in stellar form.

    Raises ``ValueError`` when the topology is not stellar (some server is
    not adjacent to exactly one server and one switch).
    """
    edges = set()
    for s in topology.servers():
        nbrs = topology.adjacency[s]
        partners = [v for v, _ in nbrs if topology.is_server(v)]
        switches = [v for v, _ in nbrs if not topology.is_server(v)]
        if len(partners) != 1 or len(switches) != 1:
            raise ValueError(f"server {s} is not in stellar form")
        p = partners[0]
        u = switches[0] - topology.num_servers
        v = [w for w, _ in topology.adjacency[p] if not topology.is_server(w)]
        if len(v) != 1:
            raise ValueError(f"server {p} is not in stellar form")
        w = v[0] - topology.num_servers
        if u == w:
            raise ValueError("partner servers share a switch; base self-loop")
        edges.add((min(u, w), max(u, w)))
    return BaseGraph(topology.num_switches, sorted(edges))


def lift_base_path(topology: Topology, sm: StellarMap, base_path: list,
                   first_server: int | None = None,
                   last_server: int | None = None) -> list:
    """Lift a base-graph path onto the stellar topology.

    ``base_path`` is a node sequence in the base graph; the lift threads the
    two servers of each traversed edge, entering at ``first_server`` (any
    server of the first node's star, default: the first edge's near server)
    and leaving at ``last_server``.  Returns the full stellar node sequence.
    """
    if len(base_path) < 2:
        raise ValueError("base path needs at least one edge")
    pairs = {}
    for s in range(topology.num_servers):
        e = sm.base_edge[s]
        pairs.setdefault(e, {})[sm.attach[s] - topology.num_servers] = s

    def edge_servers(u, v):
        for e, sides in pairs.items():
            if set(sides) == {u, v}:
                return sides[u], sides[v]
        raise KeyError(f"no base edge {u}-{v}")

    seq = []
    u0, u1 = base_path[0], base_path[1]
    a, b = edge_servers(u0, u1)
    if first_server is None or first_server == a:
        seq.extend([a, b])
    else:
        seq.extend([first_server, sm.switch_of_base_node(u0), a, b])
    for u, v in zip(base_path[1:], base_path[2:]):
        a, b = edge_servers(u, v)
        seq.extend([sm.switch_of_base_node(u), a, b])
    if last_server is not None and last_server != seq[-1]:
        seq.extend([sm.switch_of_base_node(base_path[-1]), last_server])
    return seq


@dataclass
class GQStarMeta:
    """Routing tables for a stellar generalized hypercube.

    ``cross[x][dim * n + w]`` gives the server pair ``(a, b)`` realizing the
    dimension-``dim`` crossing from switch index ``x`` to value ``w`` (``a``
    attached at ``x``, ``b`` at the far end); undefined when ``w`` equals
    ``x``'s own coordinate.  Switch indices are base-node indices.
    """

    k: int
    n: int
    stellar: StellarMap
    coords: list  # per base node, coordinate tuple
    strides: list
    cross: list

    @property
    def link_dims(self):
        return self.stellar.link_dims


def build_gq_star(params: GQParams, max_nodes: int = 4_000_000) -> Topology:
    """Build GQ*: the stellar transform of ``GQ_{k,n}`` plus routing tables."""
    base = build_gq(params, max_nodes=max_nodes)
    topo, sm = stellar_transform(base, family=Family.GQ_STAR,
                                 name=f"gqstar_{params.k}_{params.n}",
                                 max_nodes=max_nodes)
    k, n = params.k, params.n
    strides = [n ** d for d in range(k)]

    cross = [[None] * (k * n) for _ in range(base.num_nodes)]
    link_dims = [-1] * len(topo.links)
    for e, (u, v) in enumerate(base.edges):
        cu, cv = base.labels[u], base.labels[v]
        dim = next(d for d in range(k) if cu[d] != cv[d])
        sa, sb = 2 * e, 2 * e + 1
        cross[u][dim * n + cv[dim]] = (sa, sb)
        cross[v][dim * n + cu[dim]] = (sb, sa)
        # links were appended as (sa,sb), (sa,switch u), (sb,switch v)
        link_dims[3 * e] = dim
        link_dims[3 * e + 1] = dim
        link_dims[3 * e + 2] = dim
    sm.link_dims = link_dims

    topo.params = {"k": k, "n": n}
    topo.meta = GQStarMeta(k=k, n=n, stellar=sm, coords=base.labels,
                           strides=strides, cross=cross)
    return topo
