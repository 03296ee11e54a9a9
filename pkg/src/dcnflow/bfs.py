"""Breadth-first search under the server-hop metric.

A hop is a move onto the next server, whether over a direct server-server
link or through a switch; switches never add hops.  BFS runs over the full
node set but reports server distances only, and serves as the shortest-path
and connectivity oracle for every routing strategy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .faults import FaultSet, failed_links
from .topology import DistanceStats, Topology


def bfs_tree(topology: Topology, src: int, faults: FaultSet | None = None) -> list:
    """Hop distances from ``src`` to every server (-1 when unreachable)."""
    if not (0 <= src < topology.num_servers):
        raise ValueError(f"source {src} is not a server")
    dead = failed_links(faults)
    adj = topology.adjacency
    ns = topology.num_servers
    dist = [-1] * ns
    seen_switch = [False] * topology.num_switches
    dist[src] = 0
    frontier = [src]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v, lid in adj[u]:
                if lid in dead:
                    continue
                if v < ns:
                    if dist[v] < 0:
                        dist[v] = d
                        nxt.append(v)
                elif not seen_switch[v - ns]:
                    seen_switch[v - ns] = True
                    for w, lid2 in adj[v]:
                        if lid2 not in dead and dist[w] < 0:
                            dist[w] = d
                            nxt.append(w)
        frontier = nxt
    return dist


def bfs_route(topology: Topology, faults: FaultSet | None, src: int, dst: int):
    """Shortest path between two servers, or ``None`` when disconnected.

    Returns the full node sequence including transited switches.
    """
    if src == dst:
        return [src]
    dead = failed_links(faults)
    adj = topology.adjacency
    ns = topology.num_servers
    parent = {src: -1}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for v, lid in adj[u]:
                if lid in dead or v in parent:
                    continue
                parent[v] = u
                if v == dst:
                    nodes = [v]
                    while nodes[-1] != src:
                        nodes.append(parent[nodes[-1]])
                    nodes.reverse()
                    return nodes
                if v < ns:
                    nxt.append(v)
                else:
                    for w, lid2 in adj[v]:
                        if lid2 in dead or w in parent:
                            continue
                        parent[w] = v
                        if w == dst:
                            nodes = [w]
                            while nodes[-1] != src:
                                nodes.append(parent[nodes[-1]])
                            nodes.reverse()
                            return nodes
                        nxt.append(w)
        frontier = nxt
    return None


@dataclass
class SweepAccumulator:
    """Associatively mergeable all-pairs aggregates."""

    hop_sum: int = 0
    hop_max: int = 0
    connected: int = 0        # ordered non-self pairs with a route
    pairs: int = 0            # ordered non-self pairs examined
    sources: int = 0

    def add_distances(self, dist: list, src: int):
        self.sources += 1
        hop_sum = 0
        hop_max = self.hop_max
        connected = 0
        for s, d in enumerate(dist):
            if s == src or d < 0:
                continue
            hop_sum += d
            connected += 1
            if d > hop_max:
                hop_max = d
        self.hop_sum += hop_sum
        self.hop_max = hop_max
        self.connected += connected
        self.pairs += len(dist) - 1

    def merge(self, other: "SweepAccumulator"):
        self.hop_sum += other.hop_sum
        self.hop_max = max(self.hop_max, other.hop_max)
        self.connected += other.connected
        self.pairs += other.pairs
        self.sources += other.sources

    def stats(self, num_servers: int) -> DistanceStats:
        mean = self.hop_sum / self.connected if self.connected else 0.0
        # self-pairs count as connected; denominator is sources * N
        return DistanceStats(
            mean_hop=mean,
            max_hop=self.hop_max,
            connected_ordered_pairs=self.connected + self.sources,
            denominator=self.sources * num_servers,
        )


def bfs_sweep(topology: Topology, faults: FaultSet | None = None,
              sources=None) -> SweepAccumulator:
    acc = SweepAccumulator()
    for src in (sources if sources is not None else topology.servers()):
        acc.add_distances(bfs_tree(topology, src, faults), src)
    return acc


def all_pairs_stats(topology: Topology, faults: FaultSet | None = None,
                    router=None, sources=None, policy=None) -> DistanceStats:
    """Distance and connectivity aggregates over ordered server pairs.

    ``router`` is ``None``/"bfs" for the BFS oracle, else a registered
    strategy name routed pair by pair (routing errors count the pair as
    unconnected).  ``sources`` restricts the sweep to a sample of sources.
    """
    if router is None or router == "bfs":
        return bfs_sweep(topology, faults, sources).stats(topology.num_servers)

    from .routing import RetryPolicy, check_router, route_pair

    check_router(topology, router, faults)
    policy = policy or RetryPolicy()
    acc = SweepAccumulator()
    srcs = sources if sources is not None else topology.servers()
    for src in srcs:
        acc.sources += 1
        for dst in topology.servers():
            if dst == src:
                continue
            acc.pairs += 1
            nodes = route_pair(topology, faults, router, src, dst, policy)
            if nodes is None:
                continue
            hops = sum(1 for v in nodes if v < topology.num_servers) - 1
            acc.hop_sum += hops
            acc.connected += 1
            if hops > acc.hop_max:
                acc.hop_max = hops
    return acc.stats(topology.num_servers)
