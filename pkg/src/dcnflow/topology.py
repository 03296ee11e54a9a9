"""Role-typed network graph: server-nodes, switch-nodes, and their links.

Nodes live in a single dense id space: servers are ``0 .. num_servers-1``,
switches are ``num_servers .. num_servers+num_switches-1``.  Links are stored
once as unordered pairs; metrics expand them into two directional channels
(channel ``2*e`` runs low-id -> high-id over link ``e``, channel ``2*e+1``
runs the other way).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence


class NodeKind(Enum):
    SERVER = "server"
    SWITCH = "switch"


class Family(Enum):
    GQ_STAR = "gqstar"
    FICONN = "ficonn"
    DPILLAR = "dpillar"
    GENERIC_STELLAR = "stellar"


@dataclass
class Topology:
    """Immutable role-typed graph.

    ``adjacency[u]`` is a list of ``(neighbor, link_id)`` pairs.  ``labels``
    holds per-node coordinate tuples where the family defines them.  ``meta``
    is the family-specific construction record (coordinate maps, level links,
    stellar pairing) consumed by the routing strategies.
    """

    num_servers: int
    num_switches: int
    links: list  # list[(u, v)] with u < v
    adjacency: list  # per-node list[(neighbor, link_id)]
    family: Family
    params: dict = field(default_factory=dict)
    labels: Optional[list] = None
    meta: object = None
    name: str = ""

    def __post_init__(self):
        if not self.name:
            self.name = self.family.value

    @property
    def num_nodes(self) -> int:
        return self.num_servers + self.num_switches

    @property
    def num_links(self) -> int:
        return len(self.links)

    @property
    def num_channels(self) -> int:
        return 2 * len(self.links)

    def is_server(self, node: int) -> bool:
        return node < self.num_servers

    def kind(self, node: int) -> NodeKind:
        return NodeKind.SERVER if node < self.num_servers else NodeKind.SWITCH

    def servers(self) -> range:
        return range(self.num_servers)

    def switches(self) -> range:
        return range(self.num_servers, self.num_nodes)

    def degree(self, node: int) -> int:
        return len(self.adjacency[node])

    def link_id(self, u: int, v: int) -> int:
        for nbr, lid in self.adjacency[u]:
            if nbr == v:
                return lid
        raise KeyError(f"no link {u}-{v}")

    def channel_id(self, src: int, dst: int) -> int:
        lid = self.link_id(src, dst)
        a, b = self.links[lid]
        return 2 * lid if (src, dst) == (a, b) else 2 * lid + 1

    def channel_endpoints(self, channel: int) -> tuple:
        a, b = self.links[channel // 2]
        return (a, b) if channel % 2 == 0 else (b, a)

    def validate(self):
        """Check the server-centric and dual-port structural invariants."""
        seen = set()
        for lid, (u, v) in enumerate(self.links):
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate link {key}")
            seen.add(key)
            if not self.is_server(u) and not self.is_server(v):
                raise ValueError(f"switch-switch link {u}-{v}")
        for s in self.servers():
            if not 1 <= self.degree(s) <= 2:
                raise ValueError(f"server {s} has degree {self.degree(s)}")

    def label_of(self, node: int):
        if self.labels is None:
            return None
        return self.labels[node]

    def export_csv(self, prefix: str):
        """Write ``<prefix>_nodes.csv`` and ``<prefix>_links.csv``."""
        with open(f"{prefix}_nodes.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["node_id", "kind", "label_tuple"])
            for node in range(self.num_nodes):
                label = self.label_of(node)
                w.writerow([node, self.kind(node).value,
                            "" if label is None else ":".join(map(str, label))])
        with open(f"{prefix}_links.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["link_src", "link_dst", "level_or_dimension"])
            dims = getattr(self.meta, "link_dims", None)
            for lid, (u, v) in enumerate(self.links):
                w.writerow([u, v, "" if dims is None else dims[lid]])


@dataclass
class Path:
    """A routed realization of a flow: the full node sequence, switches
    included.  ``hop_length`` counts server-nodes minus one."""

    nodes: list
    hop_length: int

    @classmethod
    def from_nodes(cls, topology: Topology, nodes: Sequence[int]) -> "Path":
        hops = sum(1 for v in nodes if topology.is_server(v)) - 1
        return cls(list(nodes), hops)

    def __len__(self):
        return len(self.nodes)


def check_path(topology: Topology, path: Path, failed_links: frozenset = frozenset(),
               src: int | None = None, dst: int | None = None):
    """Assert path validity: endpoints are servers, consecutive nodes are
    adjacent over live links, no node repeats, hop count is consistent."""
    nodes = path.nodes
    if not nodes:
        raise AssertionError("empty node sequence")
    if not (topology.is_server(nodes[0]) and topology.is_server(nodes[-1])):
        raise AssertionError("path endpoints must be servers")
    if src is not None and nodes[0] != src:
        raise AssertionError("path does not start at src")
    if dst is not None and nodes[-1] != dst:
        raise AssertionError("path does not end at dst")
    if len(set(nodes)) != len(nodes):
        raise AssertionError("path repeats a node")
    for a, b in zip(nodes, nodes[1:]):
        lid = topology.link_id(a, b)  # raises KeyError if not adjacent
        if lid in failed_links:
            raise AssertionError(f"path traverses failed link {a}-{b}")
    hops = sum(1 for v in nodes if topology.is_server(v)) - 1
    if hops != path.hop_length:
        raise AssertionError("hop_length inconsistent with node sequence")


@dataclass
class DistanceStats:
    """Aggregated distance/connectivity figures over ordered server pairs.

    ``connected_ordered_pairs`` includes self-pairs (trivially connected);
    the connectivity percentage divides by ``denominator`` (N^2 for a full
    sweep, sources*N for a sampled one).  Hop means exclude self-pairs and
    unreachable pairs.
    """

    mean_hop: float
    max_hop: int
    connected_ordered_pairs: int
    denominator: int

    @property
    def connectivity_pct(self) -> float:
        if self.denominator == 0:
            return 0.0
        return 100.0 * self.connected_ordered_pairs / self.denominator
