"""Base graphs that seed the stellar transformation.

A :class:`BaseGraph` is a plain undirected simple graph.  Generalized
hypercubes carry per-node coordinate labels; arbitrary graphs arrive as
edge-list text (one ``u v`` pair per line).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import CapacityError, EdgeListError

# Construction guard: stellar blow-up of a graph this size is ~3x nodes+edges.
MAX_BASE_NODES = 4_000_000


@dataclass
class BaseGraph:
    num_nodes: int
    edges: list  # list[(u, v)] with u < v, sorted, unique
    labels: Optional[list] = None  # per-node coordinate tuples

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list:
        adj = [[] for _ in range(self.num_nodes)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degrees(self) -> list:
        deg = [0] * self.num_nodes
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_connected(self) -> bool:
        if self.num_nodes == 0:
            return False
        adj = self.adjacency()
        seen = [False] * self.num_nodes
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    stack.append(v)
        return count == self.num_nodes

    def diameter(self) -> int:
        """Exact diameter by BFS from every node (test-scale graphs only)."""
        adj = self.adjacency()
        best = 0
        for src in range(self.num_nodes):
            dist = [-1] * self.num_nodes
            dist[src] = 0
            frontier = [src]
            while frontier:
                nxt = []
                for u in frontier:
                    for v in adj[u]:
                        if dist[v] < 0:
                            dist[v] = dist[u] + 1
                            nxt.append(v)
                frontier = nxt
            far = max(dist)
            if far < 0:
                raise ValueError("graph is disconnected")
            best = max(best, far)
        return best


@dataclass(frozen=True)
class GQParams:
    """Generalized hypercube parameters: ``k`` dimensions of radix ``n``."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.n < 2:
            raise ValueError("n must be >= 2")

    @property
    def num_nodes(self) -> int:
        return self.n ** self.k

    @property
    def degree(self) -> int:
        return self.k * (self.n - 1)

    @property
    def num_edges(self) -> int:
        return self.degree * self.num_nodes // 2


# 48-port switch sizings: (k, n) choices that consume all ports, kept as
# documented presets rather than derivation logic.
GQ_48_PORT_PRESETS = (GQParams(2, 25), GQParams(3, 17), GQParams(4, 13))


def build_gq(params: GQParams, max_nodes: int = MAX_BASE_NODES) -> BaseGraph:
    """Build the generalized hypercube: nodes are k-tuples over {0..n-1},
    joined whenever they differ in exactly one coordinate."""
    k, n = params.k, params.n
    total = params.num_nodes
    if total > max_nodes:
        raise CapacityError(f"GQ({k},{n}) has {total} nodes > cap {max_nodes}")

    # Node index is the little-endian base-n encoding of its coordinates.
    labels = []
    coords = [0] * k
    for _ in range(total):
        labels.append(tuple(coords))
        for d in range(k):
            coords[d] += 1
            if coords[d] < n:
                break
            coords[d] = 0

    stride = [n ** d for d in range(k)]
    edges = []
    for u in range(total):
        lab = labels[u]
        for d in range(k):
            base = u - lab[d] * stride[d]
            for w in range(lab[d] + 1, n):
                edges.append((u, base + w * stride[d]))
    return BaseGraph(total, edges, labels=labels)


def parse_edge_list(text: str) -> BaseGraph:
    """Parse ``u v`` lines into a simple undirected graph.

    Rejects self-loops and duplicate edges, reporting the line number.
    Blank lines and ``#`` comments are skipped.
    """
    edges = []
    seen = set()
    max_node = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"expected two fields, got {len(parts)}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"non-integer endpoint in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise EdgeListError("negative node id", lineno)
        if u == v:
            raise EdgeListError(f"self-loop at node {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListError(f"duplicate edge {key}", lineno)
        seen.add(key)
        edges.append(key)
        max_node = max(max_node, u, v)
    if not edges:
        raise EdgeListError("no edges in input")
    edges.sort()
    return BaseGraph(max_node + 1, edges)


def load_base_graph(path: str) -> BaseGraph:
    with open(path) as fh:
        return parse_edge_list(fh.read())
