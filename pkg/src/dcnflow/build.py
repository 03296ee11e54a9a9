"""Topology construction from CLI-style spec strings."""

from __future__ import annotations

from .basegraph import GQParams, load_base_graph
from .dpillar import DPillarParams, build_dpillar
from .ficonn import FiConnParams, build_ficonn
from .stellar import build_gq_star, stellar_transform
from .topology import Topology

SPEC_HELP = ("topology spec: gqstar:K:N | ficonn:K:N | dpillar:K:N | "
             "stellar:EDGE_LIST_FILE")


def build_topology(spec: str, max_nodes: int = 4_000_000) -> Topology:
    parts = spec.split(":", 1)
    kind = parts[0]
    if kind == "stellar":
        if len(parts) != 2:
            raise ValueError("stellar spec needs an edge-list path")
        base = load_base_graph(parts[1])
        topo, _ = stellar_transform(base, max_nodes=max_nodes)
        topo.name = f"stellar_{parts[1].rsplit('/', 1)[-1]}"
        return topo
    try:
        kind, k_s, n_s = spec.split(":")
        k, n = int(k_s), int(n_s)
    except ValueError:
        raise ValueError(f"bad topology spec {spec!r}; {SPEC_HELP}") from None
    if kind == "gqstar":
        return build_gq_star(GQParams(k, n), max_nodes=max_nodes)
    if kind == "ficonn":
        return build_ficonn(FiConnParams(k, n), max_nodes=max_nodes)
    if kind == "dpillar":
        return build_dpillar(DPillarParams(k, n), max_nodes=max_nodes)
    raise ValueError(f"unknown topology family {kind!r}; {SPEC_HELP}")
