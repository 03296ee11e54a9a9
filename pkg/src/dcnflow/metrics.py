"""Per-channel flow accounting, throughput metrics, and the cost model.

Loads are kept per directional channel (two per unordered link, each of unit
bandwidth).  A server-switch-server hop contributes two channels, a direct
server-server hop one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .topology import Family, Topology


class LinkLoadTable:
    """Directional-channel flow counters plus routed/failed flow tallies."""

    def __init__(self, topology: Topology):
        self.topology = topology
        self.counts = np.zeros(topology.num_channels, dtype=np.int64)
        self.routed_flows = 0
        self.failed_flows = 0
        self.hop_sum = 0
        self.hop_max = 0
        self._channel_of = None

    def channel_index(self) -> dict:
        if self._channel_of is None:
            idx = {}
            for lid, (u, v) in enumerate(self.topology.links):
                idx[(u, v)] = 2 * lid
                idx[(v, u)] = 2 * lid + 1
            self._channel_of = idx
        return self._channel_of

    def record_flow(self, nodes: list):
        """Add one routed flow's path (full node sequence)."""
        idx = self.channel_index()
        counts = self.counts
        for pair in zip(nodes, nodes[1:]):
            counts[idx[pair]] += 1
        self.routed_flows += 1
        ns = self.topology.num_servers
        hops = sum(1 for v in nodes if v < ns) - 1
        self.hop_sum += hops
        if hops > self.hop_max:
            self.hop_max = hops

    def record_failure(self):
        self.failed_flows += 1

    def merge(self, other: "LinkLoadTable"):
        self.counts += other.counts
        self.routed_flows += other.routed_flows
        self.failed_flows += other.failed_flows
        self.hop_sum += other.hop_sum
        self.hop_max = max(self.hop_max, other.hop_max)

    def total(self) -> int:
        return int(self.counts.sum())

    def bottleneck(self) -> int:
        """Flow count on the most-loaded directional channel."""
        return int(self.counts.max()) if len(self.counts) else 0

    def used_channels(self) -> int:
        return int(np.count_nonzero(self.counts))

    def zero_channels(self) -> int:
        return len(self.counts) - self.used_channels()

    def mean_hop(self) -> float:
        return self.hop_sum / self.routed_flows if self.routed_flows else 0.0


def bottleneck(table: LinkLoadTable) -> int:
    return table.bottleneck()


def abt(num_servers: int, bottleneck_flows: int, bandwidth: float = 1.0) -> float:
    """Aggregate bottleneck throughput: N(N-1) * b / F."""
    if bottleneck_flows < 1:
        raise ValueError("ABT is undefined without flows (F >= 1 required)")
    return num_servers * (num_servers - 1) * bandwidth / bottleneck_flows


def idle_ports(topology: Topology) -> int:
    """Dual-port server slots left uncabled (degree-1 servers)."""
    return sum(1 for s in topology.servers() if topology.degree(s) == 1)


@dataclass
class LoadHistogram:
    """Channel-load distribution.

    ``bins`` maps bin lower bound -> channel count over all wired channels.
    ``zero_channels`` counts wired channels that carried no flow;
    ``idle_ports`` counts uncabled dual-port slots.  ``unused_total`` is
    their sum: the link slots absent from a loads-per-link plot.  Means are
    reported per wired channel, per used channel, and per port slot (wired
    channels plus idle ports).
    """

    bin_width: int
    bins: dict
    zero_channels: int
    idle_ports: int
    mean_all: float
    mean_used: float
    mean_slots: float

    @property
    def unused_total(self) -> int:
        return self.zero_channels + self.idle_ports


def histogram(table: LinkLoadTable, bin_width: int = 20_000) -> LoadHistogram:
    if bin_width < 1:
        raise ValueError("bin_width must be >= 1")
    counts = table.counts
    bins: dict = {}
    lows = (counts // bin_width) * bin_width
    vals, freqs = np.unique(lows, return_counts=True)
    for v, f in zip(vals.tolist(), freqs.tolist()):
        bins[int(v)] = int(f)
    total = table.total()
    nchan = len(counts)
    used = table.used_channels()
    idle = idle_ports(table.topology)
    return LoadHistogram(
        bin_width=bin_width,
        bins=bins,
        zero_channels=nchan - used,
        idle_ports=idle,
        mean_all=total / nchan if nchan else 0.0,
        mean_used=total / used if used else 0.0,
        mean_slots=total / (nchan + idle) if nchan + idle else 0.0,
    )


# ---------------------------------------------------------------------------
# Component cost model.  Server cost is the unit; rho is the switch-port/
# server cost ratio and gamma the cable/server ratio.  Per-server figures:
#   GQ*        rho + gamma + 1 + gamma/2
#   FiConn_k   rho + gamma + 1 + gamma/2 - gamma/2^(k+1)
#   DPillar    2*(rho + gamma) + 1

def cost_per_server(family: Family, rho: float, gamma: float,
                    k: int | None = None, normalize: bool = False) -> float:
    gq = rho + gamma + 1 + gamma / 2
    if family is Family.GQ_STAR or family is Family.GENERIC_STELLAR:
        cost = gq
    elif family is Family.FICONN:
        if k is None:
            raise ValueError("FiConn cost needs the level k")
        cost = gq - gamma / 2 ** (k + 1)
    elif family is Family.DPILLAR:
        cost = 2 * (rho + gamma) + 1
    else:
        raise ValueError(f"no cost model for {family}")
    return cost / gq if normalize else cost


def cost_table(rhos, gammas, ficonn_k: int = 2):
    """Rows of (family, k, rho, gamma, cost_norm) over a parameter grid."""
    rows = []
    for rho in rhos:
        for gamma in gammas:
            for family, k in ((Family.GQ_STAR, None), (Family.FICONN, ficonn_k),
                              (Family.DPILLAR, None)):
                rows.append((family.value, k if k is not None else "",
                             rho, gamma,
                             cost_per_server(family, rho, gamma, k=k, normalize=True)))
    return rows
