"""Exact all-to-all load tables without per-flow routing.

Fault-free all-to-all traffic under each family's deterministic router has
enough structure to count per-channel loads in closed form:

* GQ*: per-dimension value permutations commute with the router (crossings
  aim at coordinate values; try-order depends on dimensions only), so all
  channels of one (dimension, channel-type) class carry equal load.  Class
  totals come from enumerating difference-sets and endpoint-saving variants.
* FiConn: copies at the top level are internally identical and every copy
  consumes the same ordinals of its available servers, so one copy's
  intra-traffic, per-ordinal head segments (flows leaving through a level
  link) and tail segments (flows arriving) determine the whole table.
* DPillar: clockwise single-path routing is column-rotation and digit-
  permutation covariant, which makes every used channel carry the same
  load: the per-source total step count.

Each computation reproduces the streamed per-flow table exactly; the test
suite asserts byte-for-byte equality on small instances.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .metrics import LinkLoadTable
from .routing import ficonn_tor
from .topology import Family, Topology

_SRV_SW, _SW_SRV, _SRV_SRV = 0, 1, 2


def alltoall_table_gqstar(topology: Topology) -> LinkLoadTable:
    meta = topology.meta
    k, n = meta.k, meta.n
    nk = n ** k
    d_tot = k * (n - 1)
    N = topology.num_servers

    orbit = [[0, 0, 0] for _ in range(k)]  # exact integer totals
    hop_sum = 0
    hop_max = 0

    def add(dim: int, typ: int, amount: int):
        orbit[dim][typ] += amount

    def add_crossings(dims, weight: int):
        for i in dims:
            add(i, _SW_SRV, weight)
            add(i, _SRV_SRV, weight)
            add(i, _SRV_SW, weight)

    def saw(hops: int, weight: int):
        nonlocal hop_max
        if weight > 0 and hops > hop_max:
            hop_max = hops

    # same-switch pairs: src -> switch -> dst
    for d1 in range(k):
        for d2 in range(k):
            pairs = (n - 1) * (n - 1) - ((n - 1) if d1 == d2 else 0)
            add(d1, _SRV_SW, nk * pairs)
            add(d2, _SW_SRV, nk * pairs)
            hop_sum += nk * pairs
            saw(1, pairs)

    # switch pairs grouped by the set of differing dimensions
    for h in range(1, k + 1):
        for D in combinations(range(k), h):
            W = nk * (n - 1) ** h  # ordered switch pairs in this class
            Dset = set(D)
            g = [(n - 1) - (1 if d in Dset else 0) for d in range(k)]
            gen = d_tot - h

            # generic entry/exit: all crossings, no savings
            for d1 in range(k):
                add(d1, _SRV_SW, W * g[d1] * gen)
            for d2 in range(k):
                add(d2, _SW_SRV, W * gen * g[d2])
            add_crossings(D, W * gen * gen)
            hop_sum += W * gen * gen * (2 * h + 1)
            saw(2 * h + 1, gen * gen)

            for e in D:
                rest = [d for d in D if d != e]
                # source-side saving crossing, generic exit
                add(e, _SRV_SRV, W * gen)
                add(e, _SRV_SW, W * gen)
                add_crossings(rest, W * gen)
                for d2 in range(k):
                    add(d2, _SW_SRV, W * g[d2])
                hop_sum += W * gen * 2 * h
                saw(2 * h, gen)

                # generic entry, destination-side saving crossing
                for d1 in range(k):
                    add(d1, _SRV_SW, W * g[d1])
                add_crossings(rest, W * gen)
                add(e, _SW_SRV, W * gen)
                add(e, _SRV_SRV, W * gen)
                hop_sum += W * gen * 2 * h

                # both endpoints save on the same dimension: the source-side
                # saving wins; at h == 1 the two servers are partners
                if h == 1:
                    add(e, _SRV_SRV, W)
                    hop_sum += W
                    saw(1, W)
                else:
                    add(e, _SRV_SRV, W)
                    add(e, _SRV_SW, W)
                    add_crossings(rest, W)
                    add(e, _SW_SRV, W)
                    hop_sum += W * 2 * h
                    saw(2 * h, W)

                # both endpoints save on different dimensions
                for x in D:
                    if x == e:
                        continue
                    mid = [d for d in D if d != e and d != x]
                    add(e, _SRV_SRV, W)
                    add(e, _SRV_SW, W)
                    add_crossings(mid, W)
                    add(x, _SW_SRV, W)
                    add(x, _SRV_SRV, W)
                    hop_sum += W * (2 * h - 1)
                    saw(2 * h - 1, W)

    orbit_size = nk * (n - 1)  # channels per (dimension, type) class
    per_channel = [[0, 0, 0] for _ in range(k)]
    for d in range(k):
        for typ in range(3):
            total = orbit[d][typ]
            if total % orbit_size:
                raise AssertionError("orbit total not divisible by orbit size")
            per_channel[d][typ] = total // orbit_size

    table = LinkLoadTable(topology)
    dims = meta.stellar.link_dims
    ns = topology.num_servers
    counts = table.counts
    for lid, (u, v) in enumerate(topology.links):
        d = dims[lid]
        if v < ns:  # server-server link
            counts[2 * lid] = per_channel[d][_SRV_SRV]
            counts[2 * lid + 1] = per_channel[d][_SRV_SRV]
        else:
            counts[2 * lid] = per_channel[d][_SRV_SW]
            counts[2 * lid + 1] = per_channel[d][_SW_SRV]
    table.routed_flows = N * (N - 1)
    table.hop_sum = int(hop_sum)
    table.hop_max = hop_max
    return table


def alltoall_table_ficonn(topology: Topology) -> LinkLoadTable:
    meta = topology.meta
    k = meta.k
    N = topology.num_servers
    table = LinkLoadTable(topology)

    if k == 0:
        # one switch: every ordered pair routes across it
        for s in range(N):
            table.counts[2 * s] = N - 1      # server -> switch
            table.counts[2 * s + 1] = N - 1  # switch -> server
        table.routed_flows = N * (N - 1)
        table.hop_sum = N * (N - 1)
        table.hop_max = 1
        return table

    C = meta.copies[k]
    M = meta.sizes[k - 1]
    nchan = topology.num_channels
    idx = table.channel_index()
    ns = topology.num_servers
    n = meta.n

    partial = np.zeros(nchan, dtype=np.int64)
    intra_hops = 0
    intra_max = 0

    def record(arr, nodes, weight=1):
        for pair in zip(nodes, nodes[1:]):
            arr[idx[pair]] += weight
        return sum(1 for x in nodes if x < ns) - 1

    for s in range(M):
        for t in range(M):
            if s == t:
                continue
            hops = record(partial, ficonn_tor(topology, s, t))
            intra_hops += hops
            if hops > intra_max:
                intra_max = hops

    # head/tail aggregates per outgoing level link of copy 0
    head_hop_sum = {}
    tail_hop_sum = {}
    head_hop_max = {}
    tail_hop_max = {}
    endpoints = {}
    for j in range(1, C):
        a, _b = meta.level_links[k][(0, 0, j)]
        endpoints[j] = a
        hs = hm = ts = tm = 0
        for s in range(M):
            hops = record(partial, ficonn_tor(topology, s, a), weight=M)
            hs += hops
            hm = max(hm, hops)
        for t in range(M):
            hops = record(partial, ficonn_tor(topology, a, t), weight=M)
            ts += hops
            tm = max(tm, hops)
        head_hop_sum[j], head_hop_max[j] = hs, hm
        tail_hop_sum[j], tail_hop_max[j] = ts, tm

    # replicate the per-copy pattern into every copy
    counts = table.counts
    switch_shift_unit = M // n
    for ch in np.nonzero(partial)[0]:
        val = int(partial[ch])
        lid, rev = divmod(int(ch), 2)
        u, v = topology.links[lid]
        if rev:
            u, v = v, u
        for c in range(C):
            tu = u + c * M if u < ns else u + c * switch_shift_unit
            tv = v + c * M if v < ns else v + c * switch_shift_unit
            counts[idx[(tu, tv)]] += val

    # top-level links carry the full copy-to-copy demand
    for i in range(C):
        for j in range(i + 1, C):
            x, y = meta.level_links[k][(0, i, j)]
            counts[idx[(x, y)]] += M * M
            counts[idx[(y, x)]] += M * M

    table.routed_flows = N * (N - 1)
    hop_sum = C * intra_hops
    hop_sum += C * M * sum(head_hop_sum.values())
    hop_sum += C * M * sum(tail_hop_sum.values())
    hop_sum += C * (C - 1) * M * M  # the level link hop of each cross flow
    table.hop_sum = hop_sum

    hop_max = intra_max
    for i in range(C):
        for j in range(C):
            if i == j:
                continue
            # ordinal of copy i's link to j matches copy 0's link to j'
            jp = (j if j < i else j - 1) + 1
            ip = (i if i < j else i - 1) + 1
            cand = head_hop_max[jp] + 1 + tail_hop_max[ip]
            if cand > hop_max:
                hop_max = cand
    table.hop_max = hop_max
    return table


def dpillar_per_source_steps(k: int, m: int) -> int:
    """Total clockwise steps from one server to all others."""
    total = 0
    for delta in range(k):
        for span in range(k + 1):
            cnt = 1 if span == 0 else (m - 1) * m ** (span - 1)
            steps = delta if span <= delta else delta + k
            total += cnt * steps
    return total


def alltoall_table_dpillar(topology: Topology) -> LinkLoadTable:
    meta = topology.meta
    N = topology.num_servers
    per_source = dpillar_per_source_steps(meta.k, meta.m)
    table = LinkLoadTable(topology)
    counts = table.counts
    for s in range(N):
        counts[2 * (2 * s)] = per_source          # server -> right switch
        counts[2 * (2 * s + 1) + 1] = per_source  # left switch -> server
    table.routed_flows = N * (N - 1)
    table.hop_sum = N * per_source
    table.hop_max = 2 * meta.k - 1
    return table


_EXACT = {
    (Family.GQ_STAR, "gq-star"): alltoall_table_gqstar,
    (Family.GQ_STAR, "gq-dimension-order"): alltoall_table_gqstar,
    (Family.FICONN, "ficonn-tor"): alltoall_table_ficonn,
    (Family.DPILLAR, "dpillar-sp"): alltoall_table_dpillar,
}


def exact_alltoall_table(topology: Topology, router: str):
    """Aggregated fault-free all-to-all table, or ``None`` when no exact
    computation applies to this (family, router) combination."""
    fn = _EXACT.get((topology.family, router))
    return fn(topology) if fn else None
