"""Routing strategies.

All routers return the full node sequence of a path (switches included) or a
:class:`RouteFailure`.  They are pure in ``(topology, faults, src, dst,
policy)``; randomness enters only through the retry policy's seed, so
identical inputs give identical outcomes.

GQ* routing works on the attachment switches' coordinates.  A *crossing* of
dimension ``i`` moves switch -> server -> server -> switch to the switch
whose ``i``-th coordinate is the target value.  Crossings that happen to run
over the source's or destination's own edge drop the redundant switch visits,
so the fault-free route is a shortest path; the dimension try-order places
such a saving crossing first (source side) or last (destination side) and is
ascending in between.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import IncompatibleRouterError, RoutingDomainError
from .faults import FaultSet, failed_links
from .topology import Family, Path, Topology

_MASK = (1 << 64) - 1


def mix64(seed: int, index: int) -> int:
    """Stable 64-bit mixing of a global seed with a flow index."""
    x = (seed ^ (index * 0x9E3779B97F4A7C15)) & _MASK
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class SplitMix:
    """Tiny deterministic generator used for retry intermediates."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return (z ^ (z >> 31)) & _MASK


class FailureReason(Enum):
    NO_ROUTE_FOUND = "NoRouteFound"
    ATTACHMENT_FAULT = "AttachmentFault"
    GAVE_UP_AFTER_RETRIES = "GaveUpAfterRetries"


@dataclass(frozen=True)
class RouteFailure:
    reason: FailureReason


@dataclass(frozen=True)
class RetryPolicy:
    """Knobs of the fault-tolerant searches.

    ``crossing_budget`` caps attempted dimension crossings per direct search
    (``None`` means ``8 * k * n``); the same budget bounds DPillar's
    fault-avoiding DFS expansions.
    """

    max_random_intermediates: int = 4
    crossing_budget: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.max_random_intermediates < 0:
            raise ValueError("max_random_intermediates must be >= 0")


DEFAULT_POLICY = RetryPolicy()


def strip_loops(nodes: list) -> list:
    """Drop cycles, keeping the first occurrence of each repeated node."""
    out = []
    pos = {}
    for v in nodes:
        if v in pos:
            del_from = pos[v] + 1
            for w in out[del_from:]:
                del pos[w]
            del out[del_from:]
        else:
            pos[v] = len(out)
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# GQ* routing

def _gq_tables(topology: Topology):
    meta = topology.meta
    if topology.family is not Family.GQ_STAR:
        raise RoutingDomainError(f"{topology.name} is not a GQ* topology")
    return meta


def _edge_dim(meta, server: int) -> int:
    return meta.stellar.link_dims[3 * (server // 2)]


def _srv_switch_lid(server: int) -> int:
    # stellar link layout per base edge e: 3e = server pair, 3e+1 / 3e+2 =
    # the even / odd server's switch link
    return 3 * (server // 2) + 1 + (server & 1)


def _srv_pair_lid(server: int) -> int:
    return 3 * (server // 2)


def gq_crossing_order(diff: list, entry_dim: int | None, exit_dim: int | None) -> list:
    order = [d for d in diff if d != entry_dim and d != exit_dim]
    if entry_dim is not None:
        order.insert(0, entry_dim)
    if exit_dim is not None:
        order.append(exit_dim)
    return order


def gq_plan(topology: Topology, s: int, t: int):
    """Fault-free route plan: (entry_save, exit_save, crossing order).

    Entry save: the first crossing runs over ``s``'s own edge (one hop to the
    partner) whenever the partner's coordinate already matches the target.
    Exit save: the last crossing runs over ``t``'s own edge, entering ``t``
    directly.  When both would use the same dimension the entry side wins.
    """
    meta = _gq_tables(topology)
    ns = topology.num_servers
    stellar = meta.stellar
    U = stellar.attach[s] - ns
    V = stellar.attach[t] - ns
    Uc, Vc = meta.coords[U], meta.coords[V]
    diff = [d for d in range(meta.k) if Uc[d] != Vc[d]]
    j_s = _edge_dim(meta, s)
    w_s = meta.coords[stellar.attach[stellar.partner[s]] - ns][j_s]
    j_t = _edge_dim(meta, t)
    w_t = meta.coords[stellar.attach[stellar.partner[t]] - ns][j_t]
    entry = j_s if Vc[j_s] == w_s else None
    exit_ = j_t if Uc[j_t] == w_t else None
    if entry is not None and exit_ is not None and j_s == j_t:
        exit_ = None
    return entry, exit_, gq_crossing_order(diff, entry, exit_)


def gq_dimension_order(topology: Topology, s: int, t: int) -> list:
    """Shortest-path dimension-order route on a fault-free GQ*."""
    meta = _gq_tables(topology)
    if s == t:
        return [s]
    ns = topology.num_servers
    stellar = meta.stellar
    if t == stellar.partner[s]:
        return [s, t]
    U = stellar.attach[s] - ns
    V = stellar.attach[t] - ns
    if U == V:
        return [s, ns + U, t]
    _, _, order = gq_plan(topology, s, t)
    n = meta.n
    Vc = meta.coords[V]
    nodes = [s]
    cur = U
    for d in order:
        a, b = meta.cross[cur][d * n + Vc[d]]
        if a == nodes[-1]:
            nodes.append(b)
        else:
            nodes.extend((ns + cur, a, b))
        cur = stellar.attach[b] - ns
    if nodes[-1] != t:
        nodes.extend((ns + V, t))
    return nodes


def _gq_direct(topology: Topology, dead: frozenset, s: int, t: int,
               budget: list) -> Optional[list]:
    """Direct depth-first search over dimension orderings with
    intra-dimensional proxies.  Returns a node sequence or ``None``."""
    meta = topology.meta
    ns = topology.num_servers
    stellar = meta.stellar
    n, k = meta.n, meta.k
    coords = meta.coords
    cross = meta.cross
    attach = stellar.attach
    partner = stellar.partner

    if s == t:
        return [s]
    p_s = partner[s]
    if t == p_s and _srv_pair_lid(s) not in dead:
        return [s, t]

    U = attach[s] - ns
    q_t = partner[t]
    V = attach[t] - ns
    Vp = attach[q_t] - ns

    # entry alternatives: own switch, or the partner's switch
    entries = []
    own_ok = _srv_switch_lid(s) not in dead
    via_partner_ok = (p_s != t and _srv_pair_lid(s) not in dead
                      and _srv_switch_lid(p_s) not in dead)
    j_s = _edge_dim(meta, s)
    w_s = coords[attach[p_s] - ns][j_s]
    entry_saves = coords[V][j_s] == w_s
    if via_partner_ok:
        entries.append(([s, p_s], attach[p_s] - ns))
    if own_ok:
        pos = 0 if not entry_saves else len(entries)
        entries.insert(pos, ([s], U))
    if not entries:
        return None

    # exit alternatives: finish over t's switch, or over the partner's
    exits = []
    if _srv_switch_lid(t) not in dead:
        exits.append((V, ()))
    if (_srv_pair_lid(t) not in dead and _srv_switch_lid(q_t) not in dead
            and q_t != s):
        exits.append((Vp, (q_t, t)))
    if not exits:
        return None

    j_t = _edge_dim(meta, t)
    w_t = coords[Vp][j_t]

    def dfs(cur: int, remaining: tuple, nodes: list, visited: set,
            target, defer: int | None, suffix: tuple) -> bool:
        if not remaining:
            # attach the suffix: (switch, t) or (switch, q_t, t)
            sw = ns + cur
            if sw in visited:
                return False
            last = nodes[-1]
            if _srv_switch_lid(last) in dead:
                return False
            tail = (sw,) + suffix if suffix else (sw, t)
            # check server links along the tail
            prev = sw
            for node in tail[1:]:
                if node in visited:
                    return False
                lid = (_srv_switch_lid(node) if prev == sw
                       else _srv_pair_lid(node))
                if lid in dead:
                    return False
                prev = node
            nodes.extend(tail)
            visited.update(tail)
            return True

        order = sorted(remaining)
        if defer is not None and defer in remaining and len(remaining) > 1:
            order.remove(defer)
            order.append(defer)

        # direct crossings in every dimension before any proxy detour: a
        # blocked dimension is usually crossable for free from a different
        # locality, so the two extra proxy hops are a last resort per level
        for d in order:
            tv = target[d]
            rest = tuple(x for x in remaining if x != d)
            if budget[0] <= 0:
                return False
            budget[0] -= 1
            if _try_cross(cur, d, tv, nodes, visited):
                newcur = attach[nodes[-1]] - ns
                if nodes[-1] == t:
                    return True
                if dfs(newcur, rest, nodes, visited, target, defer, suffix):
                    return True
                _undo(nodes, visited)
        for d in order:
            tv = target[d]
            rest = tuple(x for x in remaining if x != d)
            cd = coords[cur][d]
            for w2 in range(n):
                if w2 == cd or w2 == tv:
                    continue
                if budget[0] <= 0:
                    return False
                budget[0] -= 1
                if not _try_cross(cur, d, w2, nodes, visited):
                    continue
                if nodes[-1] == t:
                    return True
                mid = attach[nodes[-1]] - ns
                if _try_cross(mid, d, tv, nodes, visited):
                    if nodes[-1] == t:
                        return True
                    newcur = attach[nodes[-1]] - ns
                    if dfs(newcur, rest, nodes, visited, target, defer, suffix):
                        return True
                    _undo(nodes, visited)
                _undo(nodes, visited)
        return False

    marks = []

    def _try_cross(cur: int, d: int, val: int, nodes: list, visited: set) -> bool:
        a, b = cross[cur][d * n + val]
        last = nodes[-1]
        if a == last:
            if _srv_pair_lid(a) in dead or b in visited:
                return False
            nodes.append(b)
            visited.add(b)
            marks.append(1)
            return True
        sw = ns + cur
        if sw in visited or a in visited:
            return False
        if _srv_switch_lid(last) in dead or _srv_switch_lid(a) in dead:
            return False
        if a == t:
            nodes.extend((sw, a))
            visited.update((sw, a))
            marks.append(2)
            return True
        if _srv_pair_lid(a) in dead or b in visited:
            return False
        nodes.extend((sw, a, b))
        visited.update((sw, a, b))
        marks.append(3)
        return True

    def _undo(nodes: list, visited: set):
        for _ in range(marks.pop()):
            visited.discard(nodes.pop())

    for prefix, start in entries:
        for target_idx, suffix in exits:
            target = coords[target_idx]
            start_c = coords[start]
            remaining = tuple(d for d in range(k) if start_c[d] != target[d])
            defer = j_t if (not suffix and target[j_t] != start_c[j_t]
                            and w_t == start_c[j_t]) else None
            nodes = list(prefix)
            visited = set(prefix)
            marks.clear()
            if nodes[-1] == t:
                return nodes
            if dfs(start, remaining, nodes, visited, target, defer, suffix):
                return nodes
    return None


def gq_star_route(topology: Topology, faults: FaultSet | None, s: int, t: int,
                  policy: RetryPolicy = DEFAULT_POLICY):
    """Fault-tolerant GQ* routing: direct DFS first, then up to
    ``max_random_intermediates`` seeded two-leg attempts."""
    meta = _gq_tables(topology)
    dead = failed_links(faults)
    if s == t:
        return [s]

    stellar = meta.stellar
    # endpoint attachment feasibility
    def reachable(x: int) -> bool:
        if _srv_switch_lid(x) not in dead:
            return True
        p = stellar.partner[x]
        return (_srv_pair_lid(x) not in dead
                and _srv_switch_lid(p) not in dead)

    if t == stellar.partner[s] and _srv_pair_lid(s) not in dead:
        return [s, t]
    if not reachable(s) or not reachable(t):
        return RouteFailure(FailureReason.ATTACHMENT_FAULT)

    def fresh_budget() -> list:
        cap = policy.crossing_budget
        return [cap if cap is not None else 8 * meta.k * meta.n]

    nodes = _gq_direct(topology, dead, s, t, fresh_budget())
    if nodes is not None:
        return nodes

    rng = SplitMix(policy.seed)
    ns_servers = topology.num_servers
    for _ in range(policy.max_random_intermediates):
        r = rng.next() % ns_servers
        if r == s or r == t:
            continue
        leg1 = _gq_direct(topology, dead, s, r, fresh_budget())
        if leg1 is None:
            continue
        leg2 = _gq_direct(topology, dead, r, t, fresh_budget())
        if leg2 is None:
            continue
        combined = strip_loops(leg1 + leg2[1:])
        if combined[-1] == t:
            return combined
    if policy.max_random_intermediates > 0:
        return RouteFailure(FailureReason.GAVE_UP_AFTER_RETRIES)
    return RouteFailure(FailureReason.NO_ROUTE_FOUND)


# ---------------------------------------------------------------------------
# FiConn TOR

def ficonn_tor(topology: Topology, s: int, t: int) -> list:
    """Traffic-oblivious routing: recurse through the unique level link
    joining the lowest-level copies that separate the endpoints."""
    if topology.family is not Family.FICONN:
        raise RoutingDomainError(f"{topology.name} is not a FiConn topology")
    meta = topology.meta
    ns = topology.num_servers
    n = meta.n
    sizes = meta.sizes
    copies = meta.copies
    level_links = meta.level_links

    def rec(a: int, b: int) -> list:
        if a == b:
            return [a]
        if a // n == b // n:
            return [a, ns + a // n, b]
        level = 1
        while a // sizes[level] != b // sizes[level]:
            level += 1
        block = a // sizes[level]
        ci = (a // sizes[level - 1]) % copies[level]
        cj = (b // sizes[level - 1]) % copies[level]
        x, y = level_links[level][(block, ci, cj)]
        head = rec(a, x)
        tail = rec(y, b)
        return head + tail

    return rec(s, t)


# ---------------------------------------------------------------------------
# DPillar routing

def dpillar_sp(topology: Topology, s: int, t: int) -> list:
    """Single-path clockwise routing: passing switch-column ``c`` rewrites
    name digit ``c`` to the destination's; once the name matches, continue
    name-preserving to the destination column."""
    if topology.family is not Family.DPILLAR:
        raise RoutingDomainError(f"{topology.name} is not a DPillar topology")
    meta = topology.meta
    if s == t:
        return [s]
    ns = topology.num_servers
    k = meta.k
    c, u = meta.decode_server(s)
    ct, v = meta.decode_server(t)
    w = list(u)
    nodes = [s]
    steps = 0
    while not (c == ct and tuple(w) == v):
        w[c] = v[c]
        sw = ns + meta.switch_index(c, w, c)
        c = (c + 1) % k
        nxt = meta.encode_server(c, w)
        nodes.extend((sw, nxt))
        steps += 1
        if steps > 2 * k:
            raise AssertionError("dpillar_sp exceeded its hop bound")
    return nodes


def dpillar_mp(topology: Topology, faults: FaultSet | None, s: int, t: int,
               policy: RetryPolicy = DEFAULT_POLICY):
    """Fault-avoiding DPillar search.

    Depth-first with a per-route visited set and TTL of ``4k`` hops; at each
    server the clockwise digit-fixing move is preferred (so the fault-free
    path coincides with ``dpillar_sp``), then the remaining group members
    through either adjacent switch in deterministic order.
    """
    if topology.family is not Family.DPILLAR:
        raise RoutingDomainError(f"{topology.name} is not a DPillar topology")
    meta = topology.meta
    if s == t:
        return [s]
    dead = failed_links(faults)
    ns = topology.num_servers
    k, m = meta.k, meta.m
    _, v = meta.decode_server(t)
    ttl = 4 * k
    cap = policy.crossing_budget
    budget = [cap if cap is not None else 8 * meta.k * meta.n]

    def link_of(server: int, side: int) -> int:
        # link ids were appended right (2s) then left (2s+1)
        return 2 * server + side

    def candidates(cur: int):
        c, w = meta.decode_server(cur)
        cn = (c + 1) % k
        cp = (c - 1) % k
        right_sw = ns + meta.switch_index(c, w, c)
        left_sw = ns + meta.switch_index(cp, w, cp)
        out = []
        wl = list(w)
        # clockwise: fix digit c first, then the other rewrites
        wl[c] = v[c]
        out.append((right_sw, meta.encode_server(cn, wl), 0))
        for i in range(m):
            if i == v[c]:
                continue
            wl[c] = i
            out.append((right_sw, meta.encode_server(cn, wl), 0))
        for i in range(m):
            if i == w[c]:
                continue
            wl[c] = i
            out.append((right_sw, meta.encode_server(c, wl), 0))
        wl[c] = w[c]
        # anticlockwise fallbacks through the left switch
        wl[cp] = v[cp]
        out.append((left_sw, meta.encode_server(cp, wl), 1))
        for i in range(m):
            if i == v[cp]:
                continue
            wl[cp] = i
            out.append((left_sw, meta.encode_server(cp, wl), 1))
        for i in range(m):
            if i == w[cp]:
                continue
            wl[cp] = i
            out.append((left_sw, meta.encode_server(c, wl), 1))
        return out

    nodes = [s]
    visited = {s}

    def dfs(cur: int, hops: int) -> bool:
        if hops >= ttl:
            return False
        if budget[0] <= 0:
            return False
        budget[0] -= 1
        for sw, nxt, side in candidates(cur):
            if nxt == cur or sw in visited or nxt in visited:
                continue
            if link_of(cur, side) in dead:
                continue
            # nxt attaches sw as its right switch when sw sits in nxt's own
            # column, as its left switch otherwise
            nc, _ = meta.decode_server(nxt)
            sw_col = (sw - ns) // (meta.servers_per_column // m)
            nxt_link = link_of(nxt, 0 if sw_col == nc else 1)
            if nxt_link in dead:
                continue
            nodes.extend((sw, nxt))
            visited.update((sw, nxt))
            if nxt == t:
                return True
            if dfs(nxt, hops + 1):
                return True
            visited.discard(nodes.pop())
            visited.discard(nodes.pop())
        return False

    if dfs(s, 0):
        return nodes
    return RouteFailure(FailureReason.NO_ROUTE_FOUND)


# ---------------------------------------------------------------------------
# dispatch

ROUTER_FAMILIES = {
    "bfs": None,  # any family
    "gq-dimension-order": Family.GQ_STAR,
    "gq-star": Family.GQ_STAR,
    "ficonn-tor": Family.FICONN,
    "dpillar-sp": Family.DPILLAR,
    "dpillar-mp": Family.DPILLAR,
}

FAULT_TOLERANT_ROUTERS = {"bfs", "gq-star", "dpillar-mp"}

DEFAULT_ROUTER = {
    Family.GQ_STAR: "gq-star",
    Family.FICONN: "ficonn-tor",
    Family.DPILLAR: "dpillar-sp",
    Family.GENERIC_STELLAR: "bfs",
}


def check_router(topology: Topology, name: str, faults: FaultSet | None = None):
    if name not in ROUTER_FAMILIES:
        raise IncompatibleRouterError(
            f"unknown router {name!r}; choose from {sorted(ROUTER_FAMILIES)}")
    fam = ROUTER_FAMILIES[name]
    if fam is not None and topology.family is not fam:
        raise IncompatibleRouterError(
            f"router {name!r} requires a {fam.value} topology, got {topology.family.value}")
    if faults is not None and len(faults.link_ids) and name not in FAULT_TOLERANT_ROUTERS:
        raise RoutingDomainError(f"router {name!r} does not tolerate faults")


def route_pair(topology: Topology, faults: FaultSet | None, name: str,
               s: int, t: int, policy: RetryPolicy = DEFAULT_POLICY):
    """Route one pair; returns a node list or ``None`` on failure.

    Unknown routers or family mismatches raise; callers validate once via
    :func:`check_router` before tight loops.
    """
    if not (0 <= s < topology.num_servers and 0 <= t < topology.num_servers):
        raise ValueError("src and dst must be server ids")
    if name == "bfs":
        from .bfs import bfs_route
        return bfs_route(topology, faults, s, t)
    if name == "gq-dimension-order":
        return gq_dimension_order(topology, s, t)
    if name == "gq-star":
        out = gq_star_route(topology, faults, s, t, policy)
        return out if not isinstance(out, RouteFailure) else None
    if name == "ficonn-tor":
        return ficonn_tor(topology, s, t)
    if name == "dpillar-sp":
        return dpillar_sp(topology, s, t)
    if name == "dpillar-mp":
        out = dpillar_mp(topology, faults, s, t, policy)
        return out if not isinstance(out, RouteFailure) else None
    raise IncompatibleRouterError(f"unknown router {name!r}")


def route(topology: Topology, faults: FaultSet | None, name: str,
          s: int, t: int, policy: RetryPolicy = DEFAULT_POLICY):
    """Public routing entry point returning ``Path`` or ``RouteFailure``."""
    check_router(topology, name, faults)
    if name == "gq-star":
        out = gq_star_route(topology, faults, s, t, policy)
    elif name == "dpillar-mp":
        out = dpillar_mp(topology, faults, s, t, policy)
    else:
        out = route_pair(topology, faults, name, s, t, policy)
        if out is None:
            out = RouteFailure(FailureReason.NO_ROUTE_FOUND)
    if isinstance(out, RouteFailure):
        return out
    return Path.from_nodes(topology, out)
