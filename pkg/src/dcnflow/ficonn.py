"""FiConn construction.

``FiConn(0, n)`` is ``n`` servers on one switch.  Level ``l`` takes
``b/2 + 1`` copies of level ``l-1`` (``b`` = current count of degree-1
servers) and gives every unordered pair of copies one level-``l``
server-server link.

Pairing scheme: within a copy the degree-1 ("available") servers are ordered
ascending by id; copy ``i``'s link to copy ``j`` consumes the available
server at ordinal ``2*j'`` where ``j' = j`` if ``j < i`` else ``j - 1``.
Even ordinals are consumed, odd ordinals stay available for the next level.
This is one member of the family of valid connection rules; counts and level
structure do not depend on the choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CapacityError
from .topology import Family, Topology

MAX_NODES = 4_000_000


@dataclass(frozen=True)
class FiConnParams:
    k: int
    n: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if self.n < 2 or self.n % 2:
            raise ValueError("n must be even and >= 2")


@dataclass
class FiConnMeta:
    k: int
    n: int
    sizes: list          # sizes[l] = servers in a FiConn_l
    copies: list         # copies[l] = copy count used at level l (index 1..k)
    level_links: dict    # level -> {(block, ci, cj): (a, b)} with a in copy ci
    link_levels: list    # per link id: 0 for server-switch, else link level

    @property
    def link_dims(self):
        return self.link_levels

    def switch_of(self, server: int, num_servers: int) -> int:
        return num_servers + server // self.n

    def degree1_count(self) -> int:
        return self.sizes[self.k] >> self.k


def ficonn_sizes(params: FiConnParams) -> list:
    """Server counts of FiConn_0 .. FiConn_k; available count b_l is
    sizes[l] / 2^l."""
    sizes = [params.n]
    for l in range(1, params.k + 1):
        b = sizes[-1] >> (l - 1)
        sizes.append(sizes[-1] * (b // 2 + 1))
    return sizes


def build_ficonn(params: FiConnParams, max_nodes: int = MAX_NODES) -> Topology:
    k, n = params.k, params.n
    sizes = ficonn_sizes(params)
    num_servers = sizes[k]
    num_switches = num_servers // n
    if num_servers + num_switches > max_nodes:
        raise CapacityError(
            f"FiConn({k},{n}) has {num_servers + num_switches} nodes > cap {max_nodes}")

    # Grow the structure level by level, replicating the accumulated
    # server-server links; server ids inside copy c shift by c * size.
    size = n
    avail = list(range(n))
    ss_links = []  # (u, v, level)
    copies = [0] * (k + 1)
    for l in range(1, k + 1):
        b = len(avail)
        ncopies = b // 2 + 1
        copies[l] = ncopies
        ss_links = [(u + c * size, v + c * size, lv)
                    for c in range(ncopies) for (u, v, lv) in ss_links]
        for i in range(ncopies):
            for j in range(i + 1, ncopies):
                a = i * size + avail[2 * (j - 1)]
                bb = j * size + avail[2 * i]
                ss_links.append((a, bb, l))
        avail = [c * size + x for c in range(ncopies) for x in avail[1::2]]
        size *= ncopies

    links = []
    adjacency = [[] for _ in range(num_servers + num_switches)]

    def add_link(a: int, b: int):
        lid = len(links)
        links.append((a, b) if a < b else (b, a))
        adjacency[a].append((b, lid))
        adjacency[b].append((a, lid))

    link_levels = []
    for s in range(num_servers):
        add_link(s, num_servers + s // n)
        link_levels.append(0)
    level_links: dict = {l: {} for l in range(1, k + 1)}
    for u, v, lv in ss_links:
        add_link(u, v)
        link_levels.append(lv)
        block = u // sizes[lv]
        ci = (u // sizes[lv - 1]) % copies[lv]
        cj = (v // sizes[lv - 1]) % copies[lv]
        level_links[lv][(block, ci, cj)] = (u, v)
        level_links[lv][(block, cj, ci)] = (v, u)

    meta = FiConnMeta(k=k, n=n, sizes=sizes, copies=copies,
                      level_links=level_links, link_levels=link_levels)
    return Topology(
        num_servers=num_servers,
        num_switches=num_switches,
        links=links,
        adjacency=adjacency,
        family=Family.FICONN,
        params={"k": k, "n": n},
        meta=meta,
        name=f"ficonn_{k}_{n}",
    )
