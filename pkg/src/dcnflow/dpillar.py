"""DPillar construction.

``k`` server-columns alternate with ``k`` switch-columns around a cylinder.
Servers in column ``c`` are named by k-digit words over {0..n/2-1}; switches
in column ``c`` by (k-1)-digit words.  Server ``(c, u)`` attaches to switch
``(c, drop_c(u))`` on its clockwise side and ``(c-1 mod k, drop_{c-1}(u))``
on its anticlockwise side, so the ``n``-server group sharing a switch spans
the two adjacent server-columns.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapacityError
from .topology import Family, Topology

MAX_NODES = 4_000_000


@dataclass(frozen=True)
class DPillarParams:
    k: int
    n: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.n < 2 or self.n % 2:
            raise ValueError("n must be even and >= 2")


@dataclass
class DPillarMeta:
    k: int
    n: int
    m: int                 # n // 2, the digit radix
    servers_per_column: int

    @property
    def link_dims(self):
        return None

    def decode_server(self, s: int) -> tuple:
        """Return (column, digit tuple) of a server id."""
        c, rest = divmod(s, self.servers_per_column)
        digits = []
        for _ in range(self.k):
            rest, d = divmod(rest, self.m)
            digits.append(d)
        return c, tuple(digits)

    def encode_server(self, column: int, digits) -> int:
        word = 0
        for d in reversed(digits):
            word = word * self.m + d
        return column * self.servers_per_column + word

    def switch_index(self, column: int, digits, drop: int) -> int:
        """Switch id offset (before adding num_servers) for the switch in
        ``column`` adjacent to a server named ``digits`` via dropping the
        ``drop`` digit."""
        word = 0
        for j in reversed(range(self.k)):
            if j != drop:
                word = word * self.m + digits[j]
        return column * (self.servers_per_column // self.m) + word


def build_dpillar(params: DPillarParams, max_nodes: int = MAX_NODES) -> Topology:
    k, n = params.k, params.n
    m = n // 2
    per_col = m ** k
    num_servers = k * per_col
    num_switches = k * (per_col // m)
    if num_servers + num_switches > max_nodes:
        raise CapacityError(
            f"DPillar({k},{n}) has {num_servers + num_switches} nodes > cap {max_nodes}")

    meta = DPillarMeta(k=k, n=n, m=m, servers_per_column=per_col)
    links = []
    adjacency = [[] for _ in range(num_servers + num_switches)]

    def add_link(a: int, b: int):
        lid = len(links)
        links.append((a, b) if a < b else (b, a))
        adjacency[a].append((b, lid))
        adjacency[b].append((a, lid))

    labels = [None] * (num_servers + num_switches)
    for s in range(num_servers):
        c, digits = meta.decode_server(s)
        labels[s] = (c,) + digits
        right = num_servers + meta.switch_index(c, digits, c)
        left = num_servers + meta.switch_index((c - 1) % k, digits, (c - 1) % k)
        add_link(s, right)   # link id 2s
        add_link(s, left)    # link id 2s + 1
    for c in range(k):
        for g in range(per_col // m):
            sw = num_servers + c * (per_col // m) + g
            digits = []
            rest = g
            for _ in range(k - 1):
                rest, d = divmod(rest, m)
                digits.append(d)
            labels[sw] = (c,) + tuple(digits)

    return Topology(
        num_servers=num_servers,
        num_switches=num_switches,
        links=links,
        adjacency=adjacency,
        family=Family.DPILLAR,
        params={"k": k, "n": n},
        labels=labels,
        meta=meta,
        name=f"dpillar_{k}_{n}",
    )
