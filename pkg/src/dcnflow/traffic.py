"""Workload generators.

Every pattern is a deterministic, index-addressable flow stream: flow ``i``
is computable without generating flows ``0..i-1``, so disjoint index ranges
can be consumed in parallel with results identical to a serial run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .routing import SplitMix, mix64


class Pattern:
    name = "pattern"

    def count(self, num_servers: int) -> int:
        raise NotImplementedError

    def flow(self, num_servers: int, index: int) -> tuple:
        raise NotImplementedError

    def flows(self, num_servers: int, lo: int = 0, hi: int | None = None):
        hi = self.count(num_servers) if hi is None else hi
        for i in range(lo, hi):
            yield self.flow(num_servers, i)


@dataclass
class AllToAll(Pattern):
    """All N(N-1) ordered pairs, ascending in (src, dst)."""

    name = "all2all"

    def count(self, n: int) -> int:
        return n * (n - 1)

    def flow(self, n: int, i: int) -> tuple:
        src, rem = divmod(i, n - 1)
        dst = rem if rem < src else rem + 1
        return src, dst


@dataclass
class ManyAllToAll(Pattern):
    """Disjoint seeded groups, all-to-all inside each; servers beyond the
    last full group stay idle."""

    group_size: int
    seed: int = 0

    def __post_init__(self):
        self.name = f"many:{self.group_size}:{self.seed}"
        self._cache = {}

    def _members(self, n: int) -> list:
        if n not in self._cache:
            if self.group_size > n:
                raise ValueError(f"group size {self.group_size} exceeds {n} servers")
            perm = list(range(n))
            random.Random(self.seed).shuffle(perm)
            self._cache[n] = perm
        return self._cache[n]

    def count(self, n: int) -> int:
        g = self.group_size
        if g > n:
            raise ValueError(f"group size {g} exceeds {n} servers")
        return (n // g) * g * (g - 1)

    def flow(self, n: int, i: int) -> tuple:
        g = self.group_size
        perm = self._members(n)
        group, rem = divmod(i, g * (g - 1))
        a, rem = divmod(rem, g - 1)
        b = rem if rem < a else rem + 1
        base = group * g
        return perm[base + a], perm[base + b]


@dataclass
class Butterfly(Pattern):
    """Each server exchanges with the servers at index distance 2^j
    (bitwise XOR on the binary server index), partners beyond N skipped."""

    name = "butterfly"

    def __post_init__(self):
        self._cache = {}

    def _prefix(self, n: int) -> list:
        if n not in self._cache:
            bits = max(1, (n - 1).bit_length())
            prefix = [0]
            for i in range(n):
                deg = sum(1 for j in range(bits) if i ^ (1 << j) < n)
                prefix.append(prefix[-1] + deg)
            self._cache[n] = (bits, prefix)
        return self._cache[n]

    def count(self, n: int) -> int:
        _, prefix = self._prefix(n)
        return prefix[-1]

    def flow(self, n: int, i: int) -> tuple:
        import bisect
        bits, prefix = self._prefix(n)
        src = bisect.bisect_right(prefix, i) - 1
        rank = i - prefix[src]
        for j in range(bits):
            dst = src ^ (1 << j)
            if dst < n:
                if rank == 0:
                    return src, dst
                rank -= 1
        raise IndexError(f"flow index {i} out of range")


@dataclass
class RandomPattern(Pattern):
    """Uniform random pairs; reflexive draws are resampled so the flow
    count stays exact."""

    flow_count: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        self.name = f"random:{self.flow_count}:{self.seed}"

    def count(self, n: int) -> int:
        return self.flow_count

    def flow(self, n: int, i: int) -> tuple:
        rng = SplitMix(mix64(self.seed, i))
        src = rng.next() % n
        dst = rng.next() % n
        while dst == src:
            dst = rng.next() % n
        return src, dst


def parse_pattern(spec: str) -> Pattern:
    """CLI form: all2all | many:SIZE:SEED | butterfly | random:COUNT:SEED."""
    parts = spec.split(":")
    kind = parts[0]
    if kind == "all2all":
        return AllToAll()
    if kind == "butterfly":
        return Butterfly()
    if kind == "many":
        size = int(parts[1]) if len(parts) > 1 else 1000
        seed = int(parts[2]) if len(parts) > 2 else 0
        return ManyAllToAll(size, seed)
    if kind == "random":
        count = int(parts[1]) if len(parts) > 1 else 1_000_000
        seed = int(parts[2]) if len(parts) > 2 else 0
        return RandomPattern(count, seed)
    raise ValueError(f"unknown pattern {spec!r}")
