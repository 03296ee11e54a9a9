"""Reproducible bidirectional link-failure sets.

A failed link blocks both directional channels.  Sets are uniform samples
without replacement over the unordered links, fully determined by
``(topology, fraction, seed)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .topology import Topology

# Degradation levels beyond this need an explicit override.
DEFAULT_MAX_FRACTION = 0.15

_EMPTY = frozenset()


@dataclass(frozen=True)
class FaultSet:
    link_ids: frozenset
    fraction: float = 0.0
    seed: int = 0

    def __len__(self):
        return len(self.link_ids)

    def blocks(self, link_id: int) -> bool:
        return link_id in self.link_ids


NO_FAULTS = FaultSet(_EMPTY)


def failed_links(faults: FaultSet | None) -> frozenset:
    return _EMPTY if faults is None else faults.link_ids


def inject_uniform(topology: Topology, fraction: float, seed: int,
                   max_fraction: float = DEFAULT_MAX_FRACTION) -> FaultSet:
    """Fail ``round(fraction * num_links)`` links chosen uniformly.

    Rounding is half-up.  ``fraction`` beyond ``max_fraction`` is rejected;
    raise the cap explicitly to exceed the default 15% degradation range.
    """
    if not 0.0 <= fraction <= max_fraction:
        raise ValueError(
            f"fault fraction {fraction} outside [0, {max_fraction}] "
            "(pass a higher max_fraction to override)")
    count = int(fraction * topology.num_links + 0.5)
    rng = random.Random(seed)
    ids = rng.sample(range(topology.num_links), count)
    return FaultSet(frozenset(ids), fraction, seed)


def write_fault_file(topology: Topology, faults: FaultSet, path: str):
    with open(path, "w") as fh:
        for lid in sorted(faults.link_ids):
            u, v = topology.links[lid]
            fh.write(f"{u} {v}\n")


def read_fault_file(topology: Topology, path: str) -> FaultSet:
    ids = set()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'u v'")
            u, v = int(parts[0]), int(parts[1])
            ids.add(topology.link_id(u, v))
    return FaultSet(frozenset(ids))


def parse_fault_spec(topology: Topology, spec: str,
                     max_fraction: float = DEFAULT_MAX_FRACTION) -> FaultSet:
    """Parse a CLI fault argument: either ``fraction:seed`` or a file path."""
    if ":" in spec:
        frac_s, seed_s = spec.split(":", 1)
        try:
            return inject_uniform(topology, float(frac_s), int(seed_s),
                                  max_fraction=max_fraction)
        except ValueError as exc:
            if "fault fraction" in str(exc):
                raise
    return read_fault_file(topology, spec)
