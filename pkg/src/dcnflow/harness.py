"""Experiment orchestration: single runs, grids, and parallel sweeps.

A run builds the topology once, injects faults per seed, streams the
pattern's flows through the router over disjoint index ranges (one worker
per range), merges the per-worker load tables, and emits one summary row.
Per-flow randomness derives from ``mix64(seed, flow_index)``, so results are
identical for any worker count.

Fault-free all-to-all runs with a family's own deterministic router use the
closed-form load tables from :mod:`dcnflow.alltoall`; those reproduce the
streamed accounting exactly and keep full-scale runs tractable.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from multiprocessing import get_context
from .alltoall import exact_alltoall_table
from .bfs import SweepAccumulator, bfs_tree
from .faults import NO_FAULTS, FaultSet, inject_uniform
from .metrics import LinkLoadTable, abt, histogram
from .routing import (DEFAULT_POLICY, RetryPolicy, check_router, mix64,
                      route_pair)
from .topology import DistanceStats, Topology
from .traffic import AllToAll, Pattern

SUMMARY_FIELDS = ["topology", "router", "pattern", "fault_fraction", "seed",
                  "N", "F", "ABT", "mean_hop", "max_hop", "connectivity_pct",
                  "mean_load_all", "mean_load_used", "unused_channels"]

# worker state inherited through fork
_G: dict = {}


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)


@dataclass
class ExperimentSpec:
    topology_spec: str
    router: str
    pattern_spec: str
    fault_fraction: float = 0.0
    fault_seeds: tuple = (0,)
    workers: int = 0
    out_prefix: str = ""
    assert_paths: bool = False
    policy_seed: int = 0
    max_fault_fraction: float = 0.15

    def __post_init__(self):
        if self.workers <= 0:
            self.workers = default_workers()


def _route_chunk(args):
    lo, hi = args
    topo: Topology = _G["topology"]
    pattern: Pattern = _G["pattern"]
    faults: FaultSet = _G["faults"]
    router: str = _G["router"]
    seed: int = _G["seed"]
    check: bool = _G["assert_paths"]
    n = topo.num_servers
    faulty = bool(faults.link_ids)
    needs_seed = faulty and router in ("gq-star", "dpillar-mp")
    policy = RetryPolicy(seed=seed)
    table = LinkLoadTable(topo)
    record = table.record_flow
    for i in range(lo, hi):
        src, dst = pattern.flow(n, i)
        if needs_seed:
            policy = RetryPolicy(seed=mix64(seed, i))
        nodes = route_pair(topo, faults, router, src, dst, policy)
        if nodes is None:
            table.failed_flows += 1
            continue
        if check:
            from .topology import Path, check_path
            path = Path.from_nodes(topo, nodes)
            check_path(topo, path, faults.link_ids, src, dst)
        record(nodes)
    return (table.counts, table.routed_flows, table.failed_flows,
            table.hop_sum, table.hop_max)


def _run_pool(worker, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    ctx = get_context("fork")
    with ctx.Pool(processes=workers) as pool:
        return pool.map(worker, tasks, chunksize=1)


def stream_table(topology: Topology, router: str, pattern: Pattern,
                 faults: FaultSet = NO_FAULTS, seed: int = 0,
                 workers: int = 1, assert_paths: bool = False) -> LinkLoadTable:
    """Route every pattern flow and accumulate the load table."""
    check_router(topology, router, faults)
    count = pattern.count(topology.num_servers)
    if isinstance(pattern, AllToAll) and not faults.link_ids:
        # warm pattern caches not needed; exact table may apply
        exact = exact_alltoall_table(topology, router)
        if exact is not None:
            return exact
    _G.update(topology=topology, pattern=pattern, faults=faults,
              router=router, seed=seed, assert_paths=assert_paths)
    chunks = max(1, min(workers * 4, count))
    step = (count + chunks - 1) // chunks if count else 1
    tasks = [(lo, min(lo + step, count)) for lo in range(0, count, step)]
    table = LinkLoadTable(topology)
    for counts, routed, failed, hop_sum, hop_max in _run_pool(_route_chunk, tasks, workers):
        table.counts += counts
        table.routed_flows += routed
        table.failed_flows += failed
        table.hop_sum += hop_sum
        table.hop_max = max(table.hop_max, hop_max)
    if table.routed_flows + table.failed_flows != count:
        raise AssertionError("run-loop audit failed: routed + failed != flow count")
    return table


def summarize(topology: Topology, router: str, pattern: Pattern,
              fault_fraction: float, seed: int, table: LinkLoadTable) -> dict:
    n = topology.num_servers
    hist = histogram(table)
    bottleneck = table.bottleneck()
    is_a2a = isinstance(pattern, AllToAll)
    if is_a2a:
        connectivity = 100.0 * (table.routed_flows + n) / (n * n)
    else:
        total = table.routed_flows + table.failed_flows
        connectivity = 100.0 * table.routed_flows / total if total else 0.0
    return {
        "topology": topology.name,
        "router": router,
        "pattern": pattern.name,
        "fault_fraction": fault_fraction,
        "seed": seed,
        "N": n,
        "F": bottleneck,
        "ABT": (f"{abt(n, bottleneck):.6g}" if is_a2a and bottleneck else ""),
        "mean_hop": f"{table.mean_hop():.6f}",
        "max_hop": table.hop_max,
        "connectivity_pct": f"{connectivity:.6f}",
        "mean_load_all": f"{hist.mean_all:.3f}",
        "mean_load_used": f"{hist.mean_used:.3f}",
        "unused_channels": hist.unused_total,
    }


def write_summary(path: str, rows: list, append: bool = False):
    mode = "a" if append and os.path.exists(path) else "w"
    with open(path, mode, newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
        if mode == "w":
            w.writeheader()
        for row in rows:
            w.writerow(row)


def write_loads(path: str, topology: Topology, table: LinkLoadTable):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["channel_src", "channel_dst", "flows"])
        for ch, flows in enumerate(table.counts.tolist()):
            src, dst = topology.channel_endpoints(ch)
            w.writerow([src, dst, flows])


def run_experiment(topology: Topology, router: str, pattern: Pattern,
                   fault_fraction: float = 0.0, fault_seeds=(0,),
                   workers: int = 1, seed: int = 0, assert_paths: bool = False,
                   out_prefix: str = "", max_fault_fraction: float = 0.15,
                   write_load_csv: bool = False) -> list:
    """One experiment: one summary row per fault seed."""
    rows = []
    for fseed in fault_seeds:
        if fault_fraction > 0:
            faults = inject_uniform(topology, fault_fraction, fseed,
                                    max_fraction=max_fault_fraction)
        else:
            faults = NO_FAULTS
        table = stream_table(topology, router, pattern, faults,
                             seed=mix64(seed, fseed), workers=workers,
                             assert_paths=assert_paths)
        rows.append(summarize(topology, router, pattern, fault_fraction,
                              fseed, table))
        if out_prefix and write_load_csv:
            write_loads(f"{out_prefix}_loads_seed{fseed}.csv", topology, table)
    if out_prefix:
        write_summary(f"{out_prefix}_summary.csv", rows)
    return rows


# ---------------------------------------------------------------------------
# parallel all-pairs sweeps (BFS oracle or a routing strategy)

def _pair_stats_chunk(sources):
    topo: Topology = _G["topology"]
    faults: FaultSet = _G["faults"]
    router: str = _G["router"]
    seed: int = _G["seed"]
    acc = SweepAccumulator()
    if router == "bfs":
        for src in sources:
            acc.add_distances(bfs_tree(topo, src, faults), src)
        return acc
    n = topo.num_servers
    needs_seed = bool(faults.link_ids) and router in ("gq-star", "dpillar-mp")
    policy = RetryPolicy(seed=seed)
    for src in sources:
        acc.sources += 1
        base = src * n
        for dst in range(n):
            if dst == src:
                continue
            acc.pairs += 1
            if needs_seed:
                policy = RetryPolicy(seed=mix64(seed, base + dst))
            nodes = route_pair(topo, faults, router, src, dst, policy)
            if nodes is None:
                continue
            hops = sum(1 for v in nodes if v < n) - 1
            acc.hop_sum += hops
            acc.connected += 1
            if hops > acc.hop_max:
                acc.hop_max = hops
    return acc


def parallel_pair_stats(topology: Topology, faults: FaultSet, router: str,
                        sources=None, seed: int = 0,
                        workers: int = 0) -> DistanceStats:
    """All-pairs (or sampled-source) distance stats, parallel over sources."""
    check_router(topology, router, faults)
    workers = workers or default_workers()
    srcs = list(sources if sources is not None else topology.servers())
    _G.update(topology=topology, faults=faults, router=router, seed=seed)
    chunks = max(1, min(workers * 4, len(srcs)))
    step = (len(srcs) + chunks - 1) // chunks
    tasks = [srcs[i:i + step] for i in range(0, len(srcs), step)]
    total = SweepAccumulator()
    for acc in _run_pool(_pair_stats_chunk, tasks, workers):
        total.merge(acc)
    return total.stats(topology.num_servers)


# ---------------------------------------------------------------------------
# sweeps over parameter grids

def load_config(path: str) -> dict:
    """Flat key=value config; '#' comments and blank lines ignored."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)  # (cell_name, error)


def sweep(cells, out_dir: str, workers: int = 0, resume: bool = True) -> SweepResult:
    """Run a list of experiment cells; each cell is a dict with keys
    topology (built Topology), router, pattern (Pattern), fault_fraction,
    fault_seeds.  Per-cell summary files make interrupted sweeps resumable.
    """
    os.makedirs(out_dir, exist_ok=True)
    result = SweepResult()
    for cell in cells:
        topo: Topology = cell["topology"]
        pattern: Pattern = cell["pattern"]
        name = (f"{topo.name}__{cell['router']}__{pattern.name}"
                f"__p{cell.get('fault_fraction', 0.0)}").replace(":", "_")
        path = os.path.join(out_dir, f"{name}.csv")
        if resume and os.path.exists(path):
            with open(path) as fh:
                result.rows.extend(csv.DictReader(fh))
            continue
        try:
            rows = run_experiment(
                topo, cell["router"], pattern,
                fault_fraction=cell.get("fault_fraction", 0.0),
                fault_seeds=cell.get("fault_seeds", (0,)),
                workers=workers or default_workers(),
                max_fault_fraction=cell.get("max_fault_fraction", 0.15),
            )
        except Exception as exc:  # cell failures reported, sweep continues
            result.failures.append((name, repr(exc)))
            continue
        write_summary(path, rows)
        result.rows.extend(rows)
    if result.failures:
        with open(os.path.join(out_dir, "failures.txt"), "w") as fh:
            for name, err in result.failures:
                fh.write(f"{name}\t{err}\n")
    return result
