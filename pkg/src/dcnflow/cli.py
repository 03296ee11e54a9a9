"""Command-line interface.

Subcommands: build (topology CSV + stats), route (one pair), run (one
experiment), cost (cost-model table), sweep (grid of experiments).  Every
flag has a config-file twin (flat key=value, via --config); explicit CLI
flags win on conflict.
"""

from __future__ import annotations

import argparse
import csv
import sys

from .build import SPEC_HELP, build_topology
from .faults import NO_FAULTS, parse_fault_spec
from .harness import (default_workers, load_config, run_experiment, sweep,
                      write_summary)
from .metrics import cost_table
from .routing import DEFAULT_ROUTER, RetryPolicy, RouteFailure, route
from .traffic import parse_pattern


def _apply_config(args: argparse.Namespace):
    if not getattr(args, "config", None):
        return args
    cfg = load_config(args.config)
    parser = args.subparser
    for key, val in cfg.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            continue
        # CLI wins: only fill values the user left at their defaults
        if parser.get_default(attr) == getattr(args, attr):
            default = parser.get_default(attr)
            cast = type(default) if default is not None else str
            if cast is bool:
                setattr(args, attr, val.lower() in ("1", "true", "yes"))
            else:
                setattr(args, attr, cast(val))
    return args


def _resolve_router(topology, name: str) -> str:
    return DEFAULT_ROUTER[topology.family] if name == "default" else name


def cmd_build(args, parser):
    topo = build_topology(args.topology)
    degs = [topo.degree(s) for s in topo.servers()]
    print(f"{topo.name}: {topo.num_servers} servers, {topo.num_switches} switches, "
          f"{topo.num_links} links ({topo.num_channels} directional), "
          f"server degrees min={min(degs)} max={max(degs)}")
    if args.out:
        topo.export_csv(args.out)
        print(f"wrote {args.out}_nodes.csv and {args.out}_links.csv")
    return 0


def cmd_route(args, parser):
    topo = build_topology(args.topology)
    faults = (parse_fault_spec(topo, args.faults, args.max_fault_fraction)
              if args.faults else NO_FAULTS)
    router = _resolve_router(topo, args.router)
    policy = RetryPolicy(seed=args.seed)
    out = route(topo, faults, router, args.src, args.dst, policy)
    if isinstance(out, RouteFailure):
        print(f"no route: {out.reason.value}")
        return 1
    print(" ".join(map(str, out.nodes)))
    print(f"hops: {out.hop_length}")
    return 0


def cmd_run(args, parser):
    topo = build_topology(args.topology)
    router = _resolve_router(topo, args.router)
    pattern = parse_pattern(args.pattern)
    seeds = tuple(int(x) for x in str(args.fault_seeds).split(",") if x != "")
    rows = run_experiment(
        topo, router, pattern,
        fault_fraction=args.fault_fraction,
        fault_seeds=seeds or (0,),
        workers=args.workers,
        seed=args.seed,
        assert_paths=args.assert_paths,
        out_prefix=args.out,
        max_fault_fraction=args.max_fault_fraction,
        write_load_csv=args.loads,
    )
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0].keys()))
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return 0


def cmd_cost(args, parser):
    rhos = [float(x) for x in args.rho.split(",")]
    gammas = [float(x) for x in args.gamma.split(",")]
    rows = cost_table(rhos, gammas, ficonn_k=args.ficonn_k)
    out = csv.writer(sys.stdout if not args.out else open(args.out, "w", newline=""))
    out.writerow(["family", "k", "rho", "gamma", "cost_norm"])
    for row in rows:
        out.writerow([row[0], row[1], row[2], row[3], f"{row[4]:.6f}"])
    return 0


def cmd_sweep(args, parser):
    cfg = load_config(args.grid)
    topologies = [t.strip() for t in cfg["topologies"].split(",")]
    routers = [r.strip() for r in cfg.get("routers", "default").split(",")]
    patterns = [p.strip() for p in cfg.get("patterns", "all2all").split(",")]
    fractions = [float(x) for x in cfg.get("fractions", "0").split(",")]
    seeds = tuple(int(x) for x in cfg.get("seeds", "0").split(","))
    cells = []
    for tspec in topologies:
        topo = build_topology(tspec)
        for router in routers:
            for pspec in patterns:
                for frac in fractions:
                    cells.append({
                        "topology": topo,
                        "router": _resolve_router(topo, router),
                        "pattern": parse_pattern(pspec),
                        "fault_fraction": frac,
                        "fault_seeds": seeds,
                        "max_fault_fraction": args.max_fault_fraction,
                    })
    result = sweep(cells, args.out, workers=args.workers)
    write_summary(f"{args.out}/summary.csv", result.rows)
    print(f"{len(result.rows)} rows -> {args.out}/summary.csv")
    if result.failures:
        print(f"{len(result.failures)} failed cells -> {args.out}/failures.txt",
              file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="dcnflow",
                                     description="Flow-level evaluation of "
                                     "dual-port server-centric DCN topologies")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--workers", type=int, default=default_workers())
        p.add_argument("--max-fault-fraction", type=float, default=0.15,
                       help="cap on fault fractions (override to exceed 0.15)")

    p = sub.add_parser("build", help="construct a topology, print stats, export CSV")
    p.add_argument("--topology", required=True, help=SPEC_HELP)
    p.add_argument("--out", default="", help="CSV path prefix")
    common(p)
    p.set_defaults(func=cmd_build, subparser=p)

    p = sub.add_parser("route", help="route one src/dst pair")
    p.add_argument("--topology", required=True, help=SPEC_HELP)
    p.add_argument("--router", default="default")
    p.add_argument("--src", type=int, required=True)
    p.add_argument("--dst", type=int, required=True)
    p.add_argument("--faults", default="", help="fault file or fraction:seed")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_route, subparser=p)

    p = sub.add_parser("run", help="run one experiment")
    p.add_argument("--topology", required=True, help=SPEC_HELP)
    p.add_argument("--router", default="default")
    p.add_argument("--pattern", default="all2all",
                   help="all2all | many:SIZE:SEED | butterfly | random:COUNT:SEED")
    p.add_argument("--fault-fraction", type=float, default=0.0)
    p.add_argument("--fault-seeds", default="0", help="comma-separated seeds")
    p.add_argument("--seed", type=int, default=0, help="routing retry seed")
    p.add_argument("--out", default="", help="output path prefix")
    p.add_argument("--loads", action="store_true", help="also write per-channel loads")
    p.add_argument("--assert", dest="assert_paths", action="store_true",
                   help="validate every routed path")
    common(p)
    p.set_defaults(func=cmd_run, subparser=p)

    p = sub.add_parser("cost", help="evaluate the component cost model")
    p.add_argument("--rho", default="0.01,0.02,0.04,0.08,0.16")
    p.add_argument("--gamma", default="0.01,0.1,0.2,0.3,0.4,0.5,0.6")
    p.add_argument("--ficonn-k", type=int, default=2)
    p.add_argument("--out", default="")
    common(p)
    p.set_defaults(func=cmd_cost, subparser=p)

    p = sub.add_parser("sweep", help="run a grid of experiments")
    p.add_argument("--grid", required=True,
                   help="grid config: topologies=, routers=, patterns=, "
                        "fractions=, seeds=")
    p.add_argument("--out", required=True, help="output directory")
    common(p)
    p.set_defaults(func=cmd_sweep, subparser=p)

    args = parser.parse_args(argv)
    args = _apply_config(args)
    return args.func(args, args.subparser)


if __name__ == "__main__":
    sys.exit(main())
