"""Flow-level construction and evaluation of dual-port server-centric
datacenter network topologies."""

from .basegraph import BaseGraph, GQParams, build_gq, load_base_graph, parse_edge_list
from .bfs import all_pairs_stats, bfs_route, bfs_tree
from .build import build_topology
from .disjoint import parallel_paths, server_parallel_paths
from .dpillar import DPillarParams, build_dpillar
from .errors import (CapacityError, DcnFlowError, EdgeListError,
                     IncompatibleRouterError, RoutingDomainError)
from .faults import FaultSet, NO_FAULTS, inject_uniform, parse_fault_spec
from .ficonn import FiConnParams, build_ficonn
from .metrics import LinkLoadTable, abt, cost_per_server, histogram, idle_ports
from .routing import (FailureReason, RetryPolicy, RouteFailure, mix64, route,
                      route_pair)
from .stellar import StellarMap, build_gq_star, stellar_inverse, stellar_transform
from .topology import DistanceStats, Family, NodeKind, Path, Topology, check_path
from .traffic import (AllToAll, Butterfly, ManyAllToAll, Pattern,
                      RandomPattern, parse_pattern)

__version__ = "0.1.0"
