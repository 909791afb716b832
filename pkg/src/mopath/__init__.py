"""Scalable many-objective grid pathfinding benchmark."""

from .enumeration import EnumerationReport, enumerate_paths, export_front, true_front
from .graph import (
    RoutingGraph,
    SpatialIndex,
    count_paths,
    graph_from_name,
    import_graph,
    is_reachable,
    lattice_graph,
    nodes_within,
)
from .instance import InstanceSpec, LatticeWorld, build_world, format_name, parse_name
from .metrics import igd_plus, mann_whitney_u, significance_table, summarize
from .objectives import evaluate
from .pareto import ParetoArchive, crowding_distance, dominates, fast_nondominated_sort, non_dominated_filter

__version__ = "0.1.0"
