"""Exhaustive depth-first enumeration of start-to-end paths and true fronts."""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import _kernels
from .errors import Unreachable
from .graph import NODE_WEIGHT, RoutingGraph, is_reachable
from .objectives import class_delay
from .pareto import ParetoArchive, write_front

DEFAULT_BT_BUDGET = 10**7


@dataclass
class EnumerationReport:
    paths_visited: int
    archive: ParetoArchive
    wall_time: float = 0.0
    aborted: bool = False
    name: str | None = None
    extra: dict = field(default_factory=dict)


def iter_paths(graph: RoutingGraph, prefix=None) -> Iterator[tuple[tuple[int, ...], tuple]]:
    """Yield ``(path, objective_vector)`` for every simple path to the end node.

    Successors are explored in ascending node id.  Objective partial sums are
    pushed and popped with the DFS stack, so each path costs O(1) amortized.
    ``prefix`` restricts the walk to paths starting with that node sequence.
    """
    adj = graph.adjacency
    xy = graph.coords
    vel = graph.velocity.tolist()
    elev = graph.elevation.tolist()
    weights = graph.delay_weight.tolist()
    classes = graph.road_classes.tolist()
    node_weight = graph.delay_model == NODE_WEIGHT
    reach = graph.can_reach_end.tolist()
    end = graph.end

    def extend(sums, w, u, v):
        (ux, uy), (vx, vy) = xy[u], xy[v]
        dx = vx - ux
        dy = vy - uy
        d = math.sqrt(dx * dx + dy * dy)
        dl = weights[v] if node_weight else class_delay(classes[u], classes[v])
        dh = elev[v] - elev[u]
        ang = 0.0
        if w is not None:
            ax = ux - xy[w][0]
            ay = uy - xy[w][1]
            ang = math.atan2(abs(ax * dy - ay * dx), ax * dx + ay * dy)
        return (
            sums[0] + d,
            sums[1] + dl,
            sums[2] + (dh if dh > 0.0 else 0.0),
            sums[3] + 2.0 * d / (vel[u] + vel[v]),
            sums[4] + ang,
        )

    prefix = list(prefix) if prefix is not None else [graph.start]
    path = [prefix[0]]
    sums_stack = [(0.0, 0.0, 0.0, 0.0, 0.0)]
    for k in range(1, len(prefix)):
        w = path[-2] if len(path) > 1 else None
        sums_stack.append(extend(sums_stack[-1], w, path[-1], prefix[k]))
        path.append(prefix[k])
    if path[-1] == end:
        yield tuple(path), sums_stack[-1]
        return
    on_path = set(path)
    base = len(path)
    iters = [iter(adj[path[-1]])]
    while len(path) >= base:
        v = next(iters[-1], None)
        if v is None:
            iters.pop()
            on_path.discard(path.pop())
            sums_stack.pop()
            continue
        if v in on_path or not reach[v]:
            continue
        u = path[-1]
        w = path[-2] if len(path) > 1 else None
        sums = extend(sums_stack[-1], w, u, v)
        if v == end:
            yield (*path, v), sums
            continue
        path.append(v)
        on_path.add(v)
        sums_stack.append(sums)
        iters.append(iter(adj[v]))


def _default_budget(graph: RoutingGraph, budget):
    if budget is None and not graph.directed:
        return DEFAULT_BT_BUDGET
    return budget


def enumerate_paths(graph: RoutingGraph, visitor: Callable | None = None,
                    budget: int | None = None) -> EnumerationReport:
    """Call ``visitor(path, vector)`` once per distinct simple start-to-end path.

    Without a visitor only the paths are counted (on the compiled kernel when
    available).  Reports ``aborted=True`` when the budget stopped the walk
    before all paths were seen.
    """
    if not is_reachable(graph):
        raise Unreachable(f"{graph.name or 'graph'}: end not reachable from start")
    budget = _default_budget(graph, budget)
    t0 = time.perf_counter()
    if visitor is None:
        count, aborted, _ = _kernels.dfs_front(
            graph, budget=-1 if budget is None else budget, keep_archive=False)
        return EnumerationReport(count, ParetoArchive(), time.perf_counter() - t0, aborted,
                                 graph.name)
    count = 0
    aborted = False
    for path, vec in iter_paths(graph):
        if budget is not None and count >= budget:
            aborted = True
            break
        count += 1
        visitor(path, vec)
    return EnumerationReport(count, ParetoArchive(), time.perf_counter() - t0, aborted, graph.name)


def _subtree_front(args):
    graph, prefix = args
    return _kernels.dfs_front(graph, prefix=prefix, budget=-1, keep_archive=True)


def true_front(graph: RoutingGraph, budget: int | None = None, workers: int = 1) -> EnumerationReport:
    """Exact non-dominated set over every enumerated path.

    With ``workers > 1`` (and no budget) the walk is split over the start
    node's successors and the per-subtree archives are folded in successor
    order, which reproduces the single-worker archive exactly.
    """
    if not is_reachable(graph):
        raise Unreachable(f"{graph.name or 'graph'}: end not reachable from start")
    budget = _default_budget(graph, budget)
    t0 = time.perf_counter()
    if workers > 1 and budget is None and graph.start != graph.end:
        reach = graph.can_reach_end
        prefixes = [(graph.start, v) for v in graph.adjacency[graph.start] if reach[v]]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_subtree_front, [(graph, p) for p in prefixes]))
        archive = ParetoArchive()
        count = 0
        for c, _, part in parts:
            count += c
            archive.merge(part)
        aborted = False
    else:
        count, aborted, archive = _kernels.dfs_front(
            graph, budget=-1 if budget is None else budget, keep_archive=True)
    return EnumerationReport(count, archive, time.perf_counter() - t0, aborted, graph.name)


def export_front(report: EnumerationReport, basename: str, labels=None, **meta) -> list[str]:
    """Write ``.front.csv``, ``.set.json`` and ``.meta.json`` for a report."""
    csv_path, set_path = write_front(report.archive, basename, labels=labels)
    doc = {
        "instance": report.name,
        "paths_visited": report.paths_visited,
        "front_size": len(report.archive),
        "aborted": report.aborted,
        "wall_time": report.wall_time,
        **report.extra,
        **meta,
    }
    meta_path = f"{basename}.meta.json"
    with open(meta_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    return [csv_path, set_path, meta_path]
