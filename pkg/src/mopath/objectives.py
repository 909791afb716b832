"""The five path objectives, all minimized.

Vectors are ordered ``(length, delay, ascent, time, smoothness)``.  Every
evaluator sums edge terms strictly left to right so that the incremental sums
kept by the enumeration kernels reproduce these values bit for bit.
"""

from __future__ import annotations

import math
from typing import Sequence

from .errors import NonPositiveVelocity
from .graph import NODE_WEIGHT, RoutingGraph

N_OBJECTIVES = 5
OBJECTIVE_NAMES = ("length", "delay", "ascent", "time", "smoothness")

CITY, COUNTRY, HIGHWAY = 0, 1, 2
_TIERS = ((50.0, CITY), (100.0, COUNTRY), (130.0, HIGHWAY))
_CLASS_NAMES = ("city", "country", "highway")

# delay between two consecutive nodes of equal class
_SAME_CLASS_DELAY = (3.0, 1.0, 0.2)
MIXED_CLASS_DELAY = 2.0


def road_class_code(velocity: float) -> int:
    if not velocity > 0:
        raise NonPositiveVelocity(f"velocity must be positive, got {velocity}")
    best, best_gap = CITY, math.inf
    for speed, code in _TIERS:
        gap = abs(velocity - speed)
        # ascending tiers: "<=" lets ties go to the faster class
        if gap <= best_gap:
            best, best_gap = code, gap
    return best


def road_class(velocity: float) -> str:
    """Map a speed in km/h to ``'city'``, ``'country'`` or ``'highway'``."""
    return _CLASS_NAMES[road_class_code(velocity)]


def class_delay(cu: int, cv: int) -> float:
    if cu != cv:
        return MIXED_CLASS_DELAY
    return _SAME_CLASS_DELAY[cu]


def edge_length(graph: RoutingGraph, u: int, v: int) -> float:
    (ux, uy), (vx, vy) = graph.coords[u], graph.coords[v]
    dx = vx - ux
    dy = vy - uy
    return math.sqrt(dx * dx + dy * dy)


def turn_angle(ax: float, ay: float, bx: float, by: float) -> float:
    """Angle in radians between direction vectors ``a`` and ``b``.

    Computed as ``atan2(|a x b|, a . b)``, which equals the arccos of the
    normalized dot product but stays exact for parallel vectors.
    """
    return math.atan2(abs(ax * by - ay * bx), ax * bx + ay * by)


def eval_length(path: Sequence[int], graph: RoutingGraph) -> float:
    total = 0.0
    for u, v in zip(path, path[1:]):
        total += edge_length(graph, u, v)
    return total


def eval_delay(path: Sequence[int], graph: RoutingGraph) -> float:
    total = 0.0
    if graph.delay_model == NODE_WEIGHT:
        w = graph.delay_weight
        for v in path[1:]:
            total += float(w[v])
        return total
    cls = graph.road_classes
    for u, v in zip(path, path[1:]):
        total += class_delay(cls[u], cls[v])
    return total


def eval_ascent(path: Sequence[int], graph: RoutingGraph) -> float:
    h = graph.elevation
    total = 0.0
    for u, v in zip(path, path[1:]):
        dh = float(h[v]) - float(h[u])
        total += dh if dh > 0.0 else 0.0
    return total


def eval_time(path: Sequence[int], graph: RoutingGraph) -> float:
    """Travel time in hours, averaging the speed limits at both ends of an edge."""
    vel = graph.velocity
    total = 0.0
    for u, v in zip(path, path[1:]):
        total += 2.0 * edge_length(graph, u, v) / (float(vel[u]) + float(vel[v]))
    return total


def eval_smoothness(path: Sequence[int], graph: RoutingGraph) -> float:
    xy = graph.coords
    total = 0.0
    for p, u, v in zip(path, path[1:], path[2:]):
        total += turn_angle(xy[u][0] - xy[p][0], xy[u][1] - xy[p][1],
                            xy[v][0] - xy[u][0], xy[v][1] - xy[u][1])
    return total


def evaluate(path: Sequence[int], graph: RoutingGraph) -> tuple[float, float, float, float, float]:
    """Objective vector of ``path`` in fixed order (f1, ..., f5)."""
    return (
        eval_length(path, graph),
        eval_delay(path, graph),
        eval_ascent(path, graph),
        eval_time(path, graph),
        eval_smoothness(path, graph),
    )


class PathEvaluator:
    """Fast single-pass evaluator over plain Python lists.

    Produces the same values as :func:`evaluate`; used in the solver loop
    where numpy scalar access would dominate.
    """

    def __init__(self, graph: RoutingGraph):
        self.coords = graph.coords
        self.vel = graph.velocity.tolist()
        self.elev = graph.elevation.tolist()
        self.weights = graph.delay_weight.tolist()
        self.classes = graph.road_classes.tolist()
        self.node_weight = graph.delay_model == NODE_WEIGHT

    def __call__(self, path: Sequence[int]) -> tuple[float, float, float, float, float]:
        xy, vel, elev = self.coords, self.vel, self.elev
        f1 = f2 = f3 = f4 = f5 = 0.0
        px = py = 0.0
        u = path[0]
        ux, uy = xy[u]
        for k in range(1, len(path)):
            v = path[k]
            vx, vy = xy[v]
            dx = vx - ux
            dy = vy - uy
            d = math.sqrt(dx * dx + dy * dy)
            f1 += d
            if self.node_weight:
                f2 += self.weights[v]
            else:
                f2 += class_delay(self.classes[u], self.classes[v])
            dh = elev[v] - elev[u]
            f3 += dh if dh > 0.0 else 0.0
            f4 += 2.0 * d / (vel[u] + vel[v])
            if k > 1:
                f5 += turn_angle(px, py, dx, dy)
            px, py = dx, dy
            u, ux, uy = v, vx, vy
        return (f1, f2, f3, f4, f5)


def is_valid_path(path: Sequence[int], graph: RoutingGraph) -> bool:
    """Check the genome invariants: endpoints, adjacency and simplicity."""
    if len(path) < 1 or path[0] != graph.start or path[-1] != graph.end:
        return False
    if len(set(path)) != len(path):
        return False
    adj = graph.adjacency
    return all(v in adj[u] for u, v in zip(path, path[1:]))


def format_vector(vec) -> str:
    return ",".join(repr(float(v)) for v in vec)
