"""Variation operators on variable-length node-list genomes.

All randomness comes from a ``random.Random`` passed in by the caller.
"""

from __future__ import annotations

import math
import random
from typing import Sequence

from ..errors import Unreachable
from ..graph import RoutingGraph, SpatialIndex, is_reachable

Genome = tuple[int, ...]


def random_path(graph: RoutingGraph, rng: random.Random) -> Genome:
    """Random simple start-to-end path.

    A randomized depth-first walk: at every step a successor is drawn
    uniformly among unvisited ones that can still reach the end; dead ends are
    backed out of.  On obstacle-free no-backtracking lattices this is a plain
    uniform choice among the successors.
    """
    if not is_reachable(graph):
        raise Unreachable(f"{graph.name or 'graph'}: end not reachable from start")
    adj = graph.adjacency
    reach = graph.can_reach_end
    end = graph.end
    path = [graph.start]
    visited = {graph.start}
    options = [None]
    while path[-1] != end:
        if options[-1] is None:
            cand = [v for v in adj[path[-1]] if reach[v] and v not in visited]
            rng.shuffle(cand)
            options[-1] = cand
        if not options[-1]:
            path.pop()
            options.pop()
            continue
        v = options[-1].pop()
        visited.add(v)
        path.append(v)
        options.append(None)
    return tuple(path)


def repair_loops(seq: Sequence[int]) -> Genome:
    """Splice out every cycle, keeping the first and last occurrence boundaries."""
    last = {n: i for i, n in enumerate(seq)}
    if len(last) == len(seq):
        return tuple(seq)
    out = []
    i = 0
    while i < len(seq):
        n = seq[i]
        out.append(n)
        i = last[n] + 1
    return tuple(out)


def crossover(a: Genome, b: Genome, rng: random.Random, directed: bool = True) -> tuple[Genome, Genome]:
    """One- or two-point crossover at nodes shared by both parents.

    With two or more shared interior nodes, two of them are picked and the
    middle segments swapped; with exactly one, the tails are swapped there;
    with none, the parents come back unchanged.
    """
    pos_b = {n: i for i, n in enumerate(b)}
    shared = [(i, n) for i, n in enumerate(a[1:-1], start=1) if n in pos_b and 0 < pos_b[n] < len(b) - 1]
    if not shared:
        return a, b
    if len(shared) == 1:
        i, n = shared[0]
        j = pos_b[n]
        return repair_loops(a[:i] + b[j:]), repair_loops(b[:j] + a[i:])
    (i1, n1), (i2, n2) = sorted(rng.sample(shared, 2))
    j1, j2 = pos_b[n1], pos_b[n2]
    if j1 < j2:
        c1 = a[:i1] + b[j1:j2] + a[i2:]
        c2 = b[:j1] + a[i1:i2] + b[j2:]
    elif not directed:
        # b visits the two cut nodes in the opposite order; walk its segment backwards
        c1 = a[:i1] + b[j2:j1 + 1][::-1] + a[i2 + 1:]
        c2 = b[:j2] + a[i1:i2 + 1][::-1] + b[j1 + 1:]
    else:
        return repair_loops(a[:i1] + b[j1:]), repair_loops(b[:j1] + a[i1:])
    return repair_loops(c1), repair_loops(c2)


def default_r_max(graph: RoutingGraph) -> float:
    """Mutation search radius: ``max(2, extent / 8)`` in lattice units."""
    r = max(2.0, graph.extent / 8)
    return r * graph.meta.get("unit_length", 1.0)


def _local_search(graph: RoutingGraph, src: int, dst: int, rng: random.Random,
                  budget: int) -> list[int] | None:
    """Budgeted randomized depth-first search from ``src`` to ``dst``.

    Moves that bring the walk closer to ``dst`` are tried first (in random
    order).  On monotone graphs nodes past the target box are never entered.
    Returns the node list ``src .. dst`` or ``None`` when the budget runs out.
    """
    if src == dst:
        return [src]
    adj = graph.adjacency
    xy = graph.coords
    tx, ty = xy[dst]
    box = graph.monotone

    def dist(v):
        return math.hypot(xy[v][0] - tx, xy[v][1] - ty)

    if box and (xy[src][0] > tx or xy[src][1] > ty):
        return None
    path = [src]
    visited = {src}
    stack = []
    steps = 0

    def options(u):
        du = dist(u)
        closer, other = [], []
        for v in adj[u]:
            if v in visited:
                continue
            if box and (xy[v][0] > tx or xy[v][1] > ty):
                continue
            (closer if dist(v) < du else other).append(v)
        rng.shuffle(closer)
        rng.shuffle(other)
        return other + closer  # pop() from the end takes closer moves first

    stack.append(options(src))
    while stack:
        steps += 1
        if steps > budget:
            return None
        opts = stack[-1]
        if not opts:
            stack.pop()
            path.pop()
            continue
        v = opts.pop()
        if v in visited:
            continue
        path.append(v)
        if v == dst:
            return path
        visited.add(v)
        stack.append(options(v))
    return None


def perimeter_mutation(g: Genome, graph: RoutingGraph, index: SpatialIndex,
                       rng: random.Random, r_max: float) -> Genome:
    """Reroute a sub-path through a random node near its midpoint.

    Two genome positions ``i < j`` at most half the genome apart are picked; a
    node ``w`` within ``r_max`` of the Euclidean midpoint of their nodes is
    drawn, and local searches ``g[i] -> w -> g[j]`` replace the segment.  Any
    failure returns ``g`` unchanged.
    """
    k = len(g)
    if k < 3 or r_max <= 0:
        return g
    i = rng.randrange(k - 1)
    j = rng.randint(i + 1, min(k - 1, i + k // 2))
    (ax, ay), (bx, by) = graph.coords[g[i]], graph.coords[g[j]]
    near = index.query(((ax + bx) / 2, (ay + by) / 2), r_max)
    if not near:
        return g
    w = near[rng.randrange(len(near))]
    budget = int(4 * graph.extent)
    first = _local_search(graph, g[i], w, rng, budget)
    if first is None:
        return g
    second = _local_search(graph, w, g[j], rng, budget)
    if second is None:
        return g
    return repair_loops(g[:i] + tuple(first) + tuple(second[1:]) + g[j + 1:])
