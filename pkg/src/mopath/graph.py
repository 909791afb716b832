"""Routing graphs built from lattice worlds or imported from graph files."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from .errors import CyclicGraph, MissingAttribute, ParseError, UnknownNodeRef
from .instance import LatticeWorld

ROAD_CLASS = "road_class"
NODE_WEIGHT = "node_weight"

_BF_MOVES = {2: ((1, 0), (0, 1)), 3: ((1, 0), (0, 1), (1, 1))}
_BT_MOVES = {
    2: ((1, 0), (-1, 0), (0, 1), (0, -1)),
    3: ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)),
}


@dataclass(frozen=True, eq=False)
class RoutingGraph:
    """Immutable attributed graph in CSR layout.

    ``indices[indptr[u]:indptr[u + 1]]`` are the successors of node ``u`` in
    ascending order.  Undirected graphs store every edge in both directions.
    """

    x: np.ndarray
    y: np.ndarray
    velocity: np.ndarray
    elevation: np.ndarray
    delay_weight: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    directed: bool
    start: int
    end: int
    delay_model: str = NODE_WEIGHT
    # moves never decrease x or y (no-backtracking lattice)
    monotone: bool = False
    # rough side length in lattice units, scales search budgets
    extent: float = 0.0
    name: str | None = None
    labels: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for arr in (self.x, self.y, self.velocity, self.elevation, self.delay_weight,
                    self.indptr, self.indices):
            arr.setflags(write=False)

    @property
    def node_count(self) -> int:
        return int(self.x.shape[0])

    @property
    def edge_count(self) -> int:
        """Number of edges; undirected edges are counted once."""
        n = int(self.indices.shape[0])
        return n if self.directed else n // 2

    def successors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        ptr = self.indptr.tolist()
        idx = self.indices.tolist()
        return tuple(tuple(idx[ptr[u]:ptr[u + 1]]) for u in range(self.node_count))

    @cached_property
    def coords(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self.x.tolist(), self.y.tolist()))

    @cached_property
    def road_classes(self) -> np.ndarray:
        from .objectives import road_class_code

        return np.array([road_class_code(v) for v in self.velocity.tolist()], dtype=np.int64)

    @cached_property
    def can_reach_end(self) -> np.ndarray:
        """Mask of nodes from which the end node is reachable."""
        n = self.node_count
        rev: list[list[int]] = [[] for _ in range(n)]
        for u, succ in enumerate(self.adjacency):
            for v in succ:
                rev[v].append(u)
        mask = np.zeros(n, dtype=bool)
        mask[self.end] = True
        queue = deque([self.end])
        while queue:
            v = queue.popleft()
            for u in rev[v]:
                if not mask[u]:
                    mask[u] = True
                    queue.append(u)
        mask.setflags(write=False)
        return mask

    @cached_property
    def spatial_index(self) -> SpatialIndex:
        return SpatialIndex(self.x, self.y)

    def has_edge(self, u: int, v: int) -> bool:
        s = self.successors(u)
        i = np.searchsorted(s, v)
        return bool(i < s.shape[0] and s[i] == v)

    def label(self, u: int) -> int:
        return int(u if self.labels is None else self.labels[u])


def _csr(n: int, adj: list[set[int]]) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(n + 1, dtype=np.int64)
    for u in range(n):
        indptr[u + 1] = indptr[u] + len(adj[u])
    indices = np.fromiter(
        (v for u in range(n) for v in sorted(adj[u])), dtype=np.int64, count=int(indptr[-1])
    )
    return indptr, indices


def lattice_graph(world: LatticeWorld) -> RoutingGraph:
    """Grid graph over the passable cells of ``world``.

    Node ids follow row-major order (``y`` outer, ``x`` inner) over passable
    cells, which is a topological order when backtracking is disabled.
    """
    spec = world.spec
    sx, sy = spec.size_x, spec.size_y
    passable = ~world.obstacles
    node_of = -np.ones((sx, sy), dtype=np.int64)
    cells = [(x, y) for y in range(sy) for x in range(sx) if passable[x, y]]
    for i, (x, y) in enumerate(cells):
        node_of[x, y] = i
    moves = _BT_MOVES[spec.neighbourhood_k] if spec.backtracking else _BF_MOVES[spec.neighbourhood_k]
    adj: list[set[int]] = [set() for _ in cells]
    for i, (x, y) in enumerate(cells):
        for dx, dy in moves:
            nx, ny = x + dx, y + dy
            if 0 <= nx < sx and 0 <= ny < sy and node_of[nx, ny] >= 0:
                adj[i].add(int(node_of[nx, ny]))
    indptr, indices = _csr(len(cells), adj)
    xs = np.array([c[0] for c in cells], dtype=float)
    ys = np.array([c[1] for c in cells], dtype=float)
    vel = np.array([world.velocity[c] for c in cells], dtype=float)
    elev = np.array([world.elevation[c] for c in cells], dtype=float)
    return RoutingGraph(
        x=xs, y=ys, velocity=vel, elevation=elev, delay_weight=np.zeros(len(cells)),
        indptr=indptr, indices=indices,
        directed=not spec.backtracking,
        start=int(node_of[world.start]), end=int(node_of[world.end]),
        delay_model=ROAD_CLASS, monotone=not spec.backtracking,
        extent=float(sx + sy), name=spec.name, meta={"unit_length": 1.0},
    )


def graph_from_name(name: str, lake_radius_ratio: float = 0.25) -> RoutingGraph:
    from .instance import build_world, parse_name

    return lattice_graph(build_world(parse_name(name, lake_radius_ratio)))


def import_graph(document) -> RoutingGraph:
    """Build a graph from a parsed or raw JSON graph document.

    Node ids in the document may be arbitrary integers; they are mapped to
    dense ids in declaration order and kept in ``graph.labels``.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise ParseError("graph document must be a JSON object")
    try:
        nodes = document["nodes"]
        edges = document["edges"]
        start_label = document["start"]
        end_label = document["end"]
    except KeyError as exc:
        raise ParseError(f"graph document lacks {exc.args[0]!r}") from None
    if not isinstance(nodes, list) or not isinstance(edges, list):
        raise ParseError("'nodes' and 'edges' must be lists")
    directed = bool(document.get("directed", False))
    delay_model = document.get("delay_model", NODE_WEIGHT)
    if delay_model not in (ROAD_CLASS, NODE_WEIGHT):
        raise ParseError(f"unknown delay_model {delay_model!r}")

    dense: dict[int, int] = {}
    cols: dict[str, list[float]] = {k: [] for k in ("x", "y", "elevation", "maxspeed", "delay")}
    for rec in nodes:
        if not isinstance(rec, dict) or "id" not in rec:
            raise ParseError("every node needs an 'id'")
        label = rec["id"]
        if label in dense:
            raise ParseError(f"duplicate node id {label}")
        for key in ("x", "y", "maxspeed"):
            if rec.get(key) is None:
                raise MissingAttribute(f"node {label} lacks {key!r}")
        try:
            vals = {
                "x": float(rec["x"]), "y": float(rec["y"]),
                "elevation": float(rec.get("elevation", 0.0)),
                "maxspeed": float(rec["maxspeed"]), "delay": float(rec.get("delay", 0.0)),
            }
        except (TypeError, ValueError):
            raise ParseError(f"non-numeric attribute on node {label}") from None
        if not vals["maxspeed"] > 0:
            raise MissingAttribute(f"node {label} has non-positive maxspeed")
        if vals["delay"] < 0:
            raise ParseError(f"node {label} has negative delay")
        dense[label] = len(dense)
        for k, v in vals.items():
            cols[k].append(v)

    n = len(dense)
    adj: list[set[int]] = [set() for _ in range(n)]
    for rec in edges:
        try:
            u, v = rec["u"], rec["v"]
        except (KeyError, TypeError):
            raise ParseError("every edge needs 'u' and 'v'") from None
        for end in (u, v):
            if end not in dense:
                raise UnknownNodeRef(f"edge endpoint {end} is not a declared node")
        a, b = dense[u], dense[v]
        if a == b:
            continue
        adj[a].add(b)
        if not directed:
            adj[b].add(a)
    for label in (start_label, end_label):
        if label not in dense:
            raise UnknownNodeRef(f"start/end {label} is not a declared node")

    indptr, indices = _csr(n, adj)
    xs = np.array(cols["x"])
    ys = np.array(cols["y"])
    span = max(np.ptp(xs), np.ptp(ys)) if n else 0.0
    lengths = [math.dist((xs[u], ys[u]), (xs[v], ys[v])) for u in range(n) for v in adj[u]]
    unit = float(np.mean(lengths)) if lengths else 1.0
    return RoutingGraph(
        x=xs, y=ys, velocity=np.array(cols["maxspeed"]), elevation=np.array(cols["elevation"]),
        delay_weight=np.array(cols["delay"]), indptr=indptr, indices=indices,
        directed=directed, start=dense[start_label], end=dense[end_label],
        delay_model=delay_model,
        monotone=bool(document.get("monotone", False)),
        extent=float(document.get("extent", 2 * math.ceil(math.sqrt(max(n, 1))))),
        name=document.get("name"),
        labels=np.array(list(dense), dtype=np.int64),
        meta={"unit_length": float(document.get("unit_length", unit if unit > 0 else 1.0)),
              "span": float(span)},
    )


def export_graph(graph: RoutingGraph) -> dict:
    """Graph document accepted by :func:`import_graph`."""
    nodes = []
    for u in range(graph.node_count):
        nodes.append({
            "id": graph.label(u), "x": float(graph.x[u]), "y": float(graph.y[u]),
            "elevation": float(graph.elevation[u]), "maxspeed": float(graph.velocity[u]),
            "delay": float(graph.delay_weight[u]),
        })
    edges = []
    for u, succ in enumerate(graph.adjacency):
        for v in succ:
            if graph.directed or u < v:
                edges.append({"u": graph.label(u), "v": graph.label(v)})
    doc = {
        "directed": graph.directed, "start": graph.label(graph.start),
        "end": graph.label(graph.end), "nodes": nodes, "edges": edges,
        "delay_model": graph.delay_model, "monotone": graph.monotone, "extent": graph.extent,
        "unit_length": graph.meta.get("unit_length", 1.0),
    }
    if graph.name:
        doc["name"] = graph.name
    return doc


def load_graph(path) -> RoutingGraph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return import_graph(text)


def is_reachable(graph: RoutingGraph) -> bool:
    return bool(graph.can_reach_end[graph.start])


def count_paths(graph: RoutingGraph) -> int:
    """Exact number of distinct start-to-end paths in an acyclic graph."""
    n = graph.node_count
    adj = graph.adjacency
    indeg = [0] * n
    for succ in adj:
        for v in succ:
            indeg[v] += 1
    order = []
    queue = deque(u for u in range(n) if indeg[u] == 0)
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if len(order) != n:
        raise CyclicGraph("path counting needs an acyclic graph (no backtracking)")
    ways = [0] * n
    ways[graph.start] = 1
    for u in order:
        if u == graph.end or not ways[u]:
            continue
        for v in adj[u]:
            ways[v] += ways[u]
    return ways[graph.end]


class SpatialIndex:
    """Exact radius queries over node coordinates (KD-tree backed)."""

    def __init__(self, x: np.ndarray, y: np.ndarray):
        self._points = np.column_stack([x, y]) if len(x) else np.empty((0, 2))
        self._tree = cKDTree(self._points)

    def __len__(self):
        return self._points.shape[0]

    def query(self, center, radius: float) -> list[int]:
        """Sorted ids of nodes at Euclidean distance <= ``radius``."""
        if radius < 0:
            raise ValueError("radius must be non-negative")
        # widen slightly, then filter with the exact distance test
        hits = self._tree.query_ball_point(center, radius * (1 + 1e-9) + 1e-12)
        c = np.asarray(center, dtype=float)
        out = [i for i in hits if math.dist(self._points[i], c) <= radius]
        out.sort()
        return out


def nodes_within(index: SpatialIndex, center, radius: float) -> set[int]:
    return set(index.query(center, radius))
