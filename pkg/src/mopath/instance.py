"""Benchmark instances: naming grammar, velocity field, obstacles and terrain.

An instance is fully described by a name such as
``ASLETISMAC_CH_X10_Y10_P1_K2_BF``.  Cells are addressed by 0-based integer
coordinates ``(x, y)`` with ``x`` growing east and ``y`` growing south, so the
start cell ``(0, 0)`` is the north-west corner and the end cell
``(size_x - 1, size_y - 1)`` the south-east corner.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import MalformedName, OutOfBounds

PREFIX = "ASLETISMAC"
OBSTACLE_KINDS = ("NO", "CH", "LA")
ELEVATION_KINDS = ("PM", "P1", "P2", "P3")
NEIGHBOURHOODS = (2, 3)

HIGHWAY = 130.0
COUNTRY = 100.0
CITY = 50.0

_NAME_RE = re.compile(
    r"^(?P<prefix>[^_]+)_(?P<obst>[^_]+)_X(?P<sx>[^_]+)_Y(?P<sy>[^_]+)"
    r"_(?P<elev>[^_]+)_K(?P<k>[^_]+)_B(?P<bt>[^_]+)$"
)


@dataclass(frozen=True)
class InstanceSpec:
    obstacle_kind: str
    size_x: int
    size_y: int
    elevation_kind: str
    neighbourhood_k: int
    backtracking: bool
    lake_radius_ratio: float = 0.25

    def __post_init__(self):
        if self.obstacle_kind not in OBSTACLE_KINDS:
            raise MalformedName(f"unknown obstacle kind {self.obstacle_kind!r}")
        if self.elevation_kind not in ELEVATION_KINDS:
            raise MalformedName(f"unknown elevation kind {self.elevation_kind!r}")
        if self.neighbourhood_k not in NEIGHBOURHOODS:
            raise MalformedName(f"neighbourhood k must be 2 or 3, got {self.neighbourhood_k}")
        if self.size_x < 2 or self.size_y < 2:
            raise MalformedName("grid sizes must be at least 2")
        if not self.lake_radius_ratio >= 0:
            raise MalformedName("lake radius ratio must be non-negative")

    @property
    def name(self) -> str:
        return format_name(self)

    @property
    def start(self) -> tuple[int, int]:
        return (0, 0)

    @property
    def end(self) -> tuple[int, int]:
        return (self.size_x - 1, self.size_y - 1)


def parse_name(name: str, lake_radius_ratio: float = 0.25) -> InstanceSpec:
    """Decode an instance name.

    Raises:
        MalformedName: wrong prefix, unknown segment, non-numeric or too small size.
    """
    m = _NAME_RE.match(name.strip())
    if m is None:
        raise MalformedName(f"cannot parse instance name {name!r}")
    if m["prefix"] != PREFIX:
        raise MalformedName(f"instance names start with {PREFIX}, got {m['prefix']!r}")
    if m["bt"] not in ("T", "F"):
        raise MalformedName(f"backtracking flag must be BT or BF, got B{m['bt']}")
    sizes = []
    for key in ("sx", "sy"):
        if not m[key].isdigit():
            raise MalformedName(f"non-numeric size {m[key]!r} in {name!r}")
        sizes.append(int(m[key]))
    if not m["k"].isdigit():
        raise MalformedName(f"non-numeric neighbourhood K{m['k']}")
    return InstanceSpec(
        obstacle_kind=m["obst"],
        size_x=sizes[0],
        size_y=sizes[1],
        elevation_kind=m["elev"],
        neighbourhood_k=int(m["k"]),
        backtracking=m["bt"] == "T",
        lake_radius_ratio=lake_radius_ratio,
    )


def format_name(spec: InstanceSpec) -> str:
    return (
        f"{PREFIX}_{spec.obstacle_kind}_X{spec.size_x}_Y{spec.size_y}"
        f"_{spec.elevation_kind}_K{spec.neighbourhood_k}_B{'T' if spec.backtracking else 'F'}"
    )


def _check_bounds(spec: InstanceSpec, x: int, y: int) -> None:
    if not (0 <= x < spec.size_x and 0 <= y < spec.size_y):
        raise OutOfBounds(f"cell ({x}, {y}) outside {spec.size_x}x{spec.size_y} grid")


def is_obstacle(spec: InstanceSpec, x: int, y: int) -> bool:
    _check_bounds(spec, x, y)
    if (x, y) == spec.start or (x, y) == spec.end:
        return False
    if spec.obstacle_kind == "CH":
        return x % 2 == 1 and y % 2 == 1
    if spec.obstacle_kind == "LA":
        r = spec.lake_radius_ratio * spec.size_x
        dx = x - spec.size_x / 2
        dy = y - spec.size_y / 2
        return dx * dx + dy * dy < r * r
    return False


def road_weight(x: float, y: float) -> float:
    return max(math.sin(x), math.cos(y))


def velocity_at(spec: InstanceSpec, x: int, y: int) -> float:
    """Maximum speed of a cell in km/h (0 for obstacles)."""
    if is_obstacle(spec, x, y):
        return 0.0
    w = road_weight(x, y)
    if w > 0.9:
        return HIGHWAY
    if w < -0.4:
        return CITY
    return COUNTRY


# Terrain building blocks on the square (-3, 3) x (-3, 3).

def peaks(u, v):
    return (
        3 * (1 - u) ** 2 * np.exp(-(u**2) - (v + 1) ** 2)
        - 10 * np.exp(-(u**2) - v**2) * (-(u**3) + u / 5 - v**5)
        - 1 / 3 * np.exp(-((u + 1) ** 2) - v**2)
    )


def _gaussian(cu: float, cv: float):
    def hill(u, v):
        return 5 * np.exp(-((u - cu) ** 2) - (v - cv) ** 2)

    return hill


HILLS = (peaks, _gaussian(-1.5, -1.5), _gaussian(1.5, 1.5), _gaussian(1.5, -1.5))


def hill_components(kind: str) -> tuple:
    if kind == "PM":
        return HILLS[:1]
    return HILLS[1 : 1 + int(kind[1])]


def to_hill_domain(spec: InstanceSpec, x, y):
    u = 6 * np.asarray(x, dtype=float) / (spec.size_x - 1) - 3
    v = 6 * np.asarray(y, dtype=float) / (spec.size_y - 1) - 3
    return u, v


def elevation_at(spec: InstanceSpec, x: int, y: int) -> float:
    _check_bounds(spec, x, y)
    u, v = to_hill_domain(spec, x, y)
    return float(sum(h(u, v) for h in hill_components(spec.elevation_kind)))


@dataclass(frozen=True, eq=False)
class LatticeWorld:
    """Materialized grid. Arrays are indexed ``[x, y]``."""

    spec: InstanceSpec
    velocity: np.ndarray
    elevation: np.ndarray

    @property
    def start(self) -> tuple[int, int]:
        return self.spec.start

    @property
    def end(self) -> tuple[int, int]:
        return self.spec.end

    @property
    def obstacles(self) -> np.ndarray:
        return self.velocity == 0

    def to_json(self) -> str:
        # row-major: one row per y, east-going x inside a row
        doc = {
            "spec": self.spec.name,
            "velocity": self.velocity.T.tolist(),
            "elevation": self.elevation.T.tolist(),
        }
        return json.dumps(doc)


def build_world(spec: InstanceSpec) -> LatticeWorld:
    sx, sy = spec.size_x, spec.size_y
    velocity = np.array(
        [[velocity_at(spec, x, y) for y in range(sy)] for x in range(sx)], dtype=float
    )
    xs, ys = np.meshgrid(np.arange(sx), np.arange(sy), indexing="ij")
    u, v = to_hill_domain(spec, xs, ys)
    elevation = np.zeros((sx, sy))
    for h in hill_components(spec.elevation_kind):
        elevation = elevation + h(u, v)
    velocity.setflags(write=False)
    elevation.setflags(write=False)
    return LatticeWorld(spec, velocity, elevation)


def all_specs(sizes, obstacles=OBSTACLE_KINDS, elevations=ELEVATION_KINDS,
              neighbourhoods=NEIGHBOURHOODS, backtracking=False, lake_radius_ratio=0.25):
    """Cartesian instance grid, ordered obstacle-major."""
    for o in obstacles:
        for size in sizes:
            for e in elevations:
                for k in neighbourhoods:
                    yield InstanceSpec(o, size, size, e, k, backtracking, lake_radius_ratio)
