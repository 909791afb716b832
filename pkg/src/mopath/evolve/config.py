from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from ..errors import InvalidConfig

SELECTIONS = ("nsga2", "nsga3")


@dataclass(frozen=True)
class AlgoConfig:
    """Solver settings. ``mutation_r_max=None`` picks a size-dependent radius."""

    population_size: int = 212
    crossover_prob: float = 0.8
    mutation_prob: float = 0.2
    generations: int = 500
    selection: str = "nsga2"
    divisions_p: int = 6
    rng_seed: int = 0
    mutation_r_max: float | None = None
    name: str | None = None

    def __post_init__(self):
        if self.selection not in SELECTIONS:
            raise InvalidConfig(f"selection must be one of {SELECTIONS}, got {self.selection!r}")
        if self.population_size < 4 or self.population_size % 2:
            raise InvalidConfig("population_size must be even and at least 4")
        for field in ("crossover_prob", "mutation_prob"):
            p = getattr(self, field)
            if not 0.0 <= p <= 1.0:
                raise InvalidConfig(f"{field} must lie in [0, 1], got {p}")
        if self.generations < 0:
            raise InvalidConfig("generations must be non-negative")
        if self.divisions_p < 1:
            raise InvalidConfig("divisions_p must be at least 1")
        if not 0 <= self.rng_seed < 2**64:
            raise InvalidConfig("rng_seed must be an unsigned 64-bit integer")
        if self.mutation_r_max is not None and self.mutation_r_max < 0:
            raise InvalidConfig("mutation_r_max must be non-negative")

    @property
    def label(self) -> str:
        return self.name or self.selection

    def replace(self, **changes) -> AlgoConfig:
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_dict(cls, doc: dict) -> AlgoConfig:
        if not isinstance(doc, dict):
            raise InvalidConfig("config document must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise InvalidConfig(f"unknown config fields: {sorted(unknown)}")
        try:
            return cls(**doc)
        except TypeError as exc:
            raise InvalidConfig(str(exc)) from None

    @classmethod
    def from_json(cls, text: str) -> AlgoConfig:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)
