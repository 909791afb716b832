"""Evolutionary many-objective path search."""

from .algorithm import RunResult, experiment, run
from .config import AlgoConfig
from .operators import crossover, perimeter_mutation, random_path, repair_loops
from .selection import reference_directions

__all__ = [
    "AlgoConfig", "RunResult", "crossover", "experiment", "perimeter_mutation",
    "random_path", "reference_directions", "repair_loops", "run",
]
