"""Generational (mu + lambda) many-objective solver over path genomes."""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import Unreachable
from ..graph import RoutingGraph, is_reachable
from ..metrics import IGDPlusTracker, igd_plus
from ..objectives import PathEvaluator
from ..pareto import ParetoArchive
from .config import AlgoConfig
from .operators import crossover, default_r_max, perimeter_mutation, random_path
from .selection import (
    binary_tournament,
    rank_and_crowding,
    reference_directions,
    survive_nsga2,
    survive_nsga3,
)


@dataclass
class RunResult:
    final_nondominated: ParetoArchive
    best_archive: ParetoArchive
    igd_plus_history: list[float] = field(default_factory=list)
    evaluations: int = 0
    config: AlgoConfig | None = None

    @property
    def final_igd_plus(self) -> float | None:
        return self.igd_plus_history[-1] if self.igd_plus_history else None


def _evaluate_all(evaluator, genomes, workers):
    # evaluation consumes no randomness, so worker count never changes results
    if workers > 1 and len(genomes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(evaluator, genomes))
    return [evaluator(g) for g in genomes]


def run(graph: RoutingGraph, config: AlgoConfig, reference_front=None,
        workers: int = 1) -> RunResult:
    """One seeded run.

    ``reference_front`` (vectors) enables the per-generation IGD+ history of
    the all-time archive; entry 0 is measured after initialization.
    """
    if not is_reachable(graph):
        raise Unreachable(f"{graph.name or 'graph'}: end not reachable from start")
    rng = random.Random(config.rng_seed)
    n = config.population_size
    evaluator = PathEvaluator(graph)
    index = graph.spatial_index
    r_max = config.mutation_r_max if config.mutation_r_max is not None else default_r_max(graph)
    refs = reference_directions(5, config.divisions_p) if config.selection == "nsga3" else None
    tracker = IGDPlusTracker(reference_front) if reference_front is not None and len(reference_front) else None

    archive = ParetoArchive()
    history: list[float] = []

    def record(genomes, vectors):
        accepted = archive.extend(vectors, genomes)
        if tracker is not None:
            history.append(tracker.update(np.asarray(vectors)[accepted]))

    pop = [random_path(graph, rng) for _ in range(n)]
    F = np.array(_evaluate_all(evaluator, pop, workers))
    evaluations = n
    record(pop, F)

    for _ in range(config.generations):
        rank, crowd = rank_and_crowding(F)
        offspring = []
        while len(offspring) < n:
            a = pop[binary_tournament(rank, crowd, rng)]
            b = pop[binary_tournament(rank, crowd, rng)]
            if rng.random() < config.crossover_prob:
                a, b = crossover(a, b, rng, directed=graph.directed)
            if rng.random() < config.mutation_prob:
                a = perimeter_mutation(a, graph, index, rng, r_max)
            if rng.random() < config.mutation_prob:
                b = perimeter_mutation(b, graph, index, rng, r_max)
            offspring.extend((a, b))
        QF = np.array(_evaluate_all(evaluator, offspring, workers))
        evaluations += n
        record(offspring, QF)

        merged = pop + offspring
        MF = np.vstack([F, QF])
        if refs is None:
            keep = survive_nsga2(MF, n)
        else:
            keep = survive_nsga3(MF, n, refs, rng)
        pop = [merged[i] for i in keep]
        F = MF[keep]

    final = ParetoArchive()
    final.extend(F, pop)
    return RunResult(final, archive, history, evaluations, config)


def experiment(graph: RoutingGraph, configs, runs: int = 31, reference_front=None,
               workers: int = 1) -> dict[str, list[float]]:
    """Final best-archive IGD+ of ``runs`` runs per config (seed = base seed + run)."""
    if reference_front is None or not len(reference_front):
        raise ValueError("an experiment needs a reference front")
    out: dict[str, list[float]] = {}
    for cfg in configs:
        values = []
        for r in range(runs):
            res = run(graph, cfg.replace(rng_seed=cfg.rng_seed + r), reference_front, workers)
            values.append(igd_plus(reference_front, res.best_archive.vectors))
        label = cfg.label
        while label in out:
            label += "'"
        out[label] = values
    return out
