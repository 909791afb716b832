"""Mating and environmental selection for the NSGA-II / NSGA-III variants."""

from __future__ import annotations

import random
from itertools import combinations

import numpy as np

from ..pareto import crowding_distance, fast_nondominated_sort


def reference_directions(m: int = 5, p: int = 6) -> np.ndarray:
    """All points of the unit simplex whose coordinates are multiples of ``1/p``.

    There are ``C(p + m - 1, m - 1)`` of them (stars and bars).
    """
    if m < 2 or p < 1:
        raise ValueError("need m >= 2 objectives and p >= 1 divisions")
    rows = []
    for bars in combinations(range(p + m - 1), m - 1):
        prev = -1
        counts = []
        for b in bars:
            counts.append(b - prev - 1)
            prev = b
        counts.append(p + m - 2 - prev)
        rows.append(counts)
    return np.array(rows[::-1], dtype=float) / p


def rank_and_crowding(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = F.shape[0]
    rank = np.empty(n, dtype=np.int64)
    crowd = np.empty(n)
    for r, front in enumerate(fast_nondominated_sort(F)):
        rank[front] = r
        crowd[front] = crowding_distance(F[front])
    return rank, crowd


def binary_tournament(rank: np.ndarray, crowd: np.ndarray, rng: random.Random) -> int:
    """Lower rank wins, then larger crowding distance, then a coin flip."""
    n = rank.shape[0]
    a = rng.randrange(n)
    b = rng.randrange(n)
    if rank[a] != rank[b]:
        return a if rank[a] < rank[b] else b
    if crowd[a] != crowd[b]:
        return a if crowd[a] > crowd[b] else b
    return a if rng.random() < 0.5 else b


def survive_nsga2(F: np.ndarray, n: int, rng: random.Random | None = None) -> list[int]:
    """Indices of the ``n`` survivors by front order, ties cut by crowding."""
    chosen: list[int] = []
    for front in fast_nondominated_sort(F):
        if len(chosen) + len(front) <= n:
            chosen.extend(front)
            if len(chosen) == n:
                break
            continue
        cd = crowding_distance(F[front])
        order = np.argsort(-cd, kind="stable")
        chosen.extend(front[i] for i in order[: n - len(chosen)])
        break
    return chosen


def _normalize(F: np.ndarray) -> np.ndarray:
    """Translate by the ideal point and scale by hyperplane intercepts."""
    m = F.shape[1]
    ideal = F.min(axis=0)
    Fp = F - ideal
    weights = np.full((m, m), 1e-6)
    np.fill_diagonal(weights, 1.0)
    asf = np.max(Fp[None, :, :] / weights[:, None, :], axis=2)
    extremes = Fp[np.argmin(asf, axis=1)]
    worst = Fp.max(axis=0)
    try:
        b = np.linalg.solve(extremes, np.ones(m))
        with np.errstate(divide="ignore"):
            intercepts = 1.0 / b
        if not np.all(np.isfinite(intercepts)) or np.any(intercepts <= 1e-6):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        intercepts = worst
    intercepts = np.where(intercepts <= 1e-10, 1.0, intercepts)
    return Fp / intercepts


def associate(Fn: np.ndarray, refs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nearest reference line (perpendicular distance) of every normalized point."""
    unit = refs / np.linalg.norm(refs, axis=1, keepdims=True)
    proj = Fn @ unit.T
    residual = Fn[:, None, :] - proj[:, :, None] * unit[None, :, :]
    perp = np.linalg.norm(residual, axis=2)
    nearest = np.argmin(perp, axis=1)
    return nearest, perp[np.arange(Fn.shape[0]), nearest]


def survive_nsga3(F: np.ndarray, n: int, refs: np.ndarray, rng: random.Random) -> list[int]:
    """Front order, then reference-direction niching inside the last front."""
    chosen: list[int] = []
    last: list[int] = []
    for front in fast_nondominated_sort(F):
        if len(chosen) + len(front) <= n:
            chosen.extend(front)
            if len(chosen) == n:
                return chosen
            continue
        last = front
        break
    if not last:
        return chosen

    pool = chosen + last
    Fn = _normalize(F[pool])
    niche, dist = associate(Fn, refs)
    counts = np.bincount(niche[: len(chosen)], minlength=refs.shape[0])
    members: dict[int, list[int]] = {}
    for k in range(len(chosen), len(pool)):
        members.setdefault(int(niche[k]), []).append(k)
    active = set(members)
    need = n - len(chosen)
    while need > 0:
        low = min(counts[j] for j in active)
        j = rng.choice(sorted(r for r in active if counts[r] == low))
        cands = members[j]
        if counts[j] == 0:
            pick = min(cands, key=lambda k: (dist[k], k))
        else:
            pick = cands[rng.randrange(len(cands))]
        cands.remove(pick)
        if not cands:
            active.discard(j)
        chosen.append(pool[pick])
        counts[j] += 1
        need -= 1
    return chosen
