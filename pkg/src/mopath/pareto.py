"""Pareto dominance, archives, non-dominated sorting and crowding distance."""

from __future__ import annotations

import csv
import json
from typing import Any, Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import DimensionMismatch


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True iff ``a`` is no worse than ``b`` everywhere and differs somewhere."""
    if len(a) != len(b):
        raise DimensionMismatch(f"cannot compare {len(a)}-d and {len(b)}-d vectors")
    strictly = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strictly = True
    return strictly


class ParetoArchive:
    """Unbounded set of mutually non-dominated objective vectors with payloads.

    Equal vectors collapse into one entry; the first payload wins unless
    ``keep_all_payloads`` is set, in which case every payload for that vector
    is retained in ``payload_sets``.
    """

    def __init__(self, n_obj: int = 5, keep_all_payloads: bool = False):
        self.n_obj = n_obj
        self.keep_all_payloads = keep_all_payloads
        self._F = np.empty((0, n_obj))
        self._vectors: list[tuple[float, ...]] = []
        self._payloads: list[Any] = []
        self.payload_sets: list[list[Any]] = []

    def __len__(self):
        return len(self._vectors)

    def __iter__(self):
        return iter(zip(self._vectors, self._payloads))

    def __repr__(self):
        return f"ParetoArchive(size={len(self)})"

    @property
    def vectors(self) -> list[tuple[float, ...]]:
        return list(self._vectors)

    @property
    def payloads(self) -> list[Any]:
        return list(self._payloads)

    def as_array(self) -> np.ndarray:
        return self._F.copy()

    def vector_set(self) -> set[tuple[float, ...]]:
        return set(self._vectors)

    @classmethod
    def from_arrays(cls, F, payloads) -> ParetoArchive:
        """Wrap rows already known to form an antichain of distinct vectors."""
        F = np.asarray(F, dtype=float)
        new = cls(n_obj=F.shape[1])
        new._F = F.copy()
        new._vectors = [tuple(row) for row in F.tolist()]
        new._payloads = list(payloads)
        new.payload_sets = [[p] for p in new._payloads]
        return new

    def _append(self, vec, payload) -> None:
        self._vectors.append(vec)
        self._payloads.append(payload)
        self.payload_sets.append([payload])
        self._F = np.vstack([self._F, np.asarray(vec, dtype=float)[None, :]])

    def _keep(self, mask: np.ndarray) -> None:
        if mask.all():
            return
        idx = np.flatnonzero(mask).tolist()
        self._vectors = [self._vectors[i] for i in idx]
        self._payloads = [self._payloads[i] for i in idx]
        self.payload_sets = [self.payload_sets[i] for i in idx]
        self._F = self._F[mask]

    def insert(self, vec: Sequence[float], payload: Any = None) -> bool:
        """Add ``vec`` unless it is dominated by or equal to an entry."""
        vec = tuple(float(v) for v in vec)
        if len(vec) != self.n_obj:
            raise DimensionMismatch(f"expected {self.n_obj} objectives, got {len(vec)}")
        v = np.asarray(vec)
        if len(self._vectors):
            weak = np.all(self._F <= v, axis=1)
            if weak.any():
                if self.keep_all_payloads:
                    same = np.flatnonzero(weak & np.all(self._F == v, axis=1))
                    if same.size:
                        self.payload_sets[int(same[0])].append(payload)
                return False
            self._keep(~np.all(v <= self._F, axis=1))
        self._append(vec, payload)
        return True

    def extend(self, vectors, payloads: Iterable[Any] | None = None) -> np.ndarray:
        """Insert many vectors; same result as inserting them one by one.

        Returns the mask of accepted vectors.
        """
        B = np.asarray(vectors, dtype=float).reshape(-1, self.n_obj)
        payloads = list(payloads) if payloads is not None else [None] * B.shape[0]
        if self.keep_all_payloads:
            return np.array([self.insert(b, p) for b, p in zip(B, payloads)], dtype=bool)
        keep_a, accept_b = _kernels.archive_merge(self._F, B)
        self._keep(keep_a)
        for i in np.flatnonzero(accept_b).tolist():
            self._vectors.append(tuple(B[i].tolist()))
            self._payloads.append(payloads[i])
            self.payload_sets.append([payloads[i]])
        if accept_b.any():
            self._F = np.vstack([self._F, B[accept_b]])
        return accept_b

    def merge(self, other: ParetoArchive) -> None:
        self.extend(other._F, other._payloads)

    def copy(self) -> ParetoArchive:
        new = ParetoArchive(self.n_obj, self.keep_all_payloads)
        new._F = self._F.copy()
        new._vectors = list(self._vectors)
        new._payloads = list(self._payloads)
        new.payload_sets = [list(s) for s in self.payload_sets]
        return new


def archive_insert(archive: ParetoArchive, v, payload=None) -> bool:
    return archive.insert(v, payload)


def non_dominated_filter(points) -> list[tuple[float, ...]]:
    """Distinct non-dominated vectors of ``points`` in first-seen order."""
    F = np.asarray(points, dtype=float)
    if F.size == 0:
        return []
    F = F.reshape(len(points), -1)
    mask = _kernels.nondominated_mask(F)
    return [tuple(row) for row in F[mask].tolist()]


def fast_nondominated_sort(points) -> list[list[int]]:
    """Partition indices of ``points`` into successive non-dominated fronts."""
    F = np.asarray(points, dtype=float)
    if F.size == 0:
        return []
    ranks = _kernels.nondominated_ranks(F.reshape(len(points), -1))
    return [np.flatnonzero(ranks == r).tolist() for r in range(int(ranks.max()) + 1)]


def crowding_distance(front) -> np.ndarray:
    """NSGA-II crowding distance of every member of one front.

    Boundary points get ``inf``; an objective with zero range adds nothing.
    """
    F = np.asarray(front, dtype=float)
    n = F.shape[0]
    if n <= 2:
        return np.full(n, np.inf)
    F = F.reshape(n, -1)
    dist = np.zeros(n)
    for k in range(F.shape[1]):
        order = np.argsort(F[:, k], kind="stable")
        col = F[order, k]
        span = col[-1] - col[0]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist


# ---------------------------------------------------------------- files

FRONT_HEADER = ["f1", "f2", "f3", "f4", "f5"]


def write_front(archive: ParetoArchive, basename: str, labels=None) -> tuple[str, str]:
    """Write ``<basename>.front.csv`` and the row-aligned ``<basename>.set.json``.

    ``labels`` optionally maps dense node ids to file ids.
    """
    csv_path = f"{basename}.front.csv"
    set_path = f"{basename}.set.json"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FRONT_HEADER[:archive.n_obj])
        for vec in archive.vectors:
            writer.writerow([repr(float(v)) for v in vec])
    paths = []
    for p in archive.payloads:
        nodes = list(p) if p is not None else []
        if labels is not None:
            nodes = [int(labels[u]) for u in nodes]
        paths.append([int(u) for u in nodes])
    with open(set_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(paths, fh)
        fh.write("\n")
    return csv_path, set_path


def read_front_csv(path) -> list[tuple[float, ...]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or not header or not all(h.strip().startswith("f") for h in header):
            raise ValueError(f"{path}: missing f1,...,fm header")
        rows = [tuple(float(v) for v in row) for row in reader if row]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"{path}: ragged row")
    return rows


def read_front(basename: str) -> ParetoArchive:
    """Load a front written by :func:`write_front` (paths optional)."""
    csv_path = basename if basename.endswith(".csv") else f"{basename}.front.csv"
    rows = read_front_csv(csv_path)
    set_path = csv_path[: -len(".front.csv")] + ".set.json" if csv_path.endswith(".front.csv") else None
    paths: list = [None] * len(rows)
    if set_path:
        try:
            with open(set_path, encoding="utf-8") as fh:
                paths = [tuple(p) for p in json.load(fh)]
        except FileNotFoundError:
            pass
    archive = ParetoArchive(n_obj=len(rows[0]) if rows else 5)
    for vec, p in zip(rows, paths):
        archive.insert(vec, p)
    return archive
