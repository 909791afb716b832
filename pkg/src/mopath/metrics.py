"""Quality indicator, significance testing and run summaries."""

from __future__ import annotations

import csv
import io
import math
import statistics
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DimensionMismatch, EmptySet

EXACT_MWU_BELOW = 8


def _as_front(points, what: str) -> np.ndarray:
    F = np.asarray(points, dtype=float)
    if F.size == 0:
        raise EmptySet(f"{what} set is empty")
    return F.reshape(len(points), -1) if F.ndim == 1 else F


def igd_plus_distances(reference, approx) -> np.ndarray:
    """Per reference point, the smallest clipped-excess distance to ``approx``."""
    R = _as_front(reference, "reference")
    A = _as_front(approx, "approximation")
    if R.shape[1] != A.shape[1]:
        raise DimensionMismatch(f"reference is {R.shape[1]}-d, approximation {A.shape[1]}-d")
    best = np.full(R.shape[0], np.inf)
    for lo in range(0, A.shape[0], 512):
        excess = np.maximum(A[None, lo:lo + 512, :] - R[:, None, :], 0.0)
        best = np.minimum(best, np.sqrt((excess**2).sum(axis=2)).min(axis=1))
    return best


def igd_plus(reference, approx) -> float:
    """IGD+ of ``approx`` against ``reference`` in raw (unnormalized) objective space."""
    return float(igd_plus_distances(reference, approx).mean())


class IGDPlusTracker:
    """IGD+ of an ever-growing archive, updated from new points only.

    Removing archive points that a newcomer dominates never raises any
    reference point's distance, so the running minimum over every point ever
    added equals the IGD+ of the current archive.
    """

    def __init__(self, reference):
        self.reference = _as_front(reference, "reference")
        self._best = np.full(self.reference.shape[0], np.inf)

    def update(self, points) -> float:
        if len(points):
            self._best = np.minimum(self._best, igd_plus_distances(self.reference, points))
        return self.value

    @property
    def value(self) -> float:
        return float(self._best.mean())


# ---------------------------------------------------------------- Mann-Whitney U


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    i = 0
    n = len(values)
    while i < n:
        j = i
        while j + 1 < n and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _exact_u_distribution(doubled_ranks: list[int], n_a: int) -> dict[int, int]:
    """Counts of doubled rank sums over all size-``n_a`` subsets of the pool."""
    # dp[k] maps doubled rank sum -> number of k-subsets
    dp: list[dict[int, int]] = [dict() for _ in range(n_a + 1)]
    dp[0][0] = 1
    for r in doubled_ranks:
        for k in range(min(n_a, len(doubled_ranks)) - 1, -1, -1):
            row = dp[k]
            if not row:
                continue
            nxt = dp[k + 1]
            for s, c in row.items():
                nxt[s + r] = nxt.get(s + r, 0) + c
    return dp[n_a]


def mann_whitney_u(a, b, method: str = "auto") -> tuple[float, float]:
    """Two-sided Mann-Whitney U test.

    Returns ``(U_a, p)`` where ``U_a`` counts pairs with ``a > b`` (ties count
    one half).  ``method='auto'`` uses the exact null distribution when the
    smaller sample has fewer than 8 values, otherwise the normal approximation
    with tie and continuity corrections.  Samples with a single common value
    get ``p = 1``.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    n_a, n_b = len(a), len(b)
    if n_a == 0 or n_b == 0:
        raise EmptySet("both samples need at least one value")
    pooled = np.concatenate([a, b])
    ranks = _midranks(pooled)
    u = float(ranks[:n_a].sum() - n_a * (n_a + 1) / 2)
    if np.all(pooled == pooled[0]):
        return u, 1.0
    if method == "auto":
        method = "exact" if min(n_a, n_b) < EXACT_MWU_BELOW else "asymptotic"

    if method == "exact":
        doubled = [int(round(2 * r)) for r in ranks]
        dist = _exact_u_distribution(doubled, n_a)
        total = sum(dist.values())
        obs = int(round(2 * ranks[:n_a].sum()))
        lower = sum(c for s, c in dist.items() if s <= obs)
        upper = sum(c for s, c in dist.items() if s >= obs)
        p = min(1.0, 2 * min(lower, upper) / total)
        return u, p
    if method != "asymptotic":
        raise ValueError(f"unknown method {method!r}")

    n = n_a + n_b
    mu = n_a * n_b / 2
    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float((counts**3 - counts).sum()) / (n * (n - 1))
    sigma = math.sqrt(n_a * n_b / 12 * ((n + 1) - tie_term))
    if sigma == 0:
        return u, 1.0
    z = max(abs(u - mu) - 0.5, 0.0) / sigma
    return u, min(1.0, math.erfc(z / math.sqrt(2)))


def exact_u_pvalue_bruteforce(a, b) -> float:
    """Two-sided exact p by enumerating every relabelling (small samples only)."""
    pooled = np.concatenate([np.asarray(a, float), np.asarray(b, float)])
    ranks = _midranks(pooled)
    n_a = len(a)
    obs = ranks[:n_a].sum()
    sums = [ranks[list(c)].sum() for c in combinations(range(len(pooled)), n_a)]
    lo = sum(1 for s in sums if s <= obs + 1e-9)
    hi = sum(1 for s in sums if s >= obs - 1e-9)
    return min(1.0, 2 * min(lo, hi) / len(sums))


# ---------------------------------------------------------------- summaries


@dataclass(frozen=True)
class StatSummary:
    median: float
    iqr: float
    n: int


def summarize(sample) -> StatSummary:
    """Median and Tukey-hinge IQR (halves include the median for odd n)."""
    s = sorted(float(v) for v in sample)
    n = len(s)
    if n == 0:
        raise EmptySet("cannot summarize an empty sample")
    half = (n + 1) // 2
    q1 = statistics.median(s[:half])
    q3 = statistics.median(s[n - half:])
    return StatSummary(statistics.median(s), q3 - q1, n)


def fmt5(value: float) -> str:
    return f"{value:.5g}"


@dataclass
class ComparisonRow:
    config: str
    summary: StatSummary
    p_value: float | None
    significant: bool
    best: bool

    def cell(self) -> str:
        median = fmt5(self.summary.median)
        if self.best:
            median = f"[{median}]"
        return f"{median} ({fmt5(self.summary.iqr)})" + ("*" if self.significant else "")


def significance_table(per_config_samples: dict, alpha: float = 0.01) -> list[ComparisonRow]:
    """Compare every config against the one with the lowest median.

    A config is flagged when the two-sided Mann-Whitney p-value against the
    best one is below ``alpha``.
    """
    if len(per_config_samples) < 2:
        raise ValueError("need at least two configurations to compare")
    summaries = {name: summarize(s) for name, s in per_config_samples.items()}
    best = min(summaries, key=lambda k: summaries[k].median)
    rows = []
    for name, sample in per_config_samples.items():
        if name == best:
            rows.append(ComparisonRow(name, summaries[name], None, False, True))
            continue
        _, p = mann_whitney_u(per_config_samples[best], sample)
        rows.append(ComparisonRow(name, summaries[name], p, p < alpha, False))
    return rows


def table_text(rows: list[ComparisonRow], label: str = "") -> str:
    """Aligned plain-text table: one column per config, ``median (IQR)`` cells.

    The best config's median is bracketed; ``*`` marks significance.
    """
    headers = [""] + [r.config for r in rows]
    cells = [label] + [r.cell() for r in rows]
    widths = [max(len(h), len(c)) for h, c in zip(headers, cells)]
    line1 = "  ".join(h.rjust(w) for h, w in zip(headers, widths))
    line2 = "  ".join(c.rjust(w) for c, w in zip(cells, widths))
    return line1.rstrip() + "\n" + line2.rstrip() + "\n"


def table_csv(rows: list[ComparisonRow], label: str = "") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["instance", "config", "median", "iqr", "n", "p_value", "significant", "best"])
    for r in rows:
        writer.writerow([
            label, r.config, repr(r.summary.median), repr(r.summary.iqr), r.summary.n,
            "" if r.p_value is None else repr(r.p_value), int(r.significant), int(r.best),
        ])
    return buf.getvalue()
