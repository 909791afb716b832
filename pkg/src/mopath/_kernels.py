"""Hot loops: exhaustive DFS with archive upkeep, dominance filtering, ranking.

Each kernel exists twice: a numba ``@njit`` version and a numpy/pure-Python
fallback.  Set ``MOPATH_DISABLE_NUMBA=1`` (or run without numba installed) to
force the fallbacks.  Both paths return identical results.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None

HAVE_NUMBA = njit is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("MOPATH_DISABLE_NUMBA", "").lower() not in (
    "1", "true", "yes", "on",
)


def _maybe_jit(fn):
    if not HAVE_NUMBA:
        return fn
    return njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------- dominance


@_maybe_jit
def _nondominated_mask_nb(F):
    n, m = F.shape
    keep = np.ones(n, dtype=np.bool_)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            weak = True
            equal = True
            for k in range(m):
                if F[j, k] > F[i, k]:
                    weak = False
                    break
                if F[j, k] != F[i, k]:
                    equal = False
            if weak and (not equal or j < i):
                keep[i] = False
                break
    return keep


def _nondominated_mask_np(F, block=256):
    n = F.shape[0]
    keep = np.ones(n, dtype=bool)
    idx = np.arange(n)
    for lo in range(0, n, block):
        sub = F[lo:lo + block]
        # weak[j, i]: row j weakly dominates row lo + i
        weak = np.all(F[:, None, :] <= sub[None, :, :], axis=2)
        equal = np.all(F[:, None, :] == sub[None, :, :], axis=2)
        strict = weak & ~equal
        earlier_dup = equal & (idx[:, None] < (lo + np.arange(sub.shape[0]))[None, :])
        keep[lo:lo + block] = ~np.any(strict | earlier_dup, axis=0)
    return keep


def nondominated_mask(F) -> np.ndarray:
    """Mask of rows not dominated by any other row.

    Among identical rows only the first is kept.
    """
    F = np.ascontiguousarray(F, dtype=np.float64)
    if F.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return _nondominated_mask_nb(F) if USE_NUMBA else _nondominated_mask_np(F)


@_maybe_jit
def _ranks_nb(F):
    n, m = F.shape
    dom_count = np.zeros(n, dtype=np.int64)
    dominated = np.zeros((n, n), dtype=np.bool_)
    for i in range(n):
        for j in range(i + 1, n):
            i_le = True
            j_le = True
            for k in range(m):
                if F[i, k] > F[j, k]:
                    i_le = False
                elif F[i, k] < F[j, k]:
                    j_le = False
            if i_le and not j_le:
                dominated[i, j] = True
                dom_count[j] += 1
            elif j_le and not i_le:
                dominated[j, i] = True
                dom_count[i] += 1
    rank = np.full(n, -1, dtype=np.int64)
    current = np.empty(n, dtype=np.int64)
    nxt = np.empty(n, dtype=np.int64)
    size = 0
    for i in range(n):
        if dom_count[i] == 0:
            current[size] = i
            size += 1
            rank[i] = 0
    r = 0
    while size > 0:
        nsize = 0
        for a in range(size):
            p = current[a]
            for q in range(n):
                if dominated[p, q]:
                    dom_count[q] -= 1
                    if dom_count[q] == 0:
                        rank[q] = r + 1
                        nxt[nsize] = q
                        nsize += 1
        r += 1
        for a in range(nsize):
            current[a] = nxt[a]
        size = nsize
    return rank


def _ranks_np(F):
    n = F.shape[0]
    le = np.all(F[:, None, :] <= F[None, :, :], axis=2)
    lt = np.any(F[:, None, :] < F[None, :, :], axis=2)
    dominated = le & lt  # [i, j]: i dominates j
    count = dominated.sum(axis=0)
    rank = np.full(n, -1, dtype=np.int64)
    front = np.flatnonzero(count == 0)
    r = 0
    while front.size:
        rank[front] = r
        count = count - dominated[front].sum(axis=0)
        count[rank >= 0] = -1
        front = np.flatnonzero(count == 0)
        r += 1
    return rank


def nondominated_ranks(F) -> np.ndarray:
    """Front index (0 = non-dominated) of every row."""
    F = np.ascontiguousarray(F, dtype=np.float64)
    if F.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return _ranks_nb(F) if USE_NUMBA else _ranks_np(F)


@_maybe_jit
def _merge_nb(A, B):
    na, m = A.shape
    nb = B.shape[0]
    keep_a = np.ones(na, dtype=np.bool_)
    accept_b = np.ones(nb, dtype=np.bool_)
    for i in range(nb):
        for j in range(na):
            weak = True
            for k in range(m):
                if A[j, k] > B[i, k]:
                    weak = False
                    break
            if weak:
                accept_b[i] = False
                break
        if not accept_b[i]:
            continue
        for j in range(nb):
            if j == i:
                continue
            weak = True
            equal = True
            for k in range(m):
                if B[j, k] > B[i, k]:
                    weak = False
                    break
                if B[j, k] != B[i, k]:
                    equal = False
            if weak and (not equal or j < i):
                accept_b[i] = False
                break
    for j in range(na):
        for i in range(nb):
            if not accept_b[i]:
                continue
            weak = True
            for k in range(m):
                if B[i, k] > A[j, k]:
                    weak = False
                    break
            if weak:
                keep_a[j] = False
                break
    return keep_a, accept_b


def _merge_np(A, B):
    if A.shape[0]:
        covered = np.any(np.all(A[:, None, :] <= B[None, :, :], axis=2), axis=0)
    else:
        covered = np.zeros(B.shape[0], dtype=bool)
    accept_b = ~covered & _nondominated_mask_np(B) if B.shape[0] else covered
    if A.shape[0] and accept_b.any():
        keep_a = ~np.any(np.all(B[accept_b][:, None, :] <= A[None, :, :], axis=2), axis=0)
    else:
        keep_a = np.ones(A.shape[0], dtype=bool)
    return keep_a, accept_b


def archive_merge(A, B):
    """Fold the rows of ``B`` (in order) into the antichain ``A``.

    Returns ``(keep_a, accept_b)``: which archive rows survive and which new
    rows enter.  Equivalent to inserting the rows of ``B`` one at a time.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    if B.shape[0] == 0:
        return np.ones(A.shape[0], dtype=bool), np.zeros(0, dtype=bool)
    if USE_NUMBA:
        return _merge_nb(A.reshape(-1, B.shape[1]), B)
    return _merge_np(A.reshape(-1, B.shape[1]), B)


# ---------------------------------------------------------------- enumeration

N_OBJ = 5


@_maybe_jit
def _dfs_nb(indptr, indices, xs, ys, vel, elev, dweight, rclass, node_weight,
            can_reach, end, prefix, budget, keep_archive):
    n = xs.shape[0]
    same_delay = np.array([3.0, 1.0, 0.2])
    path = np.empty(n, dtype=np.int64)
    it = np.empty(n, dtype=np.int64)
    onpath = np.zeros(n, dtype=np.bool_)
    sums = np.zeros((n + 1, N_OBJ))
    cap = 64
    arch_f = np.empty((cap, N_OBJ))
    arch_p = np.empty((cap, n), dtype=np.int64)
    arch_len = np.empty(cap, dtype=np.int64)
    na = 0
    count = 0
    aborted = False
    fvec = np.empty(N_OBJ)

    base = prefix.shape[0] - 1
    for d in range(prefix.shape[0]):
        path[d] = prefix[d]
        onpath[prefix[d]] = True
    # prefix partial sums, same arithmetic as the main loop
    for d in range(1, prefix.shape[0]):
        u = path[d - 1]
        v = path[d]
        dx = xs[v] - xs[u]
        dy = ys[v] - ys[u]
        dist = math.sqrt(dx * dx + dy * dy)
        sums[d, 0] = sums[d - 1, 0] + dist
        if node_weight:
            sums[d, 1] = sums[d - 1, 1] + dweight[v]
        elif rclass[u] != rclass[v]:
            sums[d, 1] = sums[d - 1, 1] + 2.0
        else:
            sums[d, 1] = sums[d - 1, 1] + same_delay[rclass[u]]
        dh = elev[v] - elev[u]
        sums[d, 2] = sums[d - 1, 2] + (dh if dh > 0.0 else 0.0)
        sums[d, 3] = sums[d - 1, 3] + 2.0 * dist / (vel[u] + vel[v])
        ang = 0.0
        if d > 1:
            w = path[d - 2]
            ax = xs[u] - xs[w]
            ay = ys[u] - ys[w]
            ang = math.atan2(abs(ax * dy - ay * dx), ax * dx + ay * dy)
        sums[d, 4] = sums[d - 1, 4] + ang

    depth = base
    if path[depth] == end:
        # the prefix itself is a complete path
        depth = -1
        if budget != 0:
            count = 1
            if keep_archive:
                for k in range(N_OBJ):
                    arch_f[0, k] = sums[base, k]
                for d in range(base + 1):
                    arch_p[0, d] = path[d]
                arch_len[0] = base + 1
                na = 1
        else:
            aborted = True
    else:
        it[depth] = indptr[path[depth]]

    while depth >= base:
        u = path[depth]
        p = it[depth]
        if p >= indptr[u + 1]:
            onpath[u] = False
            depth -= 1
            continue
        it[depth] = p + 1
        v = indices[p]
        if onpath[v] or not can_reach[v]:
            continue
        nd = depth + 1
        dx = xs[v] - xs[u]
        dy = ys[v] - ys[u]
        dist = math.sqrt(dx * dx + dy * dy)
        sums[nd, 0] = sums[depth, 0] + dist
        if node_weight:
            sums[nd, 1] = sums[depth, 1] + dweight[v]
        elif rclass[u] != rclass[v]:
            sums[nd, 1] = sums[depth, 1] + 2.0
        else:
            sums[nd, 1] = sums[depth, 1] + same_delay[rclass[u]]
        dh = elev[v] - elev[u]
        sums[nd, 2] = sums[depth, 2] + (dh if dh > 0.0 else 0.0)
        sums[nd, 3] = sums[depth, 3] + 2.0 * dist / (vel[u] + vel[v])
        ang = 0.0
        if depth > 0:
            w = path[depth - 1]
            ax = xs[u] - xs[w]
            ay = ys[u] - ys[w]
            ang = math.atan2(abs(ax * dy - ay * dx), ax * dx + ay * dy)
        sums[nd, 4] = sums[depth, 4] + ang

        if v != end:
            path[nd] = v
            onpath[v] = True
            it[nd] = indptr[v]
            depth = nd
            continue

        if budget >= 0 and count >= budget:
            aborted = True
            break
        count += 1
        if not keep_archive:
            continue
        for k in range(N_OBJ):
            fvec[k] = sums[nd, k]
        rejected = False
        for i in range(na):
            weak = True
            for k in range(N_OBJ):
                if arch_f[i, k] > fvec[k]:
                    weak = False
                    break
            if weak:
                rejected = True
                break
        if rejected:
            continue
        j = 0
        for i in range(na):
            covered = True
            for k in range(N_OBJ):
                if fvec[k] > arch_f[i, k]:
                    covered = False
                    break
            if covered:
                continue
            if i != j:
                for k in range(N_OBJ):
                    arch_f[j, k] = arch_f[i, k]
                ln = arch_len[i]
                for d in range(ln):
                    arch_p[j, d] = arch_p[i, d]
                arch_len[j] = ln
            j += 1
        na = j
        if na == cap:
            cap *= 2
            nf = np.empty((cap, N_OBJ))
            npth = np.empty((cap, n), dtype=np.int64)
            nl = np.empty(cap, dtype=np.int64)
            nf[:na] = arch_f[:na]
            npth[:na] = arch_p[:na]
            nl[:na] = arch_len[:na]
            arch_f = nf
            arch_p = npth
            arch_len = nl
        for k in range(N_OBJ):
            arch_f[na, k] = fvec[k]
        for d in range(nd):
            arch_p[na, d] = path[d]
        arch_p[na, nd] = v
        arch_len[na] = nd + 1
        na += 1

    return count, aborted, arch_f[:na].copy(), arch_p[:na].copy(), arch_len[:na].copy()


def _dfs_py(graph, prefix, budget, keep_archive):
    """Fallback for :func:`dfs_front` built on the Python path iterator."""
    from .enumeration import iter_paths
    from .pareto import ParetoArchive

    archive = ParetoArchive()
    count = 0
    aborted = False
    for path, vec in iter_paths(graph, prefix=prefix):
        if budget >= 0 and count >= budget:
            aborted = True
            break
        count += 1
        if keep_archive:
            archive.insert(vec, path)
    return count, aborted, archive


def dfs_front(graph, prefix=None, budget=-1, keep_archive=True):
    """Enumerate simple paths extending ``prefix`` and keep their front.

    Returns ``(paths_visited, aborted, archive)`` with a
    :class:`~mopath.pareto.ParetoArchive` whose payloads are node tuples.
    """
    from .graph import NODE_WEIGHT
    from .pareto import ParetoArchive

    if prefix is None:
        prefix = (graph.start,)
    if not USE_NUMBA:
        return _dfs_py(graph, tuple(prefix), budget, keep_archive)
    count, aborted, F, P, L = _dfs_nb(
        graph.indptr, graph.indices, graph.x, graph.y, graph.velocity, graph.elevation,
        graph.delay_weight, graph.road_classes, graph.delay_model == NODE_WEIGHT,
        graph.can_reach_end, graph.end, np.asarray(prefix, dtype=np.int64),
        int(budget), bool(keep_archive),
    )
    paths = [tuple(p[:ln].tolist()) for p, ln in zip(P, L)]
    archive = ParetoArchive.from_arrays(F.reshape(-1, N_OBJ), paths)
    return int(count), bool(aborted), archive
