import math

import pytest
from hypothesis import settings

from mopath.graph import graph_from_name
from mopath.objectives import evaluate

# wall-clock deadlines only add flakiness on a loaded single-core box
settings.register_profile("repo", deadline=None)
settings.load_profile("repo")


def all_simple_paths(graph):
    """Every simple start-to-end path by plain recursion (independent of the kernels)."""
    adj = graph.adjacency
    out = []
    path = [graph.start]
    on = {graph.start}

    def walk(u):
        if u == graph.end:
            out.append(tuple(path))
            return
        for v in adj[u]:
            if v not in on:
                on.add(v)
                path.append(v)
                walk(v)
                path.pop()
                on.discard(v)

    walk(graph.start)
    return out


def pairwise_filter(vectors):
    """O(n^2) non-dominated filter, duplicates collapsed."""
    uniq = sorted(set(vectors))
    keep = []
    for a in uniq:
        dominated = any(
            all(bi <= ai for ai, bi in zip(a, b)) and b != a for b in uniq
        )
        if not dominated:
            keep.append(a)
    return keep


def brute_front(graph):
    return pairwise_filter([evaluate(p, graph) for p in all_simple_paths(graph)])


def key12(vec):
    return tuple(f"{v:.12g}" for v in vec)


@pytest.fixture(scope="session")
def tiny_graph():
    return graph_from_name("ASLETISMAC_NO_X4_Y4_PM_K2_BF")


@pytest.fixture
def isclose():
    return lambda a, b, tol=1e-12: math.isclose(a, b, rel_tol=0, abs_tol=tol)


_ACCEPTANCE: list[str] = []


@pytest.fixture
def verdict():
    """Record one acceptance line; the summary prints them all after the run."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
