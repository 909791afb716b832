import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mopath.errors import DimensionMismatch
from mopath.pareto import (
    ParetoArchive,
    crowding_distance,
    dominates,
    fast_nondominated_sort,
    non_dominated_filter,
    read_front,
    write_front,
)

from conftest import pairwise_filter

small = st.integers(0, 4).map(float)
vec5 = st.tuples(small, small, small, small, small)


def test_dominance_examples():
    assert dominates((1, 1, 1, 1, 1), (2, 1, 1, 1, 1))
    assert not dominates((1, 2), (2, 1)) and not dominates((2, 1), (1, 2))
    assert not dominates((3, 3), (3, 3))


def test_dominance_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        dominates((1, 2), (1, 2, 3))


@given(vec5, vec5, vec5)
def test_dominance_is_a_strict_partial_order(a, b, c):
    assert not dominates(a, a)
    if dominates(a, b):
        assert not dominates(b, a)
        if dominates(b, c):
            assert dominates(a, c)


def test_archive_examples():
    arc = ParetoArchive(n_obj=2)
    assert arc.insert((2, 2), "a") and len(arc) == 1
    assert not arc.insert((3, 3), "b") and arc.vectors == [(2.0, 2.0)]
    arc = ParetoArchive(n_obj=2)
    for v in [(1, 5), (2, 4), (3, 3), (4, 2), (5, 1)]:
        arc.insert(v)
    assert arc.insert((1.5, 2)) is True
    # dominates (2,4), (3,3) and (4,2)
    assert len(arc) == 3


def test_archive_first_payload_wins():
    arc = ParetoArchive(n_obj=2)
    arc.insert((1, 1), "first")
    assert not arc.insert((1, 1), "second")
    assert arc.payloads == ["first"]
    arc = ParetoArchive(n_obj=2, keep_all_payloads=True)
    arc.insert((1, 1), "first")
    arc.insert((1, 1), "second")
    assert arc.payloads == ["first"] and arc.payload_sets == [["first", "second"]]


def test_archive_rejects_wrong_width():
    with pytest.raises(DimensionMismatch):
        ParetoArchive(n_obj=5).insert((1, 2))


@settings(max_examples=150)
@given(st.lists(vec5, max_size=60))
def test_archive_is_antichain_and_matches_filter(points):
    arc = ParetoArchive()
    for i, p in enumerate(points):
        arc.insert(p, i)
    vs = arc.vectors
    assert len(set(vs)) == len(vs)
    assert not any(dominates(a, b) for a in vs for b in vs)
    assert sorted(vs) == pairwise_filter([tuple(map(float, p)) for p in points])
    # every point is weakly dominated by an archive member
    for p in points:
        assert any(all(a <= b for a, b in zip(v, p)) for v in vs)


@settings(max_examples=150)
@given(st.lists(vec5, max_size=60), st.integers(0, 60))
def test_batch_extend_equals_sequential_insert(points, cut):
    one = ParetoArchive()
    for i, p in enumerate(points):
        one.insert(p, i)
    two = ParetoArchive()
    two.extend(points[:cut], range(cut))
    two.extend(points[cut:], range(cut, len(points)))
    assert list(two) == list(one)


def test_filter_examples():
    assert non_dominated_filter([(1, 2), (2, 1), (2, 2)]) == [(1.0, 2.0), (2.0, 1.0)]
    assert non_dominated_filter([(3, 3, 3)] * 7) == [(3.0, 3.0, 3.0)]
    assert non_dominated_filter([]) == []


def test_filter_against_pairwise_oracle():
    rng = np.random.default_rng(11)
    pts = [tuple(r) for r in rng.integers(0, 6, size=(200, 5)).astype(float).tolist()]
    assert sorted(non_dominated_filter(pts)) == pairwise_filter(pts)


def test_sort_examples():
    assert fast_nondominated_sort([(1, 1), (2, 2), (3, 3)]) == [[0], [1], [2]]
    assert fast_nondominated_sort([(1, 3), (2, 2), (3, 1)]) == [[0, 1, 2]]


def test_first_front_matches_filter():
    rng = np.random.default_rng(5)
    pts = rng.random((100, 5))
    fronts = fast_nondominated_sort(pts)
    assert sorted(tuple(pts[i]) for i in fronts[0]) == sorted(non_dominated_filter(pts))


@settings(max_examples=100)
@given(st.lists(vec5, min_size=1, max_size=40))
def test_sort_properties(points):
    fronts = fast_nondominated_sort(points)
    assert sorted(i for f in fronts for i in f) == list(range(len(points)))
    rank = {i: r for r, f in enumerate(fronts) for i in f}
    for i, a in enumerate(points):
        for j, b in enumerate(points):
            if dominates(a, b):
                assert rank[i] < rank[j]
    for r in range(1, len(fronts)):
        for j in fronts[r]:
            assert any(dominates(points[i], points[j]) for i in fronts[r - 1])


def test_crowding_examples():
    assert np.all(np.isinf(crowding_distance([(0, 1), (1, 0)])))
    cd = crowding_distance([(0, 2), (1, 1), (2, 0)])
    assert math.isinf(cd[0]) and math.isinf(cd[2]) and cd[1] == 2.0
    # third objective constant: contributes nothing
    cd = crowding_distance([(0, 4, 7), (1, 2, 7), (2, 1, 7), (4, 0, 7)])
    assert cd[1] == pytest.approx((2 - 0) / 4 + (4 - 1) / 4)


def test_front_file_round_trip(tmp_path):
    rng = random.Random(2)
    arc = ParetoArchive()
    for i in range(30):
        arc.insert(tuple(rng.random() * 10 for _ in range(5)), tuple(range(i, i + 3)))
    base = str(tmp_path / "f")
    write_front(arc, base)
    lines = (tmp_path / "f.front.csv").read_text().splitlines()
    assert lines[0] == "f1,f2,f3,f4,f5" and len(lines) == len(arc) + 1
    back = read_front(base)
    assert back.vectors == arc.vectors
    assert back.payloads == arc.payloads


@settings(max_examples=100)
@given(st.lists(vec5, max_size=40), st.randoms(use_true_random=False))
def test_archive_order_independent(points, rnd):
    a, b = ParetoArchive(), ParetoArchive()
    for p in points:
        a.insert(p)
    shuffled = list(points)
    rnd.shuffle(shuffled)
    for p in shuffled:
        b.insert(p)
    assert a.vector_set() == b.vector_set()


@given(st.lists(vec5, max_size=40))
def test_filter_idempotent(points):
    once = non_dominated_filter(points)
    assert non_dominated_filter(once) == once


def peel_ranks(points):
    """Brute-force recursive peel: rank r is the non-dominated set of what is left."""
    left = set(range(len(points)))
    rank = {}
    r = 0
    while left:
        layer = {i for i in left if not any(dominates(points[j], points[i]) for j in left)}
        for i in layer:
            rank[i] = r
        left -= layer
        r += 1
    return rank


@settings(max_examples=200)
@given(st.lists(vec5, min_size=1, max_size=12))
def test_sort_matches_peel(points):
    fronts = fast_nondominated_sort(points)
    got = {i: r for r, f in enumerate(fronts) for i in f}
    assert got == peel_ranks(points)
    for f in fronts:
        assert not any(dominates(points[i], points[j]) for i in f for j in f)
