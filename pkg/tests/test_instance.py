import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mopath.errors import MalformedName, OutOfBounds
from mopath.instance import (
    ELEVATION_KINDS,
    NEIGHBOURHOODS,
    OBSTACLE_KINDS,
    InstanceSpec,
    all_specs,
    build_world,
    elevation_at,
    format_name,
    hill_components,
    is_obstacle,
    parse_name,
    peaks,
    road_weight,
    to_hill_domain,
    velocity_at,
)


def test_parse_chequerboard_name():
    s = parse_name("ASLETISMAC_CH_X10_Y10_P1_K2_BF")
    assert (s.obstacle_kind, s.size_x, s.size_y, s.elevation_kind) == ("CH", 10, 10, "P1")
    assert s.neighbourhood_k == 2 and s.backtracking is False


def test_parse_figure_instance():
    s = parse_name("ASLETISMAC_NO_X14_Y14_PM_K3_BF")
    assert s == InstanceSpec("NO", 14, 14, "PM", 3, False)


@pytest.mark.parametrize("bad", [
    "ASLETISMAC_XX_X10_Y10_P1_K2_BF",
    "ASLETISMAC_NO_X10_Y10_PX_K2_BF",
    "ASLETISMAC_NO_X10_Y10_P1_K4_BF",
    "ASLETISMAC_NO_X10_Y10_P1_K2",
    "ASLETISMAC_NO_X1_Y10_P1_K2_BF",
    "asletismac_NO_X10_Y10_P1_K2_BF",
    "",
])
def test_malformed_names(bad):
    with pytest.raises(MalformedName):
        parse_name(bad)


def test_format_examples():
    assert format_name(InstanceSpec("NO", 14, 14, "PM", 3, False)) == "ASLETISMAC_NO_X14_Y14_PM_K3_BF"
    assert format_name(InstanceSpec("LA", 8, 8, "P2", 2, True)) == "ASLETISMAC_LA_X8_Y8_P2_K2_BT"


def test_round_trip_all_families():
    for o, e, k, bt in itertools.product(OBSTACLE_KINDS, ELEVATION_KINDS, NEIGHBOURHOODS, (False, True)):
        spec = InstanceSpec(o, 10, 10, e, k, bt)
        assert parse_name(format_name(spec)) == spec


@given(st.sampled_from(OBSTACLE_KINDS), st.integers(2, 60), st.integers(2, 60),
       st.sampled_from(ELEVATION_KINDS), st.sampled_from(NEIGHBOURHOODS), st.booleans())
def test_round_trip_property(o, sx, sy, e, k, bt):
    spec = InstanceSpec(o, sx, sy, e, k, bt)
    assert parse_name(spec.name) == spec


def test_chequerboard_cells():
    spec = parse_name("ASLETISMAC_CH_X6_Y6_PM_K2_BF")
    assert is_obstacle(spec, 1, 1)
    assert not is_obstacle(spec, 0, 1)
    assert not is_obstacle(spec, 2, 4)
    # odd/odd cells, except the end cell (5, 5)
    grid = [[is_obstacle(spec, x, y) for x in range(6)] for y in range(6)]
    expected = [[x % 2 == 1 and y % 2 == 1 and (x, y) != (5, 5) for x in range(6)] for y in range(6)]
    assert grid == expected


def test_lake_centre_is_obstacle():
    assert is_obstacle(parse_name("ASLETISMAC_LA_X20_Y20_PM_K2_BF"), 10, 10)


@pytest.mark.parametrize("o", OBSTACLE_KINDS)
@pytest.mark.parametrize("size", [2, 3, 7, 10])
def test_corners_always_passable(o, size):
    spec = InstanceSpec(o, size, size, "PM", 2, False, lake_radius_ratio=0.9)
    assert not is_obstacle(spec, 0, 0)
    assert not is_obstacle(spec, size - 1, size - 1)


def test_out_of_bounds():
    spec = parse_name("ASLETISMAC_NO_X5_Y5_PM_K2_BF")
    with pytest.raises(OutOfBounds):
        is_obstacle(spec, 5, 0)
    with pytest.raises(OutOfBounds):
        velocity_at(spec, -1, 0)


def test_velocity_tiers():
    spec = parse_name("ASLETISMAC_NO_X10_Y10_PM_K2_BF")
    assert road_weight(0, 0) == 1.0
    assert velocity_at(spec, 0, 0) == 130
    # max(sin 4, cos 2) = max(-0.7568, -0.4161)
    assert math.isclose(road_weight(4, 2), max(math.sin(4), math.cos(2)))
    assert velocity_at(spec, 4, 2) == 50
    ch = parse_name("ASLETISMAC_CH_X10_Y10_PM_K2_BF")
    assert velocity_at(ch, 1, 1) == 0


@given(st.integers(0, 49), st.integers(0, 49))
def test_velocity_follows_weight(x, y):
    spec = InstanceSpec("NO", 50, 50, "PM", 2, False)
    w = max(math.sin(x), math.cos(y))
    expected = 130 if w > 0.9 else (50 if w < -0.4 else 100)
    assert velocity_at(spec, x, y) == expected


def test_peaks_at_origin():
    assert math.isclose(float(peaks(0.0, 0.0)), 8 / 3 * math.exp(-1), rel_tol=1e-12)
    spec = parse_name("ASLETISMAC_NO_X7_Y7_PM_K2_BF")
    assert math.isclose(elevation_at(spec, 3, 3), 0.9810, abs_tol=5e-5)


def test_first_hill_peak():
    # on a 5x5 grid u = 1.5x - 3, so x = 1 maps to -1.5
    spec = parse_name("ASLETISMAC_NO_X5_Y5_P1_K2_BF")
    assert to_hill_domain(spec, 1, 1) == (-1.5, -1.5)
    assert math.isclose(elevation_at(spec, 1, 1), 5.0, rel_tol=1e-12)


def test_p3_is_p2_plus_last_hill():
    p2 = build_world(parse_name("ASLETISMAC_NO_X9_Y9_P2_K2_BF"))
    p3 = build_world(parse_name("ASLETISMAC_NO_X9_Y9_P3_K2_BF"))
    spec = p3.spec
    xs, ys = np.meshgrid(np.arange(9), np.arange(9), indexing="ij")
    u, v = to_hill_domain(spec, xs, ys)
    h4 = hill_components("P3")[-1]
    np.testing.assert_allclose(p3.elevation, p2.elevation + h4(u, v), rtol=0, atol=1e-12)


def test_no_world_has_no_obstacles():
    w = build_world(parse_name("ASLETISMAC_NO_X10_Y10_PM_K2_BF"))
    assert w.velocity.shape == (10, 10)
    assert int(w.obstacles.sum()) == 0


def test_chequerboard_count_with_end_exemption():
    w = build_world(parse_name("ASLETISMAC_CH_X10_Y10_PM_K2_BF"))
    assert int(w.obstacles.sum()) == 24


def test_lake_membership_bruteforce():
    w = build_world(parse_name("ASLETISMAC_LA_X20_Y20_PM_K2_BF"))
    inside = {(x, y) for x in range(20) for y in range(20) if (x - 10) ** 2 + (y - 10) ** 2 < 25}
    got = {(x, y) for x in range(20) for y in range(20) if w.obstacles[x, y]}
    assert got == inside


def test_world_arrays_read_only():
    w = build_world(parse_name("ASLETISMAC_NO_X4_Y4_PM_K2_BF"))
    with pytest.raises(ValueError):
        w.velocity[0, 0] = 1.0


def test_all_specs_grid_size():
    assert len(list(all_specs(range(4, 7)))) == 72
