import math
import random

import pytest
from hypothesis import given, strategies as st

from adaptive_pursuit.controller import (
    ControllerConfig,
    ackermann_steering,
    compute_command,
    curvature,
    pursuit_alpha,
    speed_for_lookahead,
)
from adaptive_pursuit.errors import DegenerateGoal, NonpositiveLookahead, NonpositiveWheelbase

from conftest import circle

CFG = ControllerConfig()


@pytest.mark.parametrize(
    "pose, goal, expected",
    [
        ((0, 0, 0), (1, 0), 0.0),
        ((0, 0, 0), (1, 1), math.pi / 4),
        ((0, 0, math.pi / 2), (0, 2), 0.0),
        ((0, 0, 0), (-1, 0), math.pi),
    ],
)
def test_alpha(pose, goal, expected):
    assert pursuit_alpha(pose, goal) == pytest.approx(expected, abs=1e-15)


def test_alpha_degenerate():
    with pytest.raises(DegenerateGoal):
        pursuit_alpha((1, 1, 0), (1, 1))


def test_curvature_examples():
    assert curvature(0.0, 1.7) == 0.0
    assert curvature(math.pi / 6, 1.0) == pytest.approx(1.0, abs=1e-15)
    assert curvature(math.pi / 2, 2.0) == 1.0
    with pytest.raises(NonpositiveLookahead):
        curvature(0.1, 0.0)


def test_ackermann_examples(derived):
    assert ackermann_steering(0.0, 1.0, 0.325) == 0.0
    ref = derived["ackermann_L0325_alpha_pi6_ld1"]
    assert ackermann_steering(math.pi / 6, 1.0, 0.325) == pytest.approx(ref["value"], abs=ref["abs_tol"])
    with pytest.raises(NonpositiveLookahead):
        ackermann_steering(0.1, -1.0, 0.325)
    with pytest.raises(NonpositiveWheelbase):
        ackermann_steering(0.1, 1.0, 0.0)


def test_ackermann_is_atan_of_curvature_times_wheelbase():
    rng = random.Random(7)
    for _ in range(1000):
        a = rng.uniform(-math.pi, math.pi)
        ld = rng.uniform(0.05, 5.0)
        assert ackermann_steering(a, ld, 0.325) == pytest.approx(
            math.atan(curvature(a, ld) * 0.325), abs=1e-12
        )


def test_speed_law_endpoints_and_midpoint():
    assert speed_for_lookahead(CFG.l_min, CFG) == CFG.v_min
    assert speed_for_lookahead(CFG.l_max, CFG) == CFG.v_max
    mid = speed_for_lookahead((CFG.l_min + CFG.l_max) / 2, CFG)
    assert mid == pytest.approx((CFG.v_min + CFG.v_max) / 2)
    assert speed_for_lookahead(0.1, CFG) == CFG.v_min
    assert speed_for_lookahead(10.0, CFG) == CFG.v_max


@given(st.floats(0.01, 10), st.floats(0.01, 10))
def test_speed_law_monotone(a, b):
    lo, hi = sorted((a, b))
    assert speed_for_lookahead(lo, CFG) <= speed_for_lookahead(hi, CFG)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"wheelbase_L": 0.0},
        {"max_steer": -0.1},
        {"v_min": 0.0},
        {"v_min": 3.0, "v_max": 2.0},
        {"accel_limit": 0.0},
        {"l_min": 2.0, "l_max": 1.0},
        {"l_min": 0.0},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        ControllerConfig(**kwargs)


def test_command_straight_segment(unit_square):
    cmd = compute_command((0.1, 0.0, 0.0), unit_square, 0.5, CFG)
    assert cmd.steering == 0.0
    assert cmd.curvature == 0.0
    assert cmd.goal == pytest.approx((0.6, 0.0))


@pytest.mark.parametrize("ld", [0.5, 1.0, 1.5, 2.0, 4.0])
def test_command_on_circle(circle_1000, derived, ld):
    ref = derived["on_circle_curvature_R3"]
    w = circle_1000.waypoints[137]
    tangent = math.atan2(w.y, w.x) + math.pi / 2
    cmd = compute_command((w.x, w.y, tangent), circle_1000, ld, CFG)
    assert cmd.curvature == pytest.approx(ref["value"], abs=ref["abs_tol"])


def test_command_clamps(unit_square):
    # goal almost directly to the left: raw steering far above the limit
    cmd = compute_command((0.5, 0.0, -math.pi / 2), unit_square, 0.6, CFG)
    assert abs(ackermann_steering(cmd.alpha, 0.6, CFG.wheelbase_L)) > CFG.max_steer
    assert cmd.steering == CFG.max_steer
    cmd = compute_command((0.5, 0.0, math.pi / 2), unit_square, 0.6, CFG)
    assert cmd.steering == -CFG.max_steer


@given(st.floats(0.01, 5), st.floats(-5, 5))
def test_mirror_negates(gx, gy):
    if math.hypot(gx, gy) < 1e-6:
        return
    a = pursuit_alpha((0, 0, 0), (gx, gy))
    b = pursuit_alpha((0, 0, 0), (gx, -gy))
    if abs(a) == math.pi:
        return
    assert b == -a
    assert curvature(b, 1.3) == -curvature(a, 1.3)
    assert ackermann_steering(b, 1.3, 0.325) == -ackermann_steering(a, 1.3, 0.325)


@given(st.floats(0, 2 * math.pi), st.floats(0.1, 3), st.floats(0.01, 1.5))
def test_mirror_any_heading(phi, dist, bearing):
    goal = (dist * math.cos(phi + bearing), dist * math.sin(phi + bearing))
    mirrored = (dist * math.cos(phi - bearing), dist * math.sin(phi - bearing))
    a = pursuit_alpha((0, 0, phi), goal)
    b = pursuit_alpha((0, 0, phi), mirrored)
    assert b == pytest.approx(-a, abs=1e-12)


@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.floats(0.2, 3))
def test_steering_increasing_in_alpha(a, b, ld):
    if a == b:
        return
    lo, hi = sorted((a, b))
    if math.sin(hi) == math.sin(lo):
        return
    assert ackermann_steering(lo, ld, 0.325) < ackermann_steering(hi, ld, 0.325)


@given(st.floats(0.05, 3.0), st.floats(0.1, 3), st.floats(0.1, 3), st.booleans())
def test_gentler_with_longer_lookahead(alpha, l1, l2, neg):
    if neg:
        alpha = -alpha
    if abs(l1 - l2) < 1e-6:
        return
    short, long = sorted((l1, l2))
    assert abs(curvature(alpha, long)) < abs(curvature(alpha, short))
    assert abs(ackermann_steering(alpha, long, 0.325)) < abs(ackermann_steering(alpha, short, 0.325))
