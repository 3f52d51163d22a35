import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crewsim.errors import InvalidSpecError, NotOnWallError
from crewsim.geometry import (
    Assembly,
    EndFrame,
    Haptic,
    HoldingPoint,
    JoystickInput,
    PipeColor,
    PipeKind,
    PipeSpec,
    Pose2,
    WallPlane,
    clamp_fit,
    clamp_zones,
    compensate_to_wall,
    connect_transform,
    connector_geometry,
    end_frame,
    generate_pipe,
    normalize_angle,
    shift_holding_point,
    snap_orientation,
)
from crewsim.geometry.check import run_connect_trials

from .oracles import angular_distance, nearest_axis_angle, projection_by_minimization

TOL = 1e-9


def spec(angle=0, arm_a=4.0, arm_b=0.0, kind=PipeKind.GAS, color=PipeColor.GREEN, diameter=1):
    return PipeSpec(kind=kind, color=color, diameter=diameter, angle=angle, arm_a=arm_a, arm_b=arm_b)


def approx2(p, q, tol=TOL):
    assert math.hypot(p[0] - q[0], p[1] - q[1]) <= tol, (p, q)


# -- generate_pipe -------------------------------------------------------------


def test_straight_pipe_centered_on_origin():
    geom = generate_pipe(spec(angle=0, arm_a=4.2))
    approx2(geom.end_a, (-2.1, 0.0))
    approx2(geom.end_b, (2.1, 0.0))
    assert geom.out_a == (-1.0, 0.0)
    assert geom.out_b == (1.0, 0.0)


def test_right_angle_elbow_end_b_points_up():
    geom = generate_pipe(spec(angle=90, arm_a=2.0, arm_b=2.0))
    approx2(geom.end_a, (-2.0, 0.0))
    approx2(geom.end_b, (0.0, 2.0))
    approx2(geom.out_b, (0.0, 1.0))


def test_obtuse_elbow_end_b_by_direct_trig():
    geom = generate_pipe(spec(angle=135, arm_a=1.0, arm_b=3.0))
    # frozen from 3*(cos 135deg, sin 135deg)
    approx2(geom.end_b, (-2.1213203435596424, 2.121320343559643), tol=1e-12)


def test_arm_lengths_preserved():
    geom = generate_pipe(spec(angle=45, arm_a=1.5, arm_b=2.5))
    assert math.isclose(math.hypot(*geom.end_a), 1.5, abs_tol=1e-12)
    assert math.isclose(math.hypot(*geom.end_b), 2.5, abs_tol=1e-12)


def test_straight_pipe_with_arm_b_rejected():
    with pytest.raises(InvalidSpecError):
        generate_pipe(spec(angle=0, arm_a=4.0, arm_b=1.0))


def test_bent_pipe_needs_arm_b():
    with pytest.raises(InvalidSpecError):
        generate_pipe(spec(angle=90, arm_a=4.0, arm_b=0.0))


@given(
    kind=st.sampled_from(list(PipeKind)),
    color=st.sampled_from(list(PipeColor)),
    angle=st.sampled_from([0, 45, 90, 135]),
    arm_a=st.floats(0.2, 20.0),
    arm_b=st.floats(0.2, 20.0),
)
def test_materials_never_affect_geometry(kind, color, angle, arm_a, arm_b):
    b = 0.0 if angle == 0 else arm_b
    base = generate_pipe(spec(angle=angle, arm_a=arm_a, arm_b=b))
    other = generate_pipe(spec(angle=angle, arm_a=arm_a, arm_b=b, kind=kind, color=color, diameter=3))
    assert base == other


# -- end_frame ------------------------------------------------------------------


def test_end_frame_identity_pose():
    geom = generate_pipe(spec(angle=0, arm_a=2.0))
    f = end_frame(geom, Pose2(0, 0, 0), "b")
    approx2(f.position, (1.0, 0.0))
    approx2(f.outward, (1.0, 0.0))


def test_end_frame_quarter_turn():
    geom = generate_pipe(spec(angle=0, arm_a=2.0))
    f = end_frame(geom, Pose2(0, 0, math.pi / 2), "b")
    approx2(f.position, (0.0, 1.0))
    approx2(f.outward, (0.0, 1.0))


def test_end_frame_elbow_matches_hand_matrix():
    geom = generate_pipe(spec(angle=90, arm_a=2.0, arm_b=2.0))
    f = end_frame(geom, Pose2(3.0, 4.0, math.pi / 4), "b")
    # frozen from an explicit rotation-matrix multiply of the local frame
    approx2(f.position, (1.5857864376269049, 5.414213562373095), tol=1e-12)
    approx2(f.outward, (-0.7071067811865475, 0.7071067811865476), tol=1e-12)


# -- connect_transform ----------------------------------------------------------


def test_connect_elbow_to_fixed_end():
    fixed = EndFrame(position=(10.0, 0.0), outward=(1.0, 0.0))
    elbow = generate_pipe(spec(angle=90, arm_a=2.0, arm_b=2.0))
    pose = connect_transform(fixed, elbow, "a")
    assert math.isclose(pose.u, 12.0, abs_tol=TOL)
    assert math.isclose(pose.v, 0.0, abs_tol=TOL)
    assert abs(pose.theta) <= TOL
    free = end_frame(elbow, pose, "b")
    approx2(free.position, (12.0, 2.0))
    approx2(free.outward, (0.0, 1.0))


def test_connect_straight_to_straight_is_collinear():
    straight = generate_pipe(spec(angle=0, arm_a=4.0))
    fixed = EndFrame(position=(0.0, 0.0), outward=(-1.0, 0.0))
    pose = connect_transform(fixed, straight, "a")
    assert abs(angular_distance(pose.theta, math.pi)) <= TOL
    far = end_frame(straight, pose, "b")
    approx2(far.position, (-4.0, 0.0))
    approx2(far.outward, (-1.0, 0.0))


def test_chain_through_all_bend_angles():
    # straight -> 90 -> 135 -> 45, every joint must stay mated as pipes accrue
    asm = Assembly()
    root = asm.add_root(generate_pipe(spec(angle=0, arm_a=4.0)), Pose2(0, 0, 0))
    p90 = asm.add_connected(generate_pipe(spec(angle=90, arm_a=2.0, arm_b=2.0)), "a", root, "b")
    assert asm.max_residual() <= TOL
    p135 = asm.add_connected(generate_pipe(spec(angle=135, arm_a=1.0, arm_b=3.0)), "a", p90, "b")
    assert asm.max_residual() <= TOL
    asm.add_connected(generate_pipe(spec(angle=45, arm_a=2.0, arm_b=2.0)), "b", p135, "b")
    assert asm.max_residual() <= TOL
    assert len(asm.joints) == 3


@settings(max_examples=300)
@given(
    fx=st.floats(-100, 100),
    fy=st.floats(-100, 100),
    phi=st.floats(-math.pi, math.pi),
    angle=st.sampled_from([0, 45, 90, 135]),
    arm_a=st.floats(0.2, 20.0),
    arm_b=st.floats(0.2, 20.0),
    end=st.sampled_from(["a", "b"]),
)
def test_connect_postconditions_hold(fx, fy, phi, angle, arm_a, arm_b, end):
    fixed = EndFrame(position=(fx, fy), outward=(math.cos(phi), math.sin(phi)))
    geom = generate_pipe(spec(angle=angle, arm_a=arm_a, arm_b=0.0 if angle == 0 else arm_b))
    pose = connect_transform(fixed, geom, end)
    placed = end_frame(geom, pose, end)
    approx2(placed.position, fixed.position)
    dot = placed.outward[0] * fixed.outward[0] + placed.outward[1] * fixed.outward[1]
    assert abs(dot + 1.0) <= TOL


def test_randomized_trial_suite_is_tight():
    report = run_connect_trials(2000, seed=99)
    assert report["max_position_residual"] <= TOL
    assert report["max_direction_residual"] <= TOL


# -- connector ------------------------------------------------------------------


def test_connector_arm_table():
    # frozen constant table: arms scale 0.5 per diameter unit
    expected = {1: 0.5, 2: 1.0, 3: 1.5, 4: 2.0}
    for diameter, arm in expected.items():
        geom = connector_geometry(diameter)
        approx2(geom.end_a, (-arm, 0.0))
        approx2(geom.end_b, (0.0, arm))


def test_connector_joins_like_a_pipe():
    fixed = EndFrame(position=(5.0, 1.0), outward=(1.0, 0.0))
    conn = connector_geometry(2)
    pose = connect_transform(fixed, conn, "a")
    placed = end_frame(conn, pose, "a")
    approx2(placed.position, fixed.position)


def test_connector_rejects_unknown_diameter():
    with pytest.raises(InvalidSpecError):
        connector_geometry(5)


# -- wall compensation ------------------------------------------------------------


WALL = WallPlane(origin=(0.0, 0.0, 0.0), axis_u=(1.0, 0.0, 0.0), axis_v=(0.0, 0.0, 1.0))


def test_point_on_plane_unchanged():
    pose = compensate_to_wall((2.0, 0.0, 1.5), (1.0, 0.0, 0.0), WALL)
    assert (pose.u, pose.v, pose.theta) == (2.0, 1.5, 0.0)


def test_normal_offset_ignored():
    near = compensate_to_wall((2.0, 0.7, 1.5), (1.0, 0.0, 0.0), WALL)
    far = compensate_to_wall((2.0, -3.0, 1.5), (1.0, 0.0, 0.0), WALL)
    assert (near.u, near.v) == (far.u, far.v) == (2.0, 1.5)


def test_projection_matches_numeric_minimizer():
    point = (3.7, 2.9, -1.3)
    pose = compensate_to_wall(point, (0.0, 0.0, 1.0), WALL)
    u, v = projection_by_minimization(point, WALL.origin, WALL.axis_u, WALL.axis_v)
    assert math.isclose(pose.u, u, abs_tol=1e-6)
    assert math.isclose(pose.v, v, abs_tol=1e-6)


def test_perpendicular_axis_degenerates_to_zero_angle():
    pose = compensate_to_wall((1.0, 2.0, 3.0), (0.0, 1.0, 0.0), WALL)
    assert pose.theta == 0.0


@given(u=st.floats(-50, 50), v=st.floats(-50, 50), theta=st.floats(-math.pi + 1e-9, math.pi))
def test_compensation_idempotent(u, v, theta):
    first = compensate_to_wall(*WALL.to_world(Pose2(u, v, theta)), WALL)
    second = compensate_to_wall(*WALL.to_world(first), WALL)
    assert math.isclose(first.u, second.u, abs_tol=1e-12)
    assert math.isclose(first.v, second.v, abs_tol=1e-12)
    assert angular_distance(first.theta, second.theta) <= 1e-12


# -- snapping ----------------------------------------------------------------------


def test_snap_near_zero():
    theta, snapped, signal = snap_orientation(0.03, math.radians(5))
    assert (theta, snapped, signal) == (0.0, True, Haptic.LONG)


def test_snap_untouched_at_max_distance():
    theta, snapped, signal = snap_orientation(math.pi / 4, math.radians(5))
    assert (theta, snapped, signal) == (math.pi / 4, False, None)


def test_snap_fixed_point():
    theta, snapped, signal = snap_orientation(math.pi / 2, math.radians(5))
    assert (theta, snapped, signal) == (math.pi / 2, True, Haptic.LONG)


@given(theta=st.floats(-10, 10), tol=st.floats(0, math.pi / 8, exclude_max=True))
def test_snap_idempotent_and_contracting(theta, tol):
    t1, snapped1, _ = snap_orientation(theta, tol)
    t2, snapped2, _ = snap_orientation(t1, tol)
    assert snapped2 == snapped1
    assert angular_distance(t1, t2) <= 1e-12
    # never moves away from the nearest axis
    _, before = nearest_axis_angle(normalize_angle(theta))
    _, after = nearest_axis_angle(normalize_angle(t1))
    assert after <= before + 1e-12
    if snapped1:
        assert after <= 1e-12


def test_snap_matches_enumerated_nearest_axis():
    rng = random.Random(5)
    tol = math.radians(5)
    for _ in range(500):
        theta = rng.uniform(-math.pi, math.pi)
        snapped_theta, snapped, _ = snap_orientation(theta, tol)
        axis, dist = nearest_axis_angle(theta)
        if dist <= tol:
            assert snapped
            assert angular_distance(snapped_theta, axis) <= 1e-12
        else:
            assert not snapped
            assert snapped_theta == theta


# -- holding point -----------------------------------------------------------------


@pytest.mark.parametrize(
    "current,joystick,expected",
    [
        (HoldingPoint.MIDDLE, JoystickInput.RIGHT, HoldingPoint.LEFT_END),
        (HoldingPoint.MIDDLE, JoystickInput.LEFT, HoldingPoint.RIGHT_END),
        (HoldingPoint.LEFT_END, JoystickInput.PRESS, HoldingPoint.MIDDLE),
        (HoldingPoint.RIGHT_END, JoystickInput.LEFT, HoldingPoint.RIGHT_END),
        (HoldingPoint.LEFT_END, JoystickInput.RIGHT, HoldingPoint.LEFT_END),
    ],
)
def test_holding_point_transitions(current, joystick, expected):
    assert shift_holding_point(current, joystick) == expected


# -- clamp zones --------------------------------------------------------------------


def test_free_pipe_gets_two_zones_at_tenths():
    zones = clamp_zones(10.0, 1, Pose2(5.0, 1.0, 0.0), on_wall=True)
    assert [z.axial_offset for z in zones] == [1.0, 9.0]
    approx2(zones[0].center, (1.0, 1.0))
    approx2(zones[1].center, (9.0, 1.0))
    assert all(z.length == 1.0 for z in zones)


def test_joined_pipe_gets_single_far_zone():
    zones = clamp_zones(10.0, 2, Pose2(5.0, 1.0, 0.0), on_wall=True, joined_end="a")
    assert len(zones) == 1
    assert zones[0].axial_offset == 9.0
    zones_b = clamp_zones(10.0, 2, Pose2(5.0, 1.0, 0.0), on_wall=True, joined_end="b")
    assert [z.axial_offset for z in zones_b] == [1.0]


def test_vertical_pipe_zones_follow_axis():
    zones = clamp_zones(4.0, 1, Pose2(2.0, 3.0, math.pi / 2), on_wall=True)
    approx2(zones[0].center, (2.0, 1.4))
    approx2(zones[1].center, (2.0, 4.6))


def test_zones_require_wall_contact():
    with pytest.raises(NotOnWallError):
        clamp_zones(10.0, 1, Pose2(0, 0, 0), on_wall=False)


def test_clamp_fit_checks_diameter_and_distance():
    zones = clamp_zones(10.0, 1, Pose2(5.0, 1.0, 0.0), on_wall=True)
    zone = zones[0]
    assert clamp_fit(1, zone, zone.center, 0.25)
    assert not clamp_fit(2, zone, zone.center, 0.25)
    off = (zone.center[0] + 0.25 + 1e-9, zone.center[1])
    assert not clamp_fit(1, zone, off, 0.25)
    edge = (zone.center[0] + 0.25, zone.center[1])
    assert clamp_fit(1, zone, edge, 0.25)
