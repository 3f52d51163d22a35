"""Holding-point control, clamp zones, and clamp fitting."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ..errors import NotOnWallError
from .transform import Pose2, Vec2, normalize_angle

# Fraction of the pipe length from each end where a clamp zone sits.
ZONE_FRACTION = 0.1


class Haptic(str, enum.Enum):
    LONG = "long"
    SHORT = "short"


class HoldingPoint(str, enum.Enum):
    LEFT_END = "left_end"
    MIDDLE = "middle"
    RIGHT_END = "right_end"


class JoystickInput(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    PRESS = "press"


def shift_holding_point(current: HoldingPoint, joystick: JoystickInput) -> HoldingPoint:
    """Move the grab point along the held pipe.

    Pushing right slides the pipe right so the hold lands on the left end;
    pushing left does the opposite; pressing resets to the middle. Repeated
    pushes saturate at the ends.
    """
    if joystick is JoystickInput.PRESS:
        return HoldingPoint.MIDDLE
    if joystick is JoystickInput.RIGHT:
        return HoldingPoint.LEFT_END
    return HoldingPoint.RIGHT_END


@dataclass(frozen=True)
class Zone:
    """A wall region where a correctly-sized clamp must be placed."""

    index: int
    center: Vec2
    axial_offset: float
    length: float
    theta: float
    diameter: int


def clamp_zones(
    length: float,
    diameter: int,
    pose: Pose2,
    *,
    on_wall: bool,
    joined_end: str | None = None,
) -> list[Zone]:
    """Clamp zones for a straight pipe lying on the wall.

    A free-standing pipe needs two clamps, one near each end; a pipe already
    joined at one end to a fixed assembly needs a single clamp at the far
    end. Zones run perpendicular to the pipe axis and are one diameter-unit
    long.
    """
    if not on_wall:
        raise NotOnWallError("clamp zones only exist while the pipe touches the wall")
    if joined_end is None:
        offsets = [ZONE_FRACTION * length, (1.0 - ZONE_FRACTION) * length]
    elif joined_end == "a":
        offsets = [(1.0 - ZONE_FRACTION) * length]
    elif joined_end == "b":
        offsets = [ZONE_FRACTION * length]
    else:
        raise ValueError(f"joined_end must be 'a', 'b' or None, got {joined_end!r}")

    dir_u, dir_v = math.cos(pose.theta), math.sin(pose.theta)
    start = (pose.u - dir_u * length / 2.0, pose.v - dir_v * length / 2.0)
    zone_theta = normalize_angle(pose.theta + math.pi / 2.0)
    return [
        Zone(
            index=i,
            center=(start[0] + dir_u * off, start[1] + dir_v * off),
            axial_offset=off,
            length=float(diameter),
            theta=zone_theta,
            diameter=diameter,
        )
        for i, off in enumerate(offsets)
    ]


def clamp_fit(clamp_diameter: int, zone: Zone, clamp_pos: Vec2, tol_pos: float) -> bool:
    """True when the clamp matches the pipe diameter and covers the zone center."""
    if clamp_diameter != zone.diameter:
        return False
    dist = math.hypot(clamp_pos[0] - zone.center[0], clamp_pos[1] - zone.center[1])
    return dist <= tol_pos
