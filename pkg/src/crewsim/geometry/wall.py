"""Wall-surface compensation and orientation snapping.

A held object tracks a 3D cursor that can leave the wall; compensation
projects it back so the object lies flat on the surface. Snapping forces a
near-horizontal or near-vertical angle to the exact axis and cues the user
with a long haptic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .interactions import Haptic
from .transform import Pose2, normalize_angle

Vec3 = tuple[float, float, float]

_HALF_PI = math.pi / 2.0


def _dot(a: Vec3, b: Vec3) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


@dataclass(frozen=True)
class WallPlane:
    """A wall surface spanned by two orthonormal in-plane axes."""

    origin: Vec3
    axis_u: Vec3
    axis_v: Vec3

    def __post_init__(self) -> None:
        if abs(math.sqrt(_dot(self.axis_u, self.axis_u)) - 1.0) > 1e-9:
            raise ValueError("axis_u must be unit length")
        if abs(math.sqrt(_dot(self.axis_v, self.axis_v)) - 1.0) > 1e-9:
            raise ValueError("axis_v must be unit length")
        if abs(_dot(self.axis_u, self.axis_v)) > 1e-9:
            raise ValueError("wall axes must be orthogonal")

    def project(self, point: Vec3) -> tuple[float, float]:
        d = (point[0] - self.origin[0], point[1] - self.origin[1], point[2] - self.origin[2])
        return (_dot(d, self.axis_u), _dot(d, self.axis_v))

    def to_world(self, pose: Pose2) -> tuple[Vec3, Vec3]:
        """Lift an in-plane pose back to a 3D point and axis direction."""
        point = tuple(
            self.origin[i] + pose.u * self.axis_u[i] + pose.v * self.axis_v[i] for i in range(3)
        )
        c, s = math.cos(pose.theta), math.sin(pose.theta)
        direction = tuple(c * self.axis_u[i] + s * self.axis_v[i] for i in range(3))
        return point, direction  # type: ignore[return-value]


def compensate_to_wall(position: Vec3, axis_dir: Vec3, wall: WallPlane) -> Pose2:
    """Project a raw 3D pose onto the wall: in-plane position and angle.

    The off-plane component is discarded, so the result lies exactly on the
    surface; an axis perpendicular to the wall degenerates to theta = 0.
    """
    u, v = wall.project(position)
    du = _dot(axis_dir, wall.axis_u)
    dv = _dot(axis_dir, wall.axis_v)
    theta = 0.0 if math.hypot(du, dv) < 1e-12 else math.atan2(dv, du)
    return Pose2(u, v, theta)


def snap_orientation(theta: float, tol: float) -> tuple[float, bool, Haptic | None]:
    """Snap an angle to the nearest multiple of pi/2 when within ``tol``.

    Returns (angle, snapped, haptic). Snapped angles are exact axis multiples
    normalized to (-pi, pi]; a snap cues a long haptic. Idempotent.
    """
    if not 0.0 <= tol < math.pi / 8.0:
        raise ValueError(f"tol must be in [0, pi/8), got {tol}")
    t = normalize_angle(theta)
    k = round(t / _HALF_PI)
    target = normalize_angle(k * _HALF_PI)
    if abs(math.remainder(t - target, 2.0 * math.pi)) <= tol:
        return target, True, Haptic.LONG
    return theta, False, None
