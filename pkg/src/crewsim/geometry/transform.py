"""Rigid 2D transforms in the wall plane, end frames, and the connection solve.

Every installed object lives in the wall plane, so a pose is (u, v, theta).
Pipe ends carry an outward unit axis; connecting two pipes means making two
end frames coincide with anti-parallel outward axes, which in 2D has exactly
one solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .pipes import PipeGeometry

Vec2 = tuple[float, float]

_TAU = 2.0 * math.pi


def normalize_angle(theta: float) -> float:
    """Map an angle to (-pi, pi]."""
    t = math.remainder(theta, _TAU)
    if t <= -math.pi:
        t = math.pi
    return t


def rotate(theta: float, p: Vec2) -> Vec2:
    c, s = math.cos(theta), math.sin(theta)
    return (c * p[0] - s * p[1], s * p[0] + c * p[1])


@dataclass(frozen=True)
class Pose2:
    """Rigid transform in the wall plane: rotate by theta, then translate."""

    u: float
    v: float
    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    def apply(self, p: Vec2) -> Vec2:
        x, y = rotate(self.theta, p)
        return (x + self.u, y + self.v)

    def apply_dir(self, d: Vec2) -> Vec2:
        return rotate(self.theta, d)


@dataclass(frozen=True)
class EndFrame:
    """World-frame position and outward unit axis of one pipe end."""

    position: Vec2
    outward: Vec2

    def __post_init__(self) -> None:
        n = math.hypot(*self.outward)
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"outward axis must be unit length, got |v|={n!r}")


def end_frame(geom: "PipeGeometry", pose: Pose2, end: str) -> EndFrame:
    """World-frame end position and outward axis of a posed pipe.

    ``end`` is ``"a"`` or ``"b"``.
    """
    p_local, out_local = geom.end_local(end)
    return EndFrame(position=pose.apply(p_local), outward=pose.apply_dir(out_local))


def connect_transform(fixed: EndFrame, free_geom: "PipeGeometry", free_end: str) -> Pose2:
    """Pose for ``free_geom`` so that its ``free_end`` mates with ``fixed``.

    The returned pose places the free end exactly on the fixed end with the
    two outward axes anti-parallel. Unique in 2D.
    """
    p_local, out_local = free_geom.end_local(free_end)
    target = (-fixed.outward[0], -fixed.outward[1])
    theta = math.atan2(target[1], target[0]) - math.atan2(out_local[1], out_local[0])
    px, py = rotate(theta, p_local)
    return Pose2(fixed.position[0] - px, fixed.position[1] - py, theta)


@dataclass
class Assembly:
    """A container of rigidly connected pipes with their shared-plane poses.

    Joints record which end of which member mates with which end of another;
    ``joint_residuals`` re-derives the coincidence and anti-parallelism errors
    from the stored poses, so the invariants can be re-checked at any time.
    """

    members: list[tuple["PipeGeometry", Pose2]] = field(default_factory=list)
    joints: list[tuple[tuple[int, str], tuple[int, str]]] = field(default_factory=list)

    def add_root(self, geom: "PipeGeometry", pose: Pose2) -> int:
        self.members.append((geom, pose))
        return len(self.members) - 1

    def add_connected(self, geom: "PipeGeometry", free_end: str, to_member: int, to_end: str) -> int:
        """Attach a new member by solving its pose against an existing end."""
        to_geom, to_pose = self.members[to_member]
        fixed = end_frame(to_geom, to_pose, to_end)
        pose = connect_transform(fixed, geom, free_end)
        self.members.append((geom, pose))
        idx = len(self.members) - 1
        self.joints.append(((to_member, to_end), (idx, free_end)))
        return idx

    def joint_residuals(self) -> list[tuple[float, float]]:
        """Per joint: (end distance, |outward dot + 1|)."""
        out = []
        for (i, end_i), (j, end_j) in self.joints:
            fi = end_frame(*self.members[i], end_i)
            fj = end_frame(*self.members[j], end_j)
            dist = math.hypot(fi.position[0] - fj.position[0], fi.position[1] - fj.position[1])
            dot = fi.outward[0] * fj.outward[0] + fi.outward[1] * fj.outward[1]
            out.append((dist, abs(dot + 1.0)))
        return out

    def max_residual(self) -> float:
        return max((max(d, a) for d, a in self.joint_residuals()), default=0.0)
