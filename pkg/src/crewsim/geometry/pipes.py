"""Procedural pipe parameterization.

A pipe is fully described by four catalog attributes (kind, color, diameter,
angle) plus one or two arm lengths. Kind and color are material metadata and
never influence geometry. Straight pipes are a single segment of length
``arm_a``; bent pipes are two arms meeting at a zero-extent vertex, with end
axes always pointing outward.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from ..errors import InvalidSpecError
from .transform import Vec2

PIPE_DIAMETERS = (1, 2, 3, 4)
PIPE_ANGLES = (0, 45, 90, 135)

# Connector: a 90-degree elbow with fixed-size arms scaled to its diameter.
CONNECTOR_ARM_PER_DIAMETER = 0.5


class PipeKind(str, enum.Enum):
    SEWAGE = "sewage"
    WATER = "water"
    GAS = "gas"
    ELECTRICITY = "electricity"


class PipeColor(str, enum.Enum):
    MAGENTA = "magenta"
    GREEN = "green"
    BLUE = "blue"
    YELLOW = "yellow"


@dataclass(frozen=True)
class PipeSpec:
    kind: PipeKind
    color: PipeColor
    diameter: int
    angle: int
    arm_a: float
    arm_b: float = 0.0

    def validate(self) -> None:
        if self.diameter not in PIPE_DIAMETERS:
            raise InvalidSpecError(f"diameter must be one of {PIPE_DIAMETERS}, got {self.diameter}")
        if self.angle not in PIPE_ANGLES:
            raise InvalidSpecError(f"angle must be one of {PIPE_ANGLES}, got {self.angle}")
        if self.arm_a <= 0:
            raise InvalidSpecError(f"arm_a must be positive, got {self.arm_a}")
        if self.angle == 0 and self.arm_b != 0:
            raise InvalidSpecError("straight pipes use arm_a as the full length; arm_b must be 0")
        if self.angle != 0 and self.arm_b <= 0:
            raise InvalidSpecError("bent pipes need arm_b > 0")

    @property
    def length(self) -> float:
        """Full length of a straight pipe (task pipes are always straight)."""
        if self.angle != 0:
            raise InvalidSpecError("length is only defined for straight pipes")
        return self.arm_a


@dataclass(frozen=True)
class PipeGeometry:
    """Local-frame pipe shape: end points, outward end axes, centerline.

    Straight pipes are centered on the origin along +u; bent pipes put the
    vertex at the origin with arm A along -u and arm B rotated by the bend
    angle.
    """

    end_a: Vec2
    end_b: Vec2
    out_a: Vec2
    out_b: Vec2
    centerline: tuple[Vec2, ...]

    def end_local(self, end: str) -> tuple[Vec2, Vec2]:
        if end == "a":
            return self.end_a, self.out_a
        if end == "b":
            return self.end_b, self.out_b
        raise ValueError(f"end must be 'a' or 'b', got {end!r}")


def generate_pipe(spec: PipeSpec) -> PipeGeometry:
    """Build the local geometry for a validated spec.

    Kind and color are carried outside the geometry; two specs differing only
    in materials produce identical geometry.
    """
    spec.validate()
    arm_a = float(spec.arm_a)
    if spec.angle == 0:
        half = arm_a / 2.0
        return PipeGeometry(
            end_a=(-half, 0.0),
            end_b=(half, 0.0),
            out_a=(-1.0, 0.0),
            out_b=(1.0, 0.0),
            centerline=((-half, 0.0), (half, 0.0)),
        )
    alpha = math.radians(spec.angle)
    end_b = (spec.arm_b * math.cos(alpha), spec.arm_b * math.sin(alpha))
    return PipeGeometry(
        end_a=(-arm_a, 0.0),
        end_b=end_b,
        out_a=(-1.0, 0.0),
        out_b=(math.cos(alpha), math.sin(alpha)),
        centerline=((-arm_a, 0.0), (0.0, 0.0), end_b),
    )


def connector_geometry(diameter: int) -> PipeGeometry:
    """Connector shape for a given diameter: a 90-degree elbow, arms 0.5*d."""
    if diameter not in PIPE_DIAMETERS:
        raise InvalidSpecError(f"diameter must be one of {PIPE_DIAMETERS}, got {diameter}")
    arm = CONNECTOR_ARM_PER_DIAMETER * diameter
    return PipeGeometry(
        end_a=(-arm, 0.0),
        end_b=(0.0, arm),
        out_a=(-1.0, 0.0),
        out_b=(0.0, 1.0),
        centerline=((-arm, 0.0), (0.0, 0.0), (0.0, arm)),
    )
