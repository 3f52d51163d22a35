"""Pipe mathematics in the wall plane."""

from .interactions import (
    Haptic,
    HoldingPoint,
    JoystickInput,
    Zone,
    clamp_fit,
    clamp_zones,
    shift_holding_point,
)
from .pipes import (
    CONNECTOR_ARM_PER_DIAMETER,
    PIPE_ANGLES,
    PIPE_DIAMETERS,
    PipeColor,
    PipeGeometry,
    PipeKind,
    PipeSpec,
    connector_geometry,
    generate_pipe,
)
from .transform import (
    Assembly,
    EndFrame,
    Pose2,
    Vec2,
    connect_transform,
    end_frame,
    normalize_angle,
)
from .wall import WallPlane, compensate_to_wall, snap_orientation

__all__ = [
    "Assembly",
    "CONNECTOR_ARM_PER_DIAMETER",
    "EndFrame",
    "Haptic",
    "HoldingPoint",
    "JoystickInput",
    "PIPE_ANGLES",
    "PIPE_DIAMETERS",
    "PipeColor",
    "PipeGeometry",
    "PipeKind",
    "PipeSpec",
    "Pose2",
    "Vec2",
    "WallPlane",
    "Zone",
    "clamp_fit",
    "clamp_zones",
    "compensate_to_wall",
    "connect_transform",
    "connector_geometry",
    "end_frame",
    "generate_pipe",
    "normalize_angle",
    "shift_holding_point",
    "snap_orientation",
]
