"""World entities and their wire snapshots.

Every entity serializes to a plain JSON-able dict; those dicts are what the
server broadcasts in deltas and what client mirrors store, so whatever is in
a snapshot is, by construction, what clients can converge on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

INSTALLER = "installer"
FETCHER = "fetcher"
ROLES = (INSTALLER, FETCHER)

# pipe lifecycle
STORAGE = "storage"
HELD = "held"
ON_WALL_LOOSE = "on_wall_loose"
PARTIALLY_FIXED = "partially_fixed"
FIXED = "fixed"


def _xy(value: tuple[float, float] | None) -> list[float] | None:
    return None if value is None else [value[0], value[1]]


@dataclass
class Participant:
    id: str
    role: str
    pos: tuple[float, float]
    held: str | None = None
    holding_point: str = "middle"
    held_cursor: dict | None = None
    in_lift: bool = False
    ready: bool = False

    kind = "participant"

    def to_snapshot(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "role": self.role,
            "pos": _xy(self.pos),
            "held": self.held,
            "holding_point": self.holding_point,
            "held_cursor": self.held_cursor,
            "in_lift": self.in_lift,
            "ready": self.ready,
        }


@dataclass
class Pipe:
    """A straight task pipe; bent shapes only occur as connectors."""

    id: str
    pipe_kind: str
    color: str
    diameter: int
    length: float
    status: str = STORAGE
    ground_pos: tuple[float, float] | None = None
    wall_pose: tuple[float, float, float] | None = None
    held_by: str | None = None
    glued: dict[str, bool] = field(default_factory=lambda: {"a": False, "b": False})
    joined: dict[str, str | None] = field(default_factory=lambda: {"a": None, "b": None})
    zones: list[dict] = field(default_factory=list)
    clamped: list[int] = field(default_factory=list)

    kind = "pipe"

    @property
    def joined_end(self) -> str | None:
        if self.joined["a"] is not None:
            return "a"
        if self.joined["b"] is not None:
            return "b"
        return None

    def to_snapshot(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "pipe_kind": self.pipe_kind,
            "color": self.color,
            "diameter": self.diameter,
            "length": self.length,
            "status": self.status,
            "ground_pos": _xy(self.ground_pos),
            "wall_pose": None if self.wall_pose is None else list(self.wall_pose),
            "held_by": self.held_by,
            "glued": dict(self.glued),
            "joined": dict(self.joined),
            "zones": [dict(z) for z in self.zones],
            "clamped": list(self.clamped),
        }


@dataclass
class Connector:
    """A fixed-size right-angle elbow; joins two perpendicular pipes."""

    id: str
    diameter: int
    status: str = STORAGE
    ground_pos: tuple[float, float] | None = None
    wall_pose: tuple[float, float, float] | None = None
    held_by: str | None = None
    glued: dict[str, bool] = field(default_factory=lambda: {"a": False, "b": False})
    joined: dict[str, str | None] = field(default_factory=lambda: {"a": None, "b": None})

    kind = "connector"

    def to_snapshot(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "diameter": self.diameter,
            "status": self.status,
            "ground_pos": _xy(self.ground_pos),
            "wall_pose": None if self.wall_pose is None else list(self.wall_pose),
            "held_by": self.held_by,
            "glued": dict(self.glued),
            "joined": dict(self.joined),
        }


@dataclass
class Clamp:
    id: str
    diameter: int
    status: str = STORAGE
    ground_pos: tuple[float, float] | None = None
    wall_pos: tuple[float, float] | None = None
    held_by: str | None = None
    installed_on: tuple[str, int] | None = None

    kind = "clamp"

    def to_snapshot(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "diameter": self.diameter,
            "status": self.status,
            "ground_pos": _xy(self.ground_pos),
            "wall_pos": _xy(self.wall_pos),
            "held_by": self.held_by,
            "installed_on": None if self.installed_on is None else list(self.installed_on),
        }


@dataclass
class GlueTool:
    id: str
    charges: int
    ground_pos: tuple[float, float] | None = None
    held_by: str | None = None

    kind = "glue"

    def to_snapshot(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "charges": self.charges,
            "ground_pos": _xy(self.ground_pos),
            "held_by": self.held_by,
        }


@dataclass
class Vehicle:
    id: str
    template: str
    pos: tuple[float, float]
    heading: float = 0.0
    speed: float = 0.0
    path: tuple[tuple[float, float], ...] = ()
    progress: float = 0.0
    active_script: str | None = None
    overhead: bool = False
    footprint: tuple[float, float] = (1.5, 1.0)

    kind = "vehicle"

    def to_snapshot(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "template": self.template,
            "pos": _xy(self.pos),
            "heading": self.heading,
            "speed": self.speed,
            "path": [list(p) for p in self.path],
            "progress": self.progress,
            "active_script": self.active_script,
            "overhead": self.overhead,
            "footprint": list(self.footprint),
        }


@dataclass
class Drone:
    id: str
    pos: tuple[float, float]
    pending: list[dict] = field(default_factory=list)

    kind = "drone"

    def to_snapshot(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "pos": _xy(self.pos),
            "pending": [dict(p) for p in self.pending],
        }


@dataclass
class RobotDog:
    id: str
    pos: tuple[float, float]
    queue: list[dict] = field(default_factory=list)

    kind = "robot_dog"

    def to_snapshot(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "pos": _xy(self.pos),
            "queue": [dict(j) for j in self.queue],
        }


@dataclass
class ScissorLift:
    id: str
    pos: tuple[float, float]
    height: float = 0.0
    occupant: str | None = None

    kind = "lift"

    def to_snapshot(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "pos": _xy(self.pos),
            "height": self.height,
            "occupant": self.occupant,
        }
