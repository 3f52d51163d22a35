"""Task definitions: per-segment pipe requirements, rule knobs, target layouts.

Each segment carries the four pipe attributes plus per-role visibility masks;
the target layout is the goal connectivity graph the finished wall is matched
against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import SchemaError
from ..geometry import PipeColor, PipeKind

TASK_FIELDS = ("color", "type", "size", "length")

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


@dataclass(frozen=True)
class TaskSegment:
    index: int
    color: PipeColor
    kind: PipeKind
    size: int
    length: float
    installer_visible: frozenset[str]
    fetcher_visible: frozenset[str]

    def visible_to(self, role: str) -> frozenset[str]:
        return self.installer_visible if role == "installer" else self.fetcher_visible

    def fields(self) -> dict[str, object]:
        return {
            "color": self.color.value,
            "type": self.kind.value,
            "size": self.size,
            "length": self.length,
        }


@dataclass(frozen=True)
class TaskRules:
    """Tunable task behavior; every knob is config-overridable."""

    snap_tol_deg: float = 5.0
    clamp_tol: float = 0.25
    length_tol: float = 0.25
    reach_height: float = 2.0
    order_delay_s: float = 5.0
    cut_delay_s: float = 5.0
    min_piece: float = 0.5
    glue_charges: int = 10
    glue_refill: int = 10
    clamp_refill_per_diameter: int = 2
    lift_step: float = 0.5
    lift_proximity: float = 1.5
    lift_max_height: float = 6.0
    wall_width: float = 30.0
    wall_height: float = 10.0
    site_depth: float = 12.0
    storage_rect: tuple[float, float, float, float] = (2.0, 4.0, 10.0, 8.0)
    scatter_radius: float = 3.0


@dataclass(frozen=True)
class TaskConfig:
    name: str
    layout: str
    segments: tuple[TaskSegment, ...]
    rules: TaskRules = field(default_factory=TaskRules)

    def segment(self, index: int) -> TaskSegment:
        return self.segments[index - 1]


@dataclass(frozen=True)
class LayoutSlot:
    index: int
    orientation: str
    anchor: tuple[float, float]
    connects_to: tuple[int, ...]
    endpoint: bool = False
    boxed: bool = False


@dataclass(frozen=True)
class TargetLayout:
    name: str
    slots: tuple[LayoutSlot, ...]

    def slot(self, index: int) -> LayoutSlot:
        return self.slots[index - 1]

    def edges(self) -> set[frozenset[int]]:
        return {
            frozenset({slot.index, other})
            for slot in self.slots
            for other in slot.connects_to
        }

    def validate(self) -> None:
        indices = [s.index for s in self.slots]
        if indices != list(range(1, len(self.slots) + 1)):
            raise SchemaError(f"layout {self.name!r}: slot indices must be 1..n contiguous")
        by_index = {s.index: s for s in self.slots}
        for slot in self.slots:
            for other in slot.connects_to:
                if other not in by_index:
                    raise SchemaError(
                        f"layout {self.name!r}: slot {slot.index} connects to unknown slot {other}"
                    )
                if slot.index not in by_index[other].connects_to:
                    raise SchemaError(
                        f"layout {self.name!r}: adjacency {slot.index}<->{other} must be symmetric"
                    )
                if by_index[other].orientation == slot.orientation:
                    raise SchemaError(
                        f"layout {self.name!r}: junction {slot.index}<->{other} must be "
                        "perpendicular (every junction takes a connector)"
                    )
