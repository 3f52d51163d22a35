"""Typed views of the YAML configuration families.

Configs are the researcher API: loaders are strict (unknown keys rejected)
and every cross-reference is resolved at load time, never at runtime.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..errors import UnboundHandlerError


class Condition(str, enum.Enum):
    NORMAL = "Normal"
    ACCIDENT = "Accident"

    @property
    def partition(self) -> str:
        """Name of the vehicle-file partition this condition lives in."""
        return "normals" if self is Condition.NORMAL else "accidents"


@dataclass(frozen=True)
class EventDef:
    id: int
    condition: Condition
    desc: str
    warning: str | None = None


@dataclass(frozen=True)
class VehicleConfig:
    name: str
    desc: str
    game_object: str
    normals: tuple[EventDef, ...]
    accidents: tuple[EventDef, ...]

    def find_event(self, condition: Condition, event_id: int) -> EventDef | None:
        pool = self.normals if condition is Condition.NORMAL else self.accidents
        for ev in pool:
            if ev.id == event_id:
                return ev
        return None


@dataclass(frozen=True)
class ScenarioEntry:
    time_offset: float
    vehicle: str
    condition: Condition
    event_id: int
    # resolved against the loaded vehicle configs
    event: EventDef


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    entries: tuple[ScenarioEntry, ...]


@dataclass(frozen=True)
class SessionConfig:
    name: str
    scenarios: tuple[str, ...]
    task: str
    tick_rate_hz: int
    seed: int


@dataclass(frozen=True)
class MenuItem:
    item_id: str
    label: str
    action_kind: str


@dataclass(frozen=True)
class MenuConfig:
    name: str
    installer: tuple[MenuItem, ...]
    fetcher: tuple[MenuItem, ...]

    def for_role(self, role: str) -> tuple[MenuItem, ...]:
        return self.installer if role == "installer" else self.fetcher


def handler_key(vehicle: str, condition: Condition, event_id: int) -> str:
    """Naming convention binding a configured event to its behavior script."""
    return f"{vehicle}_{condition.partition}_{event_id}"


@dataclass
class HandlerRegistry:
    """Explicit event-to-behavior binding, replacing runtime reflection."""

    bindings: dict[str, str] = field(default_factory=dict)

    def bind(self, key: str, script_id: str) -> None:
        self.bindings[key] = script_id

    def resolve(self, vehicle: str, condition: Condition, event_id: int) -> str:
        key = handler_key(vehicle, condition, event_id)
        try:
            return self.bindings[key]
        except KeyError:
            raise UnboundHandlerError(f"no behavior script registered for event {key!r}") from None

    def coverage_errors(self, scenarios: list[ScenarioConfig]) -> list[str]:
        """Handler keys referenced by scenarios but absent from the registry."""
        missing = []
        for scenario in scenarios:
            for entry in scenario.entries:
                key = handler_key(entry.vehicle, entry.condition, entry.event_id)
                if key not in self.bindings and key not in missing:
                    missing.append(key)
        return missing


def resolve_handler(
    vehicle: str, condition: Condition, event_id: int, registry: HandlerRegistry
) -> str:
    return registry.resolve(vehicle, condition, event_id)
