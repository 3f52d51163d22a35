"""Timeline construction and deterministic event firing.

Time offsets are seconds in the files and become ticks at build time; entries
sharing a fire tick keep their file order (scenario order within the session,
then entry order within the scenario).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..config.model import Condition, ScenarioConfig, SessionConfig


@dataclass(frozen=True)
class TimelineEntry:
    fire_tick: int
    seq: int
    scenario: str
    vehicle: str
    condition: Condition
    event_id: int
    desc: str
    warning: str | None


@dataclass(frozen=True)
class TriggeredEvent:
    fire_tick: int
    vehicle: str
    condition: Condition
    event_id: int
    desc: str
    warning: str | None

    def to_log_line(self, tick: int) -> dict:
        line = {
            "tick": tick,
            "vehicle": self.vehicle,
            "condition": self.condition.value,
            "event_id": self.event_id,
        }
        if self.warning is not None:
            line["warning"] = self.warning
        return line


@dataclass
class Timeline:
    entries: list[TimelineEntry] = field(default_factory=list)
    cursor: int = 0

    def __len__(self) -> int:
        return len(self.entries)

    def remaining(self) -> int:
        return len(self.entries) - self.cursor


def build_timeline(
    session: SessionConfig, scenarios: list[ScenarioConfig], tick_rate: int
) -> Timeline:
    """Merge the session's scenarios into one queue sorted by (tick, file order)."""
    by_name = {s.name: s for s in scenarios}
    flat: list[TimelineEntry] = []
    seq = 0
    for scenario_name in session.scenarios:
        scenario = by_name[scenario_name]
        for entry in scenario.entries:
            flat.append(
                TimelineEntry(
                    fire_tick=int(round(entry.time_offset * tick_rate)),
                    seq=seq,
                    scenario=scenario.name,
                    vehicle=entry.vehicle,
                    condition=entry.condition,
                    event_id=entry.event_id,
                    desc=entry.event.desc,
                    warning=entry.event.warning,
                )
            )
            seq += 1
    flat.sort(key=lambda e: (e.fire_tick, e.seq))
    return Timeline(entries=flat)


def advance(timeline: Timeline, tick: int) -> list[TriggeredEvent]:
    """Fire every not-yet-fired entry due at or before ``tick``, in queue order.

    Repeated calls at the same tick return nothing new.
    """
    fired: list[TriggeredEvent] = []
    while timeline.cursor < len(timeline.entries):
        entry = timeline.entries[timeline.cursor]
        if entry.fire_tick > tick:
            break
        fired.append(
            TriggeredEvent(
                fire_tick=entry.fire_tick,
                vehicle=entry.vehicle,
                condition=entry.condition,
                event_id=entry.event_id,
                desc=entry.desc,
                warning=entry.warning,
            )
        )
        timeline.cursor += 1
    return fired
