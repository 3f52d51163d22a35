"""Role-filtered task views.

Pipe requirements are masked per role (the collaboration driver); the world
itself is shared, so entities are never filtered.
"""

from __future__ import annotations

import dataclasses

from .state import WorldState
from .task import TaskConfig


def role_view(world: WorldState, task: TaskConfig, role: str) -> dict:
    segments = []
    for segment in task.segments:
        visible = segment.visible_to(role)
        entry = {"index": segment.index}
        entry.update({k: v for k, v in segment.fields().items() if k in visible})
        segments.append(entry)
    slots = [
        {
            "index": slot.index,
            "orientation": slot.orientation,
            "anchor": list(slot.anchor),
            "connects_to": list(slot.connects_to),
            "endpoint": slot.endpoint,
            "boxed": slot.boxed,
        }
        for slot in world.layout.slots
    ]
    menu = []
    if world.menu is not None:
        menu = [
            {"item_id": i.item_id, "label": i.label, "action_kind": i.action_kind}
            for i in world.menu.for_role(role)
        ]
    return {
        "role": role,
        "task": {"name": task.name, "segments": segments},
        "layout": {"name": world.layout.name, "slots": slots},
        "menu": menu,
        "rules": dataclasses.asdict(task.rules),
    }
