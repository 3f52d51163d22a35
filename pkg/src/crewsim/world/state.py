"""The authoritative world: entity store, seeded RNG, and dirty tracking.

All mutation happens inside the session tick loop. Entities touched during a
tick are collected into upsert deltas; determinism rests on the fixed
processing order and on every random draw coming from the world's own RNG.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Any, Iterator

from ..config.model import VehicleConfig
from .entities import (
    FETCHER,
    INSTALLER,
    STORAGE,
    Clamp,
    Connector,
    Drone,
    GlueTool,
    Participant,
    Pipe,
    RobotDog,
    ScissorLift,
    Vehicle,
)
from .task import TargetLayout, TaskConfig

PHASE_LOBBY = "lobby"
PHASE_TRAINING = "training"
PHASE_MAIN = "main"
PHASE_COMPLETE = "complete"

# ground-plane footprint half-extents used for overlap tests
PIPE_FOOTPRINT_HALF_DEPTH = 0.2
CLEARANCE = 0.05


@dataclass
class WorldState:
    seed: int
    task: TaskConfig
    layout: TargetLayout
    rng: random.Random
    tick_rate: int = 20
    menu: Any = None  # MenuConfig; optional so bare worlds stay easy to build
    tick: int = 0
    phase: str = PHASE_LOBBY
    main_start_tick: int | None = None
    entities: dict[str, Any] = field(default_factory=dict)
    chat: list[dict] = field(default_factory=list)
    chat_drained: int = 0
    counters: dict[str, int] = field(default_factory=dict)
    order_seq: int = 0
    dirty: set[str] = field(default_factory=set)
    removed: set[str] = field(default_factory=set)
    completion_dirty: bool = False

    # -- entity bookkeeping ---------------------------------------------------

    def new_id(self, prefix: str) -> str:
        n = self.counters.get(prefix, 0) + 1
        self.counters[prefix] = n
        return f"{prefix}:{n:04d}"

    def add(self, entity: Any) -> Any:
        self.entities[entity.id] = entity
        self.touch(entity.id)
        return entity

    def remove(self, entity_id: str) -> None:
        del self.entities[entity_id]
        self.dirty.discard(entity_id)
        self.removed.add(entity_id)

    def get(self, entity_id: str) -> Any:
        return self.entities.get(entity_id)

    def touch(self, entity_id: str) -> None:
        self.dirty.add(entity_id)

    def touch_phase(self) -> None:
        # phase rides in the same delta stream as entities
        self.dirty.add("__phase__")

    def by_kind(self, kind: str) -> Iterator[Any]:
        for entity_id in sorted(self.entities):
            entity = self.entities[entity_id]
            if entity.kind == kind:
                yield entity

    def participant(self, role: str) -> Participant:
        return self.entities[role]

    def the_glue(self) -> GlueTool:
        return next(self.by_kind("glue"))

    def the_drone(self) -> Drone:
        return next(self.by_kind("drone"))

    def the_dog(self) -> RobotDog:
        return next(self.by_kind("robot_dog"))

    def the_lift(self) -> ScissorLift:
        return next(self.by_kind("lift"))

    # -- snapshots --------------------------------------------------------------

    def snapshot(self) -> dict:
        return {
            "phase": self.phase,
            "entities": {eid: self.entities[eid].to_snapshot() for eid in sorted(self.entities)},
            "chat": [dict(c) for c in self.chat],
        }

    def drain_deltas(self) -> list[dict]:
        """Upserts, removals, chat, and phase changes since the last drain."""
        deltas: list[dict] = []
        for entity_id in sorted(self.removed):
            deltas.append({"op": "remove", "id": entity_id})
        for entity_id in sorted(self.dirty):
            if entity_id == "__phase__":
                deltas.append({"op": "phase", "phase": self.phase})
            elif entity_id in self.entities:
                deltas.append({"op": "upsert", "entity": self.entities[entity_id].to_snapshot()})
        for entry in self.chat[self.chat_drained:]:
            deltas.append({"op": "chat", "entry": dict(entry)})
        self.chat_drained = len(self.chat)
        self.dirty.clear()
        self.removed.clear()
        return deltas

    def add_chat(self, role: str, text: str) -> dict:
        entry = {"tick": self.tick, "role": role, "text": text}
        self.chat.append(entry)
        return entry

    # -- ground-plane placement ---------------------------------------------------

    def site_bounds(self) -> tuple[float, float, float, float]:
        return (0.0, 0.0, self.task.rules.wall_width, self.task.rules.site_depth)

    def _ground_obstacles(self, skip: str | None = None) -> list[tuple[float, float, float, float]]:
        boxes = []
        for entity in self.entities.values():
            if entity.id == skip:
                continue
            if entity.kind == "pipe" and entity.status == STORAGE and entity.ground_pos:
                hx = entity.length / 2.0
                boxes.append(
                    (entity.ground_pos[0], entity.ground_pos[1], hx, PIPE_FOOTPRINT_HALF_DEPTH)
                )
            elif entity.kind == "vehicle":
                boxes.append((entity.pos[0], entity.pos[1], entity.footprint[0], entity.footprint[1]))
        return boxes

    def free_ground_position(
        self,
        center: tuple[float, float],
        radius: float,
        half_extents: tuple[float, float],
        skip: str | None = None,
        attempts: int = 64,
    ) -> tuple[float, float]:
        """Seeded-random position near ``center`` clear of vehicles and loose pipes.

        Falls back to a deterministic outward ring scan when rejection
        sampling exhausts its attempt budget.
        """
        x0, y0, x1, y1 = self.site_bounds()
        obstacles = self._ground_obstacles(skip=skip)
        hx, hy = half_extents

        def free(px: float, py: float) -> bool:
            if not (x0 + hx <= px <= x1 - hx and y0 + hy <= py <= y1 - hy):
                return False
            for ox, oy, ohx, ohy in obstacles:
                if abs(px - ox) <= hx + ohx + CLEARANCE and abs(py - oy) <= hy + ohy + CLEARANCE:
                    return False
            return True

        for _ in range(attempts):
            px = center[0] + self.rng.uniform(-radius, radius)
            py = center[1] + self.rng.uniform(-radius, radius)
            if free(px, py):
                return (px, py)
        # nearest free spot: widen rings outward, fixed angular sweep
        for step in range(1, 200):
            ring = radius + 0.5 * step
            for i in range(16):
                angle = i * (math.tau / 16.0)
                px = center[0] + ring * math.cos(angle)
                py = center[1] + ring * math.sin(angle)
                if free(px, py):
                    return (px, py)
        return center  # degenerate site; give up rather than loop forever

    def storage_center(self) -> tuple[float, float]:
        x0, y0, x1, y1 = self.task.rules.storage_rect
        return ((x0 + x1) / 2.0, (y0 + y1) / 2.0)

    def spawn_pipe(self, pipe_kind: str, color: str, diameter: int, length: float) -> Pipe:
        pos = self.free_ground_position(
            self.storage_center(), 3.0, (length / 2.0, PIPE_FOOTPRINT_HALF_DEPTH)
        )
        return self.add(
            Pipe(
                id=self.new_id("pipe"),
                pipe_kind=pipe_kind,
                color=color,
                diameter=diameter,
                length=length,
                ground_pos=pos,
            )
        )

    def spawn_connector(self, diameter: int) -> Connector:
        pos = self.free_ground_position(self.storage_center(), 3.0, (0.5 * diameter, 0.2))
        return self.add(Connector(id=self.new_id("conn"), diameter=diameter, ground_pos=pos))

    def spawn_clamp(self, diameter: int, near: tuple[float, float]) -> Clamp:
        pos = self.free_ground_position(near, 1.5, (0.2, 0.2))
        return self.add(Clamp(id=self.new_id("clamp"), diameter=diameter, ground_pos=pos))


def setup_world(
    task: TaskConfig,
    layout: TargetLayout,
    seed: int,
    vehicles: list[VehicleConfig],
    tick_rate: int = 20,
    menu: Any = None,
) -> WorldState:
    """Seeded initial world: participants, tools, machines, parked vehicles."""
    world = WorldState(
        seed=seed, task=task, layout=layout, rng=random.Random(seed),
        tick_rate=tick_rate, menu=menu,
    )
    depth = task.rules.site_depth
    world.add(Participant(id=INSTALLER, role=INSTALLER, pos=(5.0, 2.0)))
    world.add(Participant(id=FETCHER, role=FETCHER, pos=(8.0, 5.0)))
    world.add(GlueTool(id="glue:0001", charges=task.rules.glue_charges, ground_pos=(4.0, 1.5)))
    world.add(ScissorLift(id="lift:0001", pos=(25.0, 1.0)))
    world.add(Drone(id="drone:0001", pos=(0.5, depth - 2.0)))
    world.add(RobotDog(id="dog:0001", pos=(1.5, depth - 1.5)))
    for i, vehicle in enumerate(sorted(vehicles, key=lambda v: v.name)):
        world.add(
            Vehicle(
                id=f"vehicle:{vehicle.name}",
                template=vehicle.game_object,
                pos=(3.0 + 4.5 * i, depth - 1.0),
            )
        )
    world.dirty.clear()  # initial state ships in the snapshot, not as deltas
    return world
