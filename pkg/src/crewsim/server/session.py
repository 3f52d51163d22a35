"""The deterministic session core: role binding, phases, and the tick loop.

Transport-free by design: the network host feeds intents in and broadcasts
what comes out, and replay drives the same code with recorded intents. One
tick runs a fixed pipeline (intents, timeline, vehicles, machines,
completion), so the final state is a pure function of the session config,
seed, and the (tick, intent) sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..config.dirs import ConfigSet
from ..config.model import HandlerRegistry, SessionConfig
from ..engine.scripts import fire
from ..engine.timeline import Timeline, advance, build_timeline
from ..engine.vehicles import collide_and_scatter, vehicle_step
from ..errors import CrewsimError, RoleTakenError, SessionFullError
from ..signals import Signal
from ..world.completion import CompletionReport, check_completion
from ..world.entities import FETCHER, INSTALLER, ROLES
from ..world.intents import apply_intent
from ..world.machines import process_drone, process_robot_dog
from ..world.state import (
    PHASE_COMPLETE,
    PHASE_LOBBY,
    PHASE_MAIN,
    PHASE_TRAINING,
    WorldState,
    setup_world,
)
from ..world.views import role_view
from .hashing import snapshot_hash


@dataclass
class QueuedIntent:
    role: str
    intent: dict
    ref: str | None = None


@dataclass
class TickResult:
    tick: int
    batch: dict | None
    signals: list[Signal]
    completed: bool = False


@dataclass
class SessionCore:
    config: SessionConfig
    configs: ConfigSet
    registry: HandlerRegistry
    seed: int | None = None
    log_sink: Callable[[dict], None] | None = None

    world: WorldState = field(init=False)
    timeline: Timeline = field(init=False)
    clients: dict[str, str] = field(init=False, default_factory=dict)  # role -> conn id
    queue: list[QueuedIntent] = field(init=False, default_factory=list)
    batch_seq: int = field(init=False, default=0)
    final_report: CompletionReport | None = field(init=False, default=None)
    outcome: str | None = field(init=False, default=None)

    def __post_init__(self) -> None:
        task = self.configs.tasks[self.config.task]
        layout = self.configs.layouts[task.layout]
        seed = self.config.seed if self.seed is None else self.seed
        self.world = setup_world(
            task,
            layout,
            seed,
            list(self.configs.vehicles.values()),
            tick_rate=self.config.tick_rate_hz,
            menu=self.configs.menu,
        )
        scenarios = [self.configs.scenarios[name] for name in self.config.scenarios]
        self.timeline = build_timeline(self.config, scenarios, self.config.tick_rate_hz)

    # -- lifecycle -----------------------------------------------------------------

    @property
    def phase(self) -> str:
        return self.world.phase

    def _log(self, line: dict) -> None:
        if self.log_sink is not None:
            self.log_sink(line)

    def join(self, role: str, conn_id: str) -> dict:
        """Bind a client to a role; the second join starts the Training phase."""
        if len(self.clients) >= 2:
            raise SessionFullError("session already has two clients")
        if role not in ROLES:
            raise RoleTakenError(f"unknown role {role!r}")
        if role in self.clients:
            raise RoleTakenError(f"role {role!r} is already taken")
        self.clients[role] = conn_id
        if len(self.clients) == 2 and self.world.phase == PHASE_LOBBY:
            self.world.phase = PHASE_TRAINING
            self.world.tick = 0
            self.world.touch_phase()
            self._log({"type": "phase", "tick": 0, "phase": PHASE_TRAINING})
        return self.welcome_payload(role)

    def leave(self, role: str) -> None:
        self.clients.pop(role, None)

    def welcome_payload(self, role: str) -> dict:
        return {
            "role": role,
            "session": self.config.name,
            "tick_rate": self.config.tick_rate_hz,
            "seed": self.world.seed,
            "phase": self.world.phase,
            "tick": self.world.tick,
            "batch_seq": self.batch_seq,
            "snapshot": self.world.snapshot(),
            "view": role_view(self.world, self.world.task, role),
        }

    def enqueue(self, role: str, intent: dict, ref: str | None = None) -> None:
        self.queue.append(QueuedIntent(role=role, intent=intent, ref=ref))

    def world_hash(self) -> str:
        return snapshot_hash(self.world.snapshot())

    # -- the tick pipeline ------------------------------------------------------------

    def run_tick(self) -> TickResult:
        """One deterministic tick: intents, events, vehicles, machines, completion."""
        world = self.world
        if world.phase not in (PHASE_TRAINING, PHASE_MAIN):
            return TickResult(tick=world.tick, batch=None, signals=[])
        world.tick += 1
        signals: list[Signal] = []
        action_deltas: list[dict] = []

        # 1. apply queued intents in arrival order
        pending, self.queue = self.queue, []
        for item in pending:
            record = {
                "type": "action",
                "tick": world.tick,
                "role": item.role,
                "intent": item.intent,
            }
            if item.ref is not None:
                record["ref"] = item.ref
            try:
                signals.extend(apply_intent(world, item.role, item.intent))
                record["outcome"] = "applied"
            except CrewsimError as exc:
                record["outcome"] = type(exc).__name__
                record["detail"] = str(exc)
            self._log(record)
            action_deltas.append({"op": "action", **{k: v for k, v in record.items() if k != "type"}})

        # 2. training -> main once both participants are ready
        if world.phase == PHASE_TRAINING:
            if all(world.participant(r).ready for r in (INSTALLER, FETCHER)):
                world.phase = PHASE_MAIN
                world.main_start_tick = world.tick
                world.touch_phase()
                self._log({"type": "phase", "tick": world.tick, "phase": PHASE_MAIN})

        # 3. fire due timeline events (timeline is anchored at the main phase start)
        if world.phase == PHASE_MAIN:
            rel_tick = world.tick - world.main_start_tick
            for event in advance(self.timeline, rel_tick):
                signals.extend(fire(event, world, self.registry))
                self._log({"type": "event", **event.to_log_line(world.tick)})

        # 4. step vehicles and resolve ground collisions
        dt = 1.0 / self.config.tick_rate_hz
        rules = world.task.rules
        for vehicle in list(world.by_kind("vehicle")):
            if vehicle.active_script is None:
                continue
            stepped = vehicle_step(vehicle, dt)
            world.entities[vehicle.id] = stepped
            world.touch(vehicle.id)
            hit = collide_and_scatter(
                stepped,
                list(world.by_kind("pipe")),
                world.rng,
                bounds=world.site_bounds(),
                scatter_radius=rules.scatter_radius,
            )
            for pipe in hit:
                world.touch(pipe.id)
                self._log(
                    {
                        "type": "scatter",
                        "tick": world.tick,
                        "vehicle": stepped.id,
                        "pipe": pipe.id,
                        "pos": list(pipe.ground_pos),
                    }
                )

        # 5. machine services
        process_drone(world)
        process_robot_dog(world)

        # 6. completion check, only when the installed graph changed
        completed = False
        if world.phase == PHASE_MAIN and world.completion_dirty:
            world.completion_dirty = False
            report = check_completion(world, world.layout, world.task)
            if report.complete:
                self.final_report = report
                self.outcome = "complete"
                world.phase = PHASE_COMPLETE
                world.touch_phase()
                completed = True
                self._log({"type": "phase", "tick": world.tick, "phase": PHASE_COMPLETE})

        # 7. broadcast one batch when anything happened
        deltas = action_deltas + world.drain_deltas()
        batch = None
        if deltas or signals:
            self.batch_seq += 1
            batch = {
                "batch_seq": self.batch_seq,
                "tick": world.tick,
                "deltas": deltas,
                "world_hash": self.world_hash(),
            }
        return TickResult(tick=world.tick, batch=batch, signals=signals, completed=completed)

    def abort(self, reason: str) -> None:
        self.outcome = f"aborted: {reason}"
        self.world.phase = PHASE_COMPLETE
        self.world.touch_phase()
        self._log({"type": "phase", "tick": self.world.tick, "phase": PHASE_COMPLETE, "reason": reason})
