"""Behavior scripts for configured vehicle events.

Each script is waypoint motion at constant speed plus an overhead flag for
loads that pass above the site (overhead traffic never collides with ground
objects). The registry binds every shipped event to its script through the
<Vehicle>_<partition>_<id> naming convention.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..config.model import HandlerRegistry, VehicleConfig, handler_key
from ..errors import UnboundHandlerError
from ..signals import Signal, warning_signal
from ..world.state import WorldState
from .timeline import TriggeredEvent

Waypoints = tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class VehicleScript:
    script_id: str
    waypoints: Waypoints
    speed: float
    overhead: bool = False


def _script(script_id: str, waypoints: Waypoints, speed: float, overhead: bool = False) -> VehicleScript:
    return VehicleScript(script_id=script_id, waypoints=waypoints, speed=speed, overhead=overhead)


SCRIPTS: dict[str, VehicleScript] = {
    s.script_id: s
    for s in (
        _script("crane.load_pass", ((-3.0, 3.0), (33.0, 3.0)), 4.0, overhead=True),
        _script("crane.hook_return", ((33.0, 3.0), (-3.0, 3.0)), 5.0, overhead=True),
        _script("crane.pipe_hoist", ((-3.0, 5.0), (33.0, 5.0)), 3.5, overhead=True),
        _script("crane.hook_return_far", ((33.0, 5.0), (-3.0, 5.0)), 5.0, overhead=True),
        _script("forklift.pallet_run", ((-2.0, 10.0), (32.0, 10.0)), 4.0),
        _script("forklift.storage_cut", ((-2.0, 6.0), (32.0, 6.0)), 4.0),
        _script("truck.delivery", ((32.0, 10.5), (-2.0, 10.5)), 5.0),
        _script("truck.reverse", ((15.0, 10.5), (15.0, 3.0)), 1.5),
        _script("excavator.dig", ((25.0, 9.0), (27.0, 9.0), (25.0, 9.0)), 1.0),
        _script("excavator.spoil", ((25.0, 9.0), (25.0, 11.0), (25.0, 9.0)), 1.0),
        _script("cranetruck.drive", ((-2.0, 9.0), (32.0, 9.0)), 4.0),
        _script("cranetruck.swing", ((10.0, 2.0), (20.0, 2.0)), 2.0, overhead=True),
        _script("towercrane.slew", ((15.0, 11.5), (15.0, 1.0)), 3.0, overhead=True),
        _script("towercrane.rebar", ((-3.0, 8.0), (33.0, 8.0)), 4.0, overhead=True),
        # explicit do-nothing behavior, available for stubbing events out
        _script("noop", (), 0.0),
    )
}

_BINDINGS = {
    "Crane_normals_1": "crane.load_pass",
    "Crane_normals_2": "crane.hook_return",
    "Crane_accidents_1": "crane.pipe_hoist",
    "Crane_accidents_2": "crane.hook_return_far",
    "Forklift_normals_1": "forklift.pallet_run",
    "Forklift_accidents_1": "forklift.storage_cut",
    "Truck_normals_1": "truck.delivery",
    "Truck_accidents_1": "truck.reverse",
    "Excavator_normals_1": "excavator.dig",
    "Excavator_normals_2": "excavator.spoil",
    "CraneTruck_normals_1": "cranetruck.drive",
    "CraneTruck_accidents_1": "cranetruck.swing",
    "TowerCrane_normals_1": "towercrane.slew",
    "TowerCrane_accidents_1": "towercrane.rebar",
}


def build_default_registry(vehicles: list[VehicleConfig] | None = None) -> HandlerRegistry:
    """Registry with every shipped binding; optionally restricted to ``vehicles``."""
    registry = HandlerRegistry()
    if vehicles is None:
        for key, script_id in _BINDINGS.items():
            registry.bind(key, script_id)
        return registry
    for vehicle in vehicles:
        for event in (*vehicle.normals, *vehicle.accidents):
            key = handler_key(vehicle.name, event.condition, event.id)
            if key in _BINDINGS:
                registry.bind(key, _BINDINGS[key])
    return registry


def fire(event: TriggeredEvent, world: WorldState, registry: HandlerRegistry) -> list[Signal]:
    """Run an event's start action and collect its signals.

    The behavior script is assigned to the event's vehicle (teleported to the
    path start); a configured warning becomes a broadcast signal. Events bound
    to the noop script leave the world untouched.
    """
    script_id = registry.resolve(event.vehicle, event.condition, event.event_id)
    script = SCRIPTS.get(script_id)
    if script is None:
        raise UnboundHandlerError(f"registry maps to unknown script {script_id!r}")
    signals: list[Signal] = []
    if script.waypoints:
        vehicle = world.get(f"vehicle:{event.vehicle}")
        if vehicle is not None:
            vehicle.path = tuple(script.waypoints)
            vehicle.speed = script.speed
            vehicle.progress = 0.0
            vehicle.pos = script.waypoints[0]
            vehicle.overhead = script.overhead
            vehicle.active_script = script.script_id
            world.touch(vehicle.id)
    if event.warning is not None:
        signals.append(warning_signal(event.warning))
    return signals
