"""Timeline-driven event engine: scheduling, firing, vehicle motion."""

from .scripts import SCRIPTS, VehicleScript, build_default_registry, fire
from .timeline import Timeline, TimelineEntry, TriggeredEvent, advance, build_timeline
from .vehicles import collide_and_scatter, path_length, vehicle_step

__all__ = [
    "SCRIPTS",
    "Timeline",
    "TimelineEntry",
    "TriggeredEvent",
    "VehicleScript",
    "advance",
    "build_default_registry",
    "build_timeline",
    "collide_and_scatter",
    "fire",
    "path_length",
    "vehicle_step",
]
