"""Authoritative world: entities, the task state machine, completion checks."""

from .completion import CompletionReport, check_completion
from .entities import (
    FETCHER,
    FIXED,
    HELD,
    INSTALLER,
    ON_WALL_LOOSE,
    PARTIALLY_FIXED,
    ROLES,
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
from .intents import INTENT_KINDS, INTENT_TABLE, apply_intent, roles_for
from .machines import process_drone, process_robot_dog
from .state import (
    PHASE_COMPLETE,
    PHASE_LOBBY,
    PHASE_MAIN,
    PHASE_TRAINING,
    WorldState,
    setup_world,
)
from .task import LayoutSlot, TargetLayout, TaskConfig, TaskRules, TaskSegment
from .views import role_view

__all__ = [
    "CompletionReport",
    "Clamp",
    "Connector",
    "Drone",
    "FETCHER",
    "FIXED",
    "GlueTool",
    "HELD",
    "INSTALLER",
    "INTENT_KINDS",
    "INTENT_TABLE",
    "LayoutSlot",
    "ON_WALL_LOOSE",
    "PARTIALLY_FIXED",
    "PHASE_COMPLETE",
    "PHASE_LOBBY",
    "PHASE_MAIN",
    "PHASE_TRAINING",
    "Participant",
    "Pipe",
    "ROLES",
    "RobotDog",
    "STORAGE",
    "ScissorLift",
    "TargetLayout",
    "TaskConfig",
    "TaskRules",
    "TaskSegment",
    "Vehicle",
    "WorldState",
    "apply_intent",
    "check_completion",
    "process_drone",
    "process_robot_dog",
    "role_view",
    "roles_for",
    "setup_world",
]
