"""YAML configuration: schemas, loaders, and the event handler registry."""

from .dirs import ConfigSet, load_config_dir, shipped_config_dir, shipped_instruments_dir, validate_config_dir
from .loader import (
    dump_yaml,
    layout_to_mapping,
    load_layout,
    load_menu_config,
    load_scenario,
    load_session,
    load_task,
    load_vehicle_config,
    menu_to_mapping,
    parse_yaml,
    scenario_to_mapping,
    session_to_mapping,
    task_to_mapping,
    vehicle_to_mapping,
)
from .model import (
    Condition,
    EventDef,
    HandlerRegistry,
    MenuConfig,
    MenuItem,
    ScenarioConfig,
    ScenarioEntry,
    SessionConfig,
    VehicleConfig,
    handler_key,
    resolve_handler,
)

__all__ = [
    "Condition",
    "ConfigSet",
    "EventDef",
    "HandlerRegistry",
    "MenuConfig",
    "MenuItem",
    "ScenarioConfig",
    "ScenarioEntry",
    "SessionConfig",
    "VehicleConfig",
    "dump_yaml",
    "handler_key",
    "layout_to_mapping",
    "load_config_dir",
    "load_layout",
    "load_menu_config",
    "load_scenario",
    "load_session",
    "load_task",
    "load_vehicle_config",
    "menu_to_mapping",
    "parse_yaml",
    "resolve_handler",
    "scenario_to_mapping",
    "session_to_mapping",
    "shipped_config_dir",
    "shipped_instruments_dir",
    "task_to_mapping",
    "validate_config_dir",
    "vehicle_to_mapping",
]
