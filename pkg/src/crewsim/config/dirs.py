"""Config directory loading and whole-corpus validation.

Layout on disk::

    <dir>/vehicles/*.yaml
    <dir>/scenarios/*.yaml
    <dir>/sessions/*.yaml
    <dir>/tasks/*.yaml
    <dir>/layouts/*.yaml
    <dir>/menus/*.yaml

Files are loaded in sorted order; errors are re-raised with the offending
file path prefixed so the ``validate`` CLI can point at it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..errors import SchemaError
from ..world.task import TargetLayout, TaskConfig
from .loader import (
    load_layout,
    load_menu_config,
    load_scenario,
    load_session,
    load_task,
    load_vehicle_config,
)
from .model import HandlerRegistry, MenuConfig, ScenarioConfig, SessionConfig, VehicleConfig


def shipped_config_dir() -> Path:
    """Path of the config corpus installed with the package."""
    return Path(resources.files("crewsim").joinpath("data", "configs"))


def shipped_instruments_dir() -> Path:
    return Path(resources.files("crewsim").joinpath("data", "instruments"))


@dataclass
class ConfigSet:
    vehicles: dict[str, VehicleConfig] = field(default_factory=dict)
    scenarios: dict[str, ScenarioConfig] = field(default_factory=dict)
    sessions: dict[str, SessionConfig] = field(default_factory=dict)
    tasks: dict[str, TaskConfig] = field(default_factory=dict)
    layouts: dict[str, TargetLayout] = field(default_factory=dict)
    menu: MenuConfig | None = None


def _yaml_files(directory: Path) -> list[Path]:
    if not directory.is_dir():
        return []
    return sorted(directory.glob("*.yaml"))


def load_config_dir(root: Path | str) -> ConfigSet:
    """Load every config family from ``root``, resolving all references."""
    root = Path(root)
    out = ConfigSet()

    def run(path: Path, fn):
        try:
            return fn(path.read_text(encoding="utf-8"))
        except SchemaError as exc:
            raise SchemaError(f"{path}: {exc}") from exc

    for path in _yaml_files(root / "vehicles"):
        vehicle = run(path, load_vehicle_config)
        if vehicle.name in out.vehicles:
            raise SchemaError(f"{path}: duplicate vehicle name {vehicle.name!r}")
        out.vehicles[vehicle.name] = vehicle

    vehicles = list(out.vehicles.values())
    for path in _yaml_files(root / "scenarios"):
        scenario = run(path, lambda text: load_scenario(text, vehicles))
        if scenario.name in out.scenarios:
            raise SchemaError(f"{path}: duplicate scenario name {scenario.name!r}")
        out.scenarios[scenario.name] = scenario

    for path in _yaml_files(root / "layouts"):
        layout = run(path, load_layout)
        if layout.name in out.layouts:
            raise SchemaError(f"{path}: duplicate layout name {layout.name!r}")
        out.layouts[layout.name] = layout

    for path in _yaml_files(root / "tasks"):
        task = run(path, load_task)
        if task.name in out.tasks:
            raise SchemaError(f"{path}: duplicate task name {task.name!r}")
        if task.layout not in out.layouts:
            raise SchemaError(f"{path}: task {task.name!r} references unknown layout {task.layout!r}")
        layout = out.layouts[task.layout]
        if len(layout.slots) != len(task.segments):
            raise SchemaError(
                f"{path}: task {task.name!r} has {len(task.segments)} segments but layout "
                f"{task.layout!r} has {len(layout.slots)} slots"
            )
        out.tasks[task.name] = task

    scenario_names = set(out.scenarios)
    task_names = set(out.tasks)
    for path in _yaml_files(root / "sessions"):
        session = run(path, lambda text: load_session(text, scenario_names, task_names))
        if session.name in out.sessions:
            raise SchemaError(f"{path}: duplicate session name {session.name!r}")
        out.sessions[session.name] = session

    menu_files = _yaml_files(root / "menus")
    if menu_files:
        if len(menu_files) > 1:
            raise SchemaError(f"{root / 'menus'}: expected a single menu config file")
        out.menu = run(menu_files[0], load_menu_config)

    return out


def validate_config_dir(root: Path | str, registry: HandlerRegistry | None = None) -> ConfigSet:
    """Load and cross-check a config directory; optional registry totality check."""
    configs = load_config_dir(root)
    if registry is not None:
        missing = registry.coverage_errors(list(configs.scenarios.values()))
        if missing:
            raise SchemaError(
                "scenarios reference events with no registered behavior script: "
                + ", ".join(missing)
            )
    return configs
