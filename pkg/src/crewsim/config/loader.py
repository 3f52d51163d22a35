"""Strict YAML loaders for every config family, plus round-trip serializers.

Unknown keys are rejected rather than ignored: configs are the researcher
API and a silent typo is worse than an error. Loaders take YAML text so they
stay pure; directory walking lives in ``dirs``.
"""

from __future__ import annotations

from typing import Any

import yaml

from ..errors import (
    ConditionMismatchError,
    DuplicateIdError,
    SchemaError,
    UnknownEventError,
    UnknownVehicleError,
    VisibilityOverlapError,
)
from ..geometry import PIPE_DIAMETERS, PipeColor, PipeKind
from ..world.task import (
    TASK_FIELDS,
    HORIZONTAL,
    VERTICAL,
    LayoutSlot,
    TargetLayout,
    TaskConfig,
    TaskRules,
    TaskSegment,
)
from .model import (
    Condition,
    EventDef,
    MenuConfig,
    MenuItem,
    ScenarioConfig,
    ScenarioEntry,
    SessionConfig,
    VehicleConfig,
)


def parse_yaml(text: str, ctx: str = "config") -> Any:
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise SchemaError(f"{ctx}: invalid YAML{where}: {exc}") from exc


class _Node:
    """One mapping node: typed field access with unknown-key rejection."""

    def __init__(self, raw: Any, ctx: str):
        if not isinstance(raw, dict):
            raise SchemaError(f"{ctx}: expected a mapping, got {type(raw).__name__}")
        self.raw = dict(raw)
        self.ctx = ctx

    def take(self, key: str, required: bool = True, default: Any = None) -> Any:
        if key not in self.raw:
            if required:
                raise SchemaError(f"{self.ctx}: missing required key {key!r}")
            return default
        return self.raw.pop(key)

    def take_str(self, key: str, required: bool = True, default: Any = None) -> Any:
        value = self.take(key, required, default)
        if value is default and not required:
            return value
        if not isinstance(value, str):
            raise SchemaError(f"{self.ctx}: key {key!r} must be a string")
        return value

    def take_int(self, key: str, required: bool = True, default: Any = None) -> Any:
        value = self.take(key, required, default)
        if value is default and not required:
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaError(f"{self.ctx}: key {key!r} must be an integer")
        return value

    def take_number(self, key: str, required: bool = True, default: Any = None) -> Any:
        value = self.take(key, required, default)
        if value is default and not required:
            return value
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"{self.ctx}: key {key!r} must be a number")
        return float(value)

    def take_bool(self, key: str, default: bool = False) -> bool:
        value = self.take(key, required=False, default=default)
        if not isinstance(value, bool):
            raise SchemaError(f"{self.ctx}: key {key!r} must be a boolean")
        return value

    def take_list(self, key: str, required: bool = True, default: Any = None) -> Any:
        value = self.take(key, required, default)
        if value is None and not required:
            return default
        if not isinstance(value, list):
            raise SchemaError(f"{self.ctx}: key {key!r} must be a list")
        return value

    def finish(self) -> None:
        if self.raw:
            extra = ", ".join(sorted(self.raw))
            raise SchemaError(f"{self.ctx}: unknown keys: {extra}")


# -- vehicles ------------------------------------------------------------------


def _load_event(raw: Any, partition: str, ctx: str) -> EventDef:
    node = _Node(raw, ctx)
    event_id = node.take_int("id")
    if event_id <= 0:
        raise SchemaError(f"{ctx}: event id must be positive, got {event_id}")
    cond_text = node.take_str("condition")
    try:
        condition = Condition(cond_text)
    except ValueError:
        raise SchemaError(f"{ctx}: condition must be 'Normal' or 'Accident', got {cond_text!r}")
    if condition.partition != partition:
        raise ConditionMismatchError(
            f"{ctx}: condition {cond_text!r} does not belong in the {partition!r} partition"
        )
    desc = node.take_str("desc")
    warning = node.take_str("warning", required=False)
    if warning is not None and not warning:
        raise SchemaError(f"{ctx}: warning, when present, must be non-empty")
    node.finish()
    return EventDef(id=event_id, condition=condition, desc=desc, warning=warning)


def _load_partition(raw: Any, partition: str, ctx: str) -> tuple[EventDef, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise SchemaError(f"{ctx}: {partition!r} must be a list")
    events = tuple(
        _load_event(item, partition, f"{ctx}.{partition}[{i}]") for i, item in enumerate(raw)
    )
    seen: set[int] = set()
    for ev in events:
        if ev.id in seen:
            raise DuplicateIdError(f"{ctx}: duplicate id {ev.id} in {partition!r}")
        seen.add(ev.id)
    return events


def load_vehicle_config(text: str) -> VehicleConfig:
    node = _Node(parse_yaml(text, "vehicle"), "vehicle")
    name = node.take_str("name")
    desc = node.take_str("desc")
    game_object = node.take_str("gameObject")
    events = _Node(node.take("events"), f"vehicle {name!r} events")
    normals = _load_partition(events.take("normals", required=False), "normals", name)
    accidents = _load_partition(events.take("accidents", required=False), "accidents", name)
    events.finish()
    node.finish()
    return VehicleConfig(
        name=name, desc=desc, game_object=game_object, normals=normals, accidents=accidents
    )


# -- scenarios -----------------------------------------------------------------


def load_scenario(text: str, vehicles: list[VehicleConfig]) -> ScenarioConfig:
    by_name = {v.name: v for v in vehicles}
    node = _Node(parse_yaml(text, "scenario"), "scenario")
    name = node.take_str("name")
    entries_raw = node.take_list("entries", required=False, default=[])
    node.finish()
    entries = []
    for i, raw in enumerate(entries_raw):
        ctx = f"scenario {name!r} entries[{i}]"
        entry = _Node(raw, ctx)
        offset = entry.take_number("time_offset")
        if offset < 0:
            raise SchemaError(f"{ctx}: time_offset must be >= 0")
        vehicle_name = entry.take_str("vehicle")
        cond_text = entry.take_str("condition")
        try:
            condition = Condition(cond_text)
        except ValueError:
            raise SchemaError(f"{ctx}: condition must be 'Normal' or 'Accident', got {cond_text!r}")
        event_id = entry.take_int("event_id")
        entry.finish()
        vehicle = by_name.get(vehicle_name)
        if vehicle is None:
            raise UnknownVehicleError(f"{ctx}: vehicle {vehicle_name!r} is not loaded")
        event = vehicle.find_event(condition, event_id)
        if event is None:
            raise UnknownEventError(
                f"{ctx}: vehicle {vehicle_name!r} has no {condition.partition} event id {event_id}"
            )
        entries.append(
            ScenarioEntry(
                time_offset=offset,
                vehicle=vehicle_name,
                condition=condition,
                event_id=event_id,
                event=event,
            )
        )
    return ScenarioConfig(name=name, entries=tuple(entries))


# -- sessions ------------------------------------------------------------------


def load_session(text: str, scenario_names: set[str], task_names: set[str]) -> SessionConfig:
    node = _Node(parse_yaml(text, "session"), "session")
    name = node.take_str("name")
    scenarios = node.take_list("scenarios")
    for s in scenarios:
        if not isinstance(s, str):
            raise SchemaError(f"session {name!r}: scenarios must be a list of names")
        if s not in scenario_names:
            raise SchemaError(f"session {name!r}: unknown scenario {s!r}")
    task = node.take_str("task")
    if task not in task_names:
        raise SchemaError(f"session {name!r}: unknown task {task!r}")
    tick_rate = node.take_int("tick_rate_hz")
    if tick_rate <= 0:
        raise SchemaError(f"session {name!r}: tick_rate_hz must be positive")
    seed = node.take_int("seed")
    if not 0 <= seed < 2**64:
        raise SchemaError(f"session {name!r}: seed must fit in 64 unsigned bits")
    node.finish()
    return SessionConfig(
        name=name, scenarios=tuple(scenarios), task=task, tick_rate_hz=tick_rate, seed=seed
    )


# -- tasks ---------------------------------------------------------------------


def _load_visibility(raw: Any, ctx: str) -> frozenset[str]:
    if not isinstance(raw, list):
        raise SchemaError(f"{ctx}: visibility must be a list of field names")
    for item in raw:
        if item not in TASK_FIELDS:
            raise SchemaError(f"{ctx}: unknown task field {item!r} (expected one of {TASK_FIELDS})")
    return frozenset(raw)


def load_task(text: str) -> TaskConfig:
    node = _Node(parse_yaml(text, "task"), "task")
    name = node.take_str("name")
    layout = node.take_str("layout")
    segments_raw = node.take_list("segments")
    rules_raw = node.take("rules", required=False, default={})
    node.finish()

    segments = []
    for i, raw in enumerate(segments_raw):
        ctx = f"task {name!r} segments[{i}]"
        seg = _Node(raw, ctx)
        index = seg.take_int("index")
        try:
            color = PipeColor(seg.take_str("color"))
            kind = PipeKind(seg.take_str("type"))
        except ValueError as exc:
            raise SchemaError(f"{ctx}: {exc}")
        size = seg.take_int("size")
        if size not in PIPE_DIAMETERS:
            raise SchemaError(f"{ctx}: size must be one of {PIPE_DIAMETERS}")
        length = seg.take_number("length")
        if length <= 0:
            raise SchemaError(f"{ctx}: length must be positive")
        installer_visible = _load_visibility(seg.take_list("installer_visible"), ctx)
        fetcher_visible = _load_visibility(seg.take_list("fetcher_visible"), ctx)
        seg.finish()
        for fname in TASK_FIELDS:
            if fname not in installer_visible and fname not in fetcher_visible:
                raise VisibilityOverlapError(
                    f"{ctx}: field {fname!r} is visible to neither role"
                )
        segments.append(
            TaskSegment(
                index=index,
                color=color,
                kind=kind,
                size=size,
                length=length,
                installer_visible=installer_visible,
                fetcher_visible=fetcher_visible,
            )
        )
    if [s.index for s in segments] != list(range(1, len(segments) + 1)):
        raise SchemaError(f"task {name!r}: segment indices must be 1..n contiguous")

    rules_node = _Node(rules_raw, f"task {name!r} rules")
    defaults = TaskRules()
    storage = rules_node.take_list("storage_rect", required=False, default=None)
    if storage is not None:
        if len(storage) != 4 or not all(isinstance(x, (int, float)) for x in storage):
            raise SchemaError(f"task {name!r} rules: storage_rect must be [x0, y0, x1, y1]")
        storage = tuple(float(x) for x in storage)
    kwargs: dict[str, Any] = {} if storage is None else {"storage_rect": storage}
    for fname, ftype in (
        ("snap_tol_deg", float), ("clamp_tol", float), ("length_tol", float),
        ("reach_height", float), ("order_delay_s", float), ("cut_delay_s", float),
        ("min_piece", float), ("glue_charges", int), ("glue_refill", int),
        ("clamp_refill_per_diameter", int), ("lift_step", float), ("lift_proximity", float),
        ("lift_max_height", float), ("wall_width", float), ("wall_height", float),
        ("site_depth", float), ("scatter_radius", float),
    ):
        if ftype is int:
            value = rules_node.take_int(fname, required=False, default=None)
        else:
            value = rules_node.take_number(fname, required=False, default=None)
        if value is not None:
            kwargs[fname] = value
    rules_node.finish()
    rules = TaskRules(**kwargs) if kwargs else defaults
    return TaskConfig(name=name, layout=layout, segments=tuple(segments), rules=rules)


# -- layouts -------------------------------------------------------------------


def load_layout(text: str) -> TargetLayout:
    node = _Node(parse_yaml(text, "layout"), "layout")
    name = node.take_str("name")
    slots_raw = node.take_list("slots")
    node.finish()
    slots = []
    for i, raw in enumerate(slots_raw):
        ctx = f"layout {name!r} slots[{i}]"
        slot = _Node(raw, ctx)
        index = slot.take_int("index")
        orientation = slot.take_str("orientation")
        if orientation not in (HORIZONTAL, VERTICAL):
            raise SchemaError(f"{ctx}: orientation must be 'horizontal' or 'vertical'")
        anchor = slot.take_list("anchor")
        if len(anchor) != 2 or not all(isinstance(x, (int, float)) for x in anchor):
            raise SchemaError(f"{ctx}: anchor must be [u, v]")
        connects = slot.take_list("connects_to", required=False, default=[])
        for c in connects:
            if isinstance(c, bool) or not isinstance(c, int):
                raise SchemaError(f"{ctx}: connects_to must be a list of slot indices")
        endpoint = slot.take_bool("endpoint")
        boxed = slot.take_bool("boxed")
        slot.finish()
        slots.append(
            LayoutSlot(
                index=index,
                orientation=orientation,
                anchor=(float(anchor[0]), float(anchor[1])),
                connects_to=tuple(connects),
                endpoint=endpoint,
                boxed=boxed,
            )
        )
    layout = TargetLayout(name=name, slots=tuple(slots))
    layout.validate()
    return layout


# -- menus ---------------------------------------------------------------------

_MENU_ACTIONS = ("npc_request", "ready", "client_ui")


def _load_menu_items(raw: Any, ctx: str) -> tuple[MenuItem, ...]:
    if not isinstance(raw, list):
        raise SchemaError(f"{ctx}: must be a list of menu items")
    items = []
    seen: set[str] = set()
    for i, item_raw in enumerate(raw):
        node = _Node(item_raw, f"{ctx}[{i}]")
        item_id = node.take_str("item_id")
        label = node.take_str("label")
        action = node.take_str("action_kind")
        if action not in _MENU_ACTIONS:
            raise SchemaError(f"{ctx}[{i}]: action_kind must be one of {_MENU_ACTIONS}")
        node.finish()
        if item_id in seen:
            raise DuplicateIdError(f"{ctx}: duplicate item id {item_id!r}")
        seen.add(item_id)
        items.append(MenuItem(item_id=item_id, label=label, action_kind=action))
    return tuple(items)


def load_menu_config(text: str) -> MenuConfig:
    node = _Node(parse_yaml(text, "menu"), "menu")
    name = node.take_str("name")
    installer = _load_menu_items(node.take("installer"), f"menu {name!r} installer")
    fetcher = _load_menu_items(node.take("fetcher"), f"menu {name!r} fetcher")
    node.finish()
    return MenuConfig(name=name, installer=installer, fetcher=fetcher)


# -- serialization (round-trip) --------------------------------------------------


def _event_to_mapping(ev: EventDef) -> dict:
    out: dict[str, Any] = {"id": ev.id, "condition": ev.condition.value, "desc": ev.desc}
    if ev.warning is not None:
        out["warning"] = ev.warning
    return out


def vehicle_to_mapping(v: VehicleConfig) -> dict:
    return {
        "name": v.name,
        "desc": v.desc,
        "gameObject": v.game_object,
        "events": {
            "normals": [_event_to_mapping(e) for e in v.normals],
            "accidents": [_event_to_mapping(e) for e in v.accidents],
        },
    }


def scenario_to_mapping(s: ScenarioConfig) -> dict:
    return {
        "name": s.name,
        "entries": [
            {
                "time_offset": e.time_offset,
                "vehicle": e.vehicle,
                "condition": e.condition.value,
                "event_id": e.event_id,
            }
            for e in s.entries
        ],
    }


def session_to_mapping(s: SessionConfig) -> dict:
    return {
        "name": s.name,
        "scenarios": list(s.scenarios),
        "task": s.task,
        "tick_rate_hz": s.tick_rate_hz,
        "seed": s.seed,
    }


def task_to_mapping(t: TaskConfig) -> dict:
    return {
        "name": t.name,
        "layout": t.layout,
        "segments": [
            {
                "index": seg.index,
                "color": seg.color.value,
                "type": seg.kind.value,
                "size": seg.size,
                "length": seg.length,
                "installer_visible": sorted(seg.installer_visible),
                "fetcher_visible": sorted(seg.fetcher_visible),
            }
            for seg in t.segments
        ],
        "rules": {
            fname: list(value) if isinstance(value, tuple) else value
            for fname, value in (
                (f, getattr(t.rules, f)) for f in TaskRules.__dataclass_fields__
            )
        },
    }


def layout_to_mapping(layout: TargetLayout) -> dict:
    out_slots = []
    for slot in layout.slots:
        m: dict[str, Any] = {
            "index": slot.index,
            "orientation": slot.orientation,
            "anchor": list(slot.anchor),
            "connects_to": list(slot.connects_to),
        }
        if slot.endpoint:
            m["endpoint"] = True
        if slot.boxed:
            m["boxed"] = True
        out_slots.append(m)
    return {"name": layout.name, "slots": out_slots}


def menu_to_mapping(menu: MenuConfig) -> dict:
    def items(entries: tuple[MenuItem, ...]) -> list[dict]:
        return [
            {"item_id": i.item_id, "label": i.label, "action_kind": i.action_kind}
            for i in entries
        ]

    return {"name": menu.name, "installer": items(menu.installer), "fetcher": items(menu.fetcher)}


def dump_yaml(mapping: dict) -> str:
    return yaml.safe_dump(mapping, sort_keys=False)
