"""Intent handlers: the pipe-installation state machine.

Every handler validates first and mutates only after all checks pass, so a
rejected intent never changes the world. Handlers return the haptic/warning
signals the intent produced.
"""

from __future__ import annotations

import math

from ..errors import (
    HeldConflictError,
    InvalidSpecError,
    LengthError,
    NoGlueError,
    NotGluedError,
    NotInLiftError,
    OutOfBoundsError,
    OutOfReachError,
    PreconditionError,
    RoleViolationError,
    SizeMismatchError,
)
from ..geometry import (
    HoldingPoint,
    JoystickInput,
    PIPE_DIAMETERS,
    PipeColor,
    PipeKind,
    PipeSpec,
    Pose2,
    WallPlane,
    clamp_fit,
    clamp_zones,
    compensate_to_wall,
    connect_transform,
    connector_geometry,
    end_frame,
    generate_pipe,
    shift_holding_point,
    snap_orientation,
)
from ..geometry.interactions import Zone
from ..signals import Signal, haptic_signal
from .entities import (
    FIXED,
    HELD,
    ON_WALL_LOOSE,
    PARTIALLY_FIXED,
    STORAGE,
    Clamp,
    Connector,
    Participant,
    Pipe,
)
from .state import WorldState

# the wall spans the ground line y=0: u runs along it, v is height
WALL = WallPlane(origin=(0.0, 0.0, 0.0), axis_u=(1.0, 0.0, 0.0), axis_v=(0.0, 0.0, 1.0))
WALL_TOUCH_DISTANCE = 0.5

_ENDS = ("a", "b")


# -- shared checks ------------------------------------------------------------


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise PreconditionError(message)


def _number(value, message: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise PreconditionError(message)
    return float(value)


def _vec(value, n: int, message: str) -> tuple[float, ...]:
    if not isinstance(value, (list, tuple)) or len(value) != n:
        raise PreconditionError(message)
    return tuple(_number(x, message) for x in value)


def _end(value) -> str:
    if value not in _ENDS:
        raise PreconditionError(f"end must be 'a' or 'b', got {value!r}")
    return value


def reach_limit(world: WorldState, actor: Participant) -> float:
    reach = world.task.rules.reach_height
    if actor.in_lift:
        reach += world.the_lift().height
    return reach


def _require_reach(world: WorldState, actor: Participant, height: float, what: str) -> None:
    if height > reach_limit(world, actor) + 1e-9:
        raise OutOfReachError(
            f"{what} at height {height:.2f} is beyond reach {reach_limit(world, actor):.2f}; "
            "use the scissor lift"
        )


def pipe_geometry(pipe: Pipe):
    return generate_pipe(
        PipeSpec(
            kind=PipeKind(pipe.pipe_kind),
            color=PipeColor(pipe.color),
            diameter=pipe.diameter,
            angle=0,
            arm_a=pipe.length,
        )
    )


def entity_geometry(entity):
    return pipe_geometry(entity) if entity.kind == "pipe" else connector_geometry(entity.diameter)


def entity_end_frame(entity, end: str):
    pose = Pose2(*entity.wall_pose)
    return end_frame(entity_geometry(entity), pose, end)


def _zone_to_dict(zone: Zone) -> dict:
    return {
        "index": zone.index,
        "center": [zone.center[0], zone.center[1]],
        "axial_offset": zone.axial_offset,
        "length": zone.length,
        "theta": zone.theta,
        "diameter": zone.diameter,
    }


# -- movement and holding ------------------------------------------------------


def do_move(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    pos = _vec(intent.get("pos"), 2, "move needs pos [x, y]")
    _require(not actor.in_lift, "exit the lift before walking")
    x0, y0, x1, y1 = world.site_bounds()
    actor.pos = (min(max(pos[0], x0), x1), min(max(pos[1], y0), y1))
    world.touch(actor.id)
    return []


def do_grab(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    target = world.get(intent.get("target"))
    _require(target is not None, f"no such entity: {intent.get('target')!r}")
    kind = target.kind
    _require(kind in ("pipe", "connector", "clamp", "glue"), f"cannot grab a {kind}")
    if getattr(target, "held_by", None) is not None:
        raise HeldConflictError(f"{target.id} is already held by {target.held_by}")
    _require(actor.held is None, "already holding something")
    if kind == "pipe":
        _require(
            target.status in (STORAGE, ON_WALL_LOOSE),
            f"pipe {target.id} is {target.status} and cannot be grabbed",
        )
        target.wall_pose = None
        target.zones = []
        target.status = HELD
        target.ground_pos = None
    elif kind == "connector":
        _require(target.status == STORAGE, f"connector {target.id} is {target.status}")
        target.status = HELD
        target.ground_pos = None
    elif kind == "clamp":
        _require(target.status == STORAGE, f"clamp {target.id} is {target.status}")
        target.status = HELD
        target.ground_pos = None
    else:  # glue tool
        target.ground_pos = None
    target.held_by = actor.id
    actor.held = target.id
    actor.holding_point = HoldingPoint.MIDDLE.value
    actor.held_cursor = None
    world.touch(target.id)
    world.touch(actor.id)
    return []


def do_move_held(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    _require(actor.held is not None, "nothing held")
    pos = _vec(intent.get("pos"), 3, "move_held needs pos [x, y, z]")
    axis = _vec(intent.get("axis", [1.0, 0.0, 0.0]), 3, "move_held axis must be [x, y, z]")
    actor.held_cursor = {"pos": list(pos), "axis": list(axis)}
    world.touch(actor.id)
    return []


def do_joystick(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    held = world.get(actor.held) if actor.held else None
    _require(held is not None and held.kind == "pipe", "holding-point control needs a held pipe")
    try:
        joystick = JoystickInput(intent.get("input"))
    except ValueError:
        raise PreconditionError(f"joystick input must be left/right/press, got {intent.get('input')!r}")
    actor.holding_point = shift_holding_point(HoldingPoint(actor.holding_point), joystick).value
    world.touch(actor.id)
    return []


def _drop_to_ground(world: WorldState, actor: Participant, entity, cursor: dict | None) -> None:
    if cursor is not None:
        x, y = cursor["pos"][0], max(cursor["pos"][1], 0.3)
    else:
        x, y = actor.pos
    x0, y0, x1, y1 = world.site_bounds()
    pos = (min(max(x, x0), x1), min(max(y, max(y0, 0.3)), y1))
    entity.ground_pos = pos
    if entity.kind != "glue":
        entity.status = STORAGE


def do_release(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    _require(actor.held is not None, "nothing held")
    entity = world.get(actor.held)
    cursor = actor.held_cursor
    if intent.get("pos") is not None:
        pos = _vec(intent["pos"], 3, "release pos must be [x, y, z]")
        axis = _vec(intent.get("axis", [1.0, 0.0, 0.0]), 3, "release axis must be [x, y, z]")
        cursor = {"pos": list(pos), "axis": list(axis)}

    signals: list[Signal] = []
    near_wall = cursor is not None and abs(cursor["pos"][1]) <= WALL_TOUCH_DISTANCE
    if entity.kind == "pipe" and near_wall:
        signals = _place_pipe_on_wall(world, actor, entity, cursor)
    else:
        _drop_to_ground(world, actor, entity, cursor)
    entity.held_by = None
    actor.held = None
    actor.held_cursor = None
    actor.holding_point = HoldingPoint.MIDDLE.value
    world.touch(entity.id)
    world.touch(actor.id)
    return signals


def _place_pipe_on_wall(
    world: WorldState, actor: Participant, pipe: Pipe, cursor: dict
) -> list[Signal]:
    """Compensate the cursor onto the wall, snap, compute zones, check reach."""
    rules = world.task.rules
    hold = compensate_to_wall(tuple(cursor["pos"]), tuple(cursor["axis"]), WALL)
    theta, snapped, haptic = snap_orientation(hold.theta, math.radians(rules.snap_tol_deg))
    # the cursor tracks the holding point; recover the pipe center from it
    axis_u, axis_v = math.cos(theta), math.sin(theta)
    offset = {
        HoldingPoint.MIDDLE.value: 0.0,
        HoldingPoint.LEFT_END.value: pipe.length / 2.0,
        HoldingPoint.RIGHT_END.value: -pipe.length / 2.0,
    }[actor.holding_point]
    center = Pose2(hold.u + axis_u * offset, hold.v + axis_v * offset, theta)
    zones = clamp_zones(pipe.length, pipe.diameter, center, on_wall=True)
    for zone in zones:
        _require_reach(world, actor, zone.center[1], "clamp zone")
    pipe.wall_pose = (center.u, center.v, center.theta)
    pipe.status = ON_WALL_LOOSE
    pipe.zones = [_zone_to_dict(z) for z in zones]
    pipe.ground_pos = None
    return [haptic_signal(haptic.value, actor.role)] if snapped else []


# -- installation steps -----------------------------------------------------------


def do_apply_glue(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    held = world.get(actor.held) if actor.held else None
    _require(held is not None and held.kind == "glue", "hold the glue tool to apply glue")
    target = world.get(intent.get("target"))
    _require(target is not None, f"no such entity: {intent.get('target')!r}")
    _require(target.kind in ("pipe", "connector"), "glue goes on pipe or connector ends")
    end = _end(intent.get("end"))
    _require(target.status == FIXED, f"{target.id} must be fixed to the wall before gluing")
    _require(not target.glued[end], f"end {end} of {target.id} is already glued")
    _require(target.joined[end] is None, f"end {end} of {target.id} already has a connection")
    if held.charges <= 0:
        raise NoGlueError("glue tool is empty; ask the fetcher for a refill")
    frame = entity_end_frame(target, end)
    _require_reach(world, actor, frame.position[1], "glue target")
    held.charges -= 1
    target.glued[end] = True
    world.touch(held.id)
    world.touch(target.id)
    return []


def do_place_clamp(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    held = world.get(actor.held) if actor.held else None
    _require(held is not None and held.kind == "clamp", "hold a clamp to place it")
    pipe = world.get(intent.get("target"))
    _require(pipe is not None and pipe.kind == "pipe", "clamps go on pipes")
    _require(pipe.status in (ON_WALL_LOOSE, PARTIALLY_FIXED), f"pipe {pipe.id} is {pipe.status}")
    zone_index = intent.get("zone")
    zone_dict = next((z for z in pipe.zones if z["index"] == zone_index), None)
    _require(zone_dict is not None, f"pipe {pipe.id} has no zone {zone_index!r}")
    _require(zone_index not in pipe.clamped, f"zone {zone_index} is already clamped")
    pos = _vec(intent.get("pos"), 2, "place_clamp needs pos [u, v]")
    _require_reach(world, actor, zone_dict["center"][1], "clamp zone")
    zone = Zone(
        index=zone_dict["index"],
        center=tuple(zone_dict["center"]),
        axial_offset=zone_dict["axial_offset"],
        length=zone_dict["length"],
        theta=zone_dict["theta"],
        diameter=zone_dict["diameter"],
    )
    if not clamp_fit(held.diameter, zone, pos, world.task.rules.clamp_tol):
        raise PreconditionError(
            f"clamp {held.id} (size {held.diameter}) does not fit zone {zone_index} "
            f"of pipe {pipe.id} at that position"
        )
    held.status = "installed"
    held.wall_pos = pos
    held.ground_pos = None
    held.held_by = None
    held.installed_on = (pipe.id, zone_index)
    actor.held = None
    actor.held_cursor = None
    pipe.clamped.append(zone_index)
    if len(pipe.clamped) == len(pipe.zones):
        pipe.status = FIXED
        pipe.zones = []  # zones disappear once the pipe is fixed
        world.completion_dirty = True
    else:
        pipe.status = PARTIALLY_FIXED
    world.touch(held.id)
    world.touch(pipe.id)
    world.touch(actor.id)
    return [haptic_signal("short", actor.role)]


def do_connect(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    held = world.get(actor.held) if actor.held else None
    _require(held is not None and held.kind in ("pipe", "connector"), "hold a pipe or connector")
    target = world.get(intent.get("target"))
    _require(target is not None, f"no such entity: {intent.get('target')!r}")
    _require(target.kind in ("pipe", "connector"), "connect to a pipe or connector end")
    _require(target.id != held.id, "cannot connect an object to itself")
    end = _end(intent.get("end"))
    held_end = _end(intent.get("held_end", "a"))
    _require(target.status == FIXED, f"{target.id} must be fixed before attaching to it")
    if held.diameter != target.diameter:
        raise SizeMismatchError(
            f"size {held.diameter} does not match size {target.diameter} of {target.id}"
        )
    if not target.glued[end]:
        raise NotGluedError(f"end {end} of {target.id} must be glued first")
    _require(target.joined[end] is None, f"end {end} of {target.id} already has a connection")
    frame = entity_end_frame(target, end)
    _require_reach(world, actor, frame.position[1], "connection point")
    pose = connect_transform(frame, entity_geometry(held), held_end)
    held.wall_pose = (pose.u, pose.v, pose.theta)
    held.ground_pos = None
    held.held_by = None
    held.joined[held_end] = target.id
    target.joined[end] = held.id
    actor.held = None
    actor.held_cursor = None
    if held.kind == "connector":
        held.status = FIXED
    else:
        held.status = PARTIALLY_FIXED
        zones = clamp_zones(
            held.length, held.diameter, pose, on_wall=True, joined_end=held_end
        )
        held.zones = [_zone_to_dict(z) for z in zones]
        held.clamped = []
    world.touch(held.id)
    world.touch(target.id)
    world.touch(actor.id)
    return []


# -- fetcher services ------------------------------------------------------------


def _quantize_length(value: float) -> float:
    return round(value * 1000.0) / 1000.0


def do_order_pipes(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    items = intent.get("items")
    if not isinstance(items, list) or not items:
        raise InvalidSpecError("order needs a non-empty item list")
    expanded: list[dict] = []
    for item in items:
        if not isinstance(item, dict):
            raise InvalidSpecError("each order item must be a mapping")
        try:
            kind = PipeKind(item.get("type")).value
            color = PipeColor(item.get("color")).value
        except ValueError as exc:
            raise InvalidSpecError(str(exc))
        size = item.get("size")
        if size not in PIPE_DIAMETERS:
            raise InvalidSpecError(f"size must be one of {PIPE_DIAMETERS}")
        length = _number(item.get("length"), "length must be a number")
        if length <= 0:
            raise InvalidSpecError("length must be positive")
        qty = item.get("qty", 1)
        if isinstance(qty, bool) or not isinstance(qty, int) or qty < 1:
            raise InvalidSpecError("qty must be an integer >= 1")
        expanded.extend(
            {"type": kind, "color": color, "size": size, "length": _quantize_length(length)}
            for _ in range(qty)
        )
    drone = world.the_drone()
    due = world.tick + round(world.task.rules.order_delay_s * world.tick_rate)
    drone.pending.append({"due_tick": due, "seq": world.order_seq, "items": expanded})
    world.order_seq += 1
    world.touch(drone.id)
    return []


def do_robot_dog(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    cuts_raw = intent.get("cuts", [])
    connectors_raw = intent.get("connectors", [])
    if not isinstance(cuts_raw, list) or not isinstance(connectors_raw, list):
        raise InvalidSpecError("cuts and connectors must be lists")
    _require(cuts_raw or connectors_raw, "robot dog job needs cuts and/or connectors")
    cuts = []
    for cut in cuts_raw:
        if not isinstance(cut, dict):
            raise InvalidSpecError("each cut must be a mapping")
        pipe = world.get(cut.get("pipe"))
        _require(
            pipe is not None and pipe.kind == "pipe" and pipe.status == STORAGE,
            f"cut target {cut.get('pipe')!r} is not a pipe in storage",
        )
        length = _number(cut.get("length"), "cut length must be a number")
        length = _quantize_length(length)
        if not 0 < length <= pipe.length:
            raise LengthError(
                f"cut length {length} must be in (0, {pipe.length}] for {pipe.id}"
            )
        cuts.append({"pipe": pipe.id, "length": length})
    connectors = []
    for conn in connectors_raw:
        if not isinstance(conn, dict):
            raise InvalidSpecError("each connector request must be a mapping")
        size = conn.get("size")
        if size not in PIPE_DIAMETERS:
            raise InvalidSpecError(f"connector size must be one of {PIPE_DIAMETERS}")
        qty = conn.get("qty", 1)
        if isinstance(qty, bool) or not isinstance(qty, int) or qty < 1:
            raise InvalidSpecError("qty must be an integer >= 1")
        connectors.append({"size": size, "qty": qty})
    dog = world.the_dog()
    dog.queue.append(
        {"seq": world.order_seq, "due_tick": None, "cuts": cuts, "connectors": connectors}
    )
    world.order_seq += 1
    world.touch(dog.id)
    return []


def do_refill(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    what = intent.get("refill")
    if what == "glue":
        glue = world.the_glue()
        glue.charges += world.task.rules.glue_refill
        world.touch(glue.id)
    elif what == "clamp":
        table = (4.0, 1.5)
        for diameter in PIPE_DIAMETERS:
            for _ in range(world.task.rules.clamp_refill_per_diameter):
                world.spawn_clamp(diameter, table)
    else:
        raise PreconditionError(f"refill must be 'glue' or 'clamp', got {what!r}")
    return []


# -- scissor lift ------------------------------------------------------------------


def do_enter_lift(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    lift = world.the_lift()
    _require(not actor.in_lift, "already in the lift")
    _require(lift.occupant is None, "the lift is occupied")
    dist = math.hypot(actor.pos[0] - lift.pos[0], actor.pos[1] - lift.pos[1])
    _require(
        dist <= world.task.rules.lift_proximity,
        f"too far from the lift ({dist:.2f} > {world.task.rules.lift_proximity})",
    )
    lift.occupant = actor.id
    actor.in_lift = True
    actor.pos = lift.pos
    world.touch(lift.id)
    world.touch(actor.id)
    return []


def do_exit_lift(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    lift = world.the_lift()
    if lift.occupant != actor.id or not actor.in_lift:
        raise NotInLiftError("not in the lift")
    lift.occupant = None
    actor.in_lift = False
    actor.pos = lift.pos
    world.touch(lift.id)
    world.touch(actor.id)
    return []


def do_lift_control(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    lift = world.the_lift()
    if lift.occupant != actor.id or not actor.in_lift:
        raise NotInLiftError("enter the lift to control it")
    direction = intent.get("dir")
    rules = world.task.rules
    step = rules.lift_step
    if direction == "up":
        if lift.height >= rules.lift_max_height - 1e-9:
            raise OutOfBoundsError("lift is at its maximum height")
        lift.height = min(lift.height + step, rules.lift_max_height)
    elif direction == "down":
        if lift.height <= 1e-9:
            raise OutOfBoundsError("lift is on the ground")
        lift.height = max(lift.height - step, 0.0)
    elif direction in ("left", "right"):
        dx = -step if direction == "left" else step
        new_x = lift.pos[0] + dx
        if not 0.0 <= new_x <= rules.wall_width:
            raise OutOfBoundsError("lift is at the workspace edge")
        lift.pos = (new_x, lift.pos[1])
        actor.pos = lift.pos
    else:
        raise PreconditionError(f"lift dir must be up/down/left/right, got {direction!r}")
    world.touch(lift.id)
    world.touch(actor.id)
    return []


# -- menus and chat -------------------------------------------------------------------


def do_menu(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    item_id = intent.get("item")
    if world.menu is None:
        raise PreconditionError("no menu configured")
    own = {i.item_id: i for i in world.menu.for_role(actor.role)}
    if item_id not in own:
        other_role = "fetcher" if actor.role == "installer" else "installer"
        other = {i.item_id for i in world.menu.for_role(other_role)}
        if item_id in other:
            raise RoleViolationError(f"menu item {item_id!r} is not on the {actor.role} menu")
        raise PreconditionError(f"unknown menu item {item_id!r}")
    item = own[item_id]
    if item.action_kind == "ready":
        if not actor.ready:
            actor.ready = True
            world.touch(actor.id)
    # npc_request and client_ui items have no server-side state effect; the
    # action log entry is the NPC request marker
    return []


def do_chat(world: WorldState, actor: Participant, intent: dict) -> list[Signal]:
    text = intent.get("text")
    _require(isinstance(text, str) and text != "", "chat needs non-empty text")
    _require(len(text) <= 500, "chat text too long")
    world.add_chat(actor.role, text)
    return []
