"""Scripted Installer and Fetcher behaviors.

Both bots derive the same install plan from the layout in their welcome
view, swap their halves of the segment table over chat, then play their
role: the Fetcher sources materials (orders, cuts, connectors, refills), the
Installer builds chains on the wall, riding the scissor lift whenever the
work is above ground reach.

``canonical`` alternates prepare/install segment by segment;
``batch_prepare`` orders every pipe up front and installs afterwards.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from ..geometry import (
    EndFrame,
    PipeColor,
    PipeKind,
    PipeSpec,
    Pose2,
    connector_geometry,
    end_frame,
    generate_pipe,
)
from .client import BotClient

CANONICAL = "canonical"
BATCH_PREPARE = "batch_prepare"

CUT_EXTRA = 2.0  # the designated cut segment is ordered this much long

_CHAT_RE = re.compile(r"^seg (\d+)((?:\s+\w+=[^\s]+)+)$")


@dataclass
class BotScript:
    role: str
    policy: str = CANONICAL
    think_delay_ticks: int = 0
    chat_verbosity: int = 1


@dataclass
class Plan:
    """Shared installation plan, derived identically by both roles."""

    slots: dict[int, dict]
    chains: list[list[int]]
    install_order: list[int]
    cut_segment: int
    segments: dict[int, dict] = field(default_factory=dict)  # merged full specs

    def chain_start(self, index: int) -> bool:
        return any(chain[0] == index for chain in self.chains)

    def info_complete(self) -> bool:
        return all(
            set(self.segments.get(i, {})) >= {"type", "color", "size", "length"}
            for i in self.slots
        )

    def spec(self, index: int) -> dict:
        return self.segments[index]


def build_plan(view: dict) -> Plan:
    """Chains are the connected paths of the layout, installed low index first."""
    slots = {s["index"]: s for s in view["layout"]["slots"]}
    adjacency = {i: sorted(s["connects_to"]) for i, s in slots.items()}
    visited: set[int] = set()
    chains: list[list[int]] = []
    for start in sorted(slots):
        if start in visited:
            continue
        component = _collect_component(start, adjacency)
        visited |= set(component)
        ends = sorted(i for i in component if len(adjacency[i]) <= 1)
        head = ends[0] if ends else min(component)
        chains.append(_walk_path(head, adjacency))
    install_order = [i for chain in chains for i in chain]
    return Plan(
        slots=slots,
        chains=chains,
        install_order=install_order,
        cut_segment=max(slots),
    )


def _collect_component(start: int, adjacency: dict[int, list[int]]) -> list[int]:
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for nxt in adjacency[node]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return sorted(seen)


def _walk_path(head: int, adjacency: dict[int, list[int]]) -> list[int]:
    path = [head]
    prev = None
    node = head
    while True:
        nxt = [n for n in adjacency[node] if n != prev]
        if not nxt:
            return path
        prev, node = node, nxt[0]
        path.append(node)


# -- chat information exchange -----------------------------------------------------


def announcements(view: dict) -> list[str]:
    lines = []
    for segment in view["task"]["segments"]:
        fields = {k: v for k, v in segment.items() if k != "index"}
        body = " ".join(f"{k}={v}" for k, v in sorted(fields.items()))
        lines.append(f"seg {segment['index']} {body}")
    return lines


def absorb_chat(plan: Plan, text: str) -> None:
    match = _CHAT_RE.match(text)
    if not match:
        return
    index = int(match.group(1))
    fields = plan.segments.setdefault(index, {})
    for pair in match.group(2).split():
        key, value = pair.split("=", 1)
        if key == "size":
            fields[key] = int(value)
        elif key == "length":
            fields[key] = float(value)
        else:
            fields[key] = value


def seed_own_view(plan: Plan, view: dict) -> None:
    for segment in view["task"]["segments"]:
        fields = plan.segments.setdefault(segment["index"], {})
        fields.update({k: v for k, v in segment.items() if k != "index"})


# -- geometry helpers over mirror entities -------------------------------------------


def _entity_geometry(entity: dict):
    if entity["kind"] == "connector":
        return connector_geometry(entity["diameter"])
    return generate_pipe(
        PipeSpec(
            kind=PipeKind(entity["pipe_kind"]),
            color=PipeColor(entity["color"]),
            diameter=entity["diameter"],
            angle=0,
            arm_a=entity["length"],
        )
    )


def entity_end(entity: dict, end: str) -> EndFrame:
    pose = Pose2(*entity["wall_pose"])
    return end_frame(_entity_geometry(entity), pose, end)


def other_end(end: str) -> str:
    return "b" if end == "a" else "a"


def pick_glue_end(entity: dict, toward: tuple[float, float]) -> str:
    """Free end whose position is nearer the next slot's anchor."""
    best, best_dist = "a", float("inf")
    for end in ("a", "b"):
        if entity["joined"][end] is not None:
            continue
        frame = entity_end(entity, end)
        dist = math.hypot(frame.position[0] - toward[0], frame.position[1] - toward[1])
        if dist < best_dist:
            best, best_dist = end, dist
    return best


def pick_connector_end(fixed: EndFrame, diameter: int, pipe_length: float, toward) -> str:
    """Attach end that sends the next pipe toward the target anchor."""
    from ..geometry import connect_transform

    geom = connector_geometry(diameter)
    best, best_dist = "a", float("inf")
    for held_end in ("a", "b"):
        pose = connect_transform(fixed, geom, held_end)
        free = end_frame(geom, pose, other_end(held_end))
        center = (
            free.position[0] + free.outward[0] * pipe_length / 2.0,
            free.position[1] + free.outward[1] * pipe_length / 2.0,
        )
        dist = math.hypot(center[0] - toward[0], center[1] - toward[1])
        if dist < best_dist:
            best, best_dist = held_end, dist
    return best


# -- installer ---------------------------------------------------------------------


class InstallerBot:
    def __init__(self, client: BotClient, script: BotScript):
        self.client = client
        self.script = script
        self.plan: Plan | None = None
        self._last_action_tick = 0

    async def _act(self, **intent) -> dict:
        action = await self.client.act(**intent)
        await self._think()
        return action

    async def _think(self) -> None:
        delay = self.script.think_delay_ticks
        if delay <= 0:
            return
        target = self.client.mirror.tick + delay
        await self.client.wait_for(lambda: self.client.mirror.tick >= target, what="think delay")

    async def run(self) -> None:
        client = self.client
        welcome = await client.hello()
        view = welcome["view"]
        self.plan = build_plan(view)
        seed_own_view(self.plan, view)
        for line in announcements(view):
            await client.chat(line)
        await self._board_lift()
        await self._act(kind="menu", item="ready")
        await client.wait_for(lambda: client.mirror.phase in ("main", "complete"), what="main phase")
        await client.wait_for(self._info_ready, what="segment info over chat")
        for chain in self.plan.chains:
            await self._install_chain(chain)
        await client.wait_for(lambda: client.mirror.phase == "complete", what="completion")

    def _info_ready(self) -> bool:
        for entry in self.client.mirror.chat:
            absorb_chat(self.plan, entry["text"])
        return self.plan.info_complete()

    async def _board_lift(self) -> None:
        lift = self.client.mirror.by_kind("lift")[0]
        await self._act(kind="move", pos=lift["pos"])
        await self._act(kind="enter_lift")

    def _reach(self) -> float:
        lift = self.client.mirror.by_kind("lift")[0]
        rules = self.client.welcome["view"]["rules"]
        return rules["reach_height"] + lift["height"]

    async def _ensure_reach(self, height: float) -> None:
        while self._reach() < height - 1e-9:
            await self._act(kind="lift", dir="up")

    async def _wait_pipe(self, spec: dict) -> dict:
        rules = self.client.welcome["view"]["rules"]
        return await self.client.wait_for(
            lambda: self.client.mirror.find_storage_pipe(spec, rules["length_tol"] / 2.0),
            what=f"pipe {spec}",
        )

    async def _wait_item(self, kind: str, diameter: int) -> dict:
        return await self.client.wait_for(
            lambda: self.client.mirror.find_storage(kind, diameter),
            what=f"{kind} size {diameter}",
        )

    async def _clamp_all_zones(self, pipe_id: str, size: int) -> None:
        while True:
            pipe = self.client.mirror.entities[pipe_id]
            open_zones = [z for z in pipe["zones"] if z["index"] not in pipe["clamped"]]
            if not open_zones:
                break
            zone = min(open_zones, key=lambda z: z["center"][1])  # low work first
            clamp = await self._wait_item("clamp", size)
            await self._ensure_reach(zone["center"][1])
            await self._act(kind="grab", target=clamp["id"])
            await self._act(
                kind="place_clamp", target=pipe_id, zone=zone["index"], pos=zone["center"]
            )

    async def _glue(self, target_id: str, end: str) -> None:
        glue = self.client.mirror.by_kind("glue")[0]
        frame = entity_end(self.client.mirror.entities[target_id], end)
        await self._ensure_reach(frame.position[1])
        await self._act(kind="grab", target=glue["id"])
        await self._act(kind="apply_glue", target=target_id, end=end)
        await self._act(kind="release")

    async def _install_chain(self, chain: list[int]) -> None:
        plan = self.plan
        prev: tuple[str, str] | None = None  # (entity id, free end)
        for position, index in enumerate(chain):
            spec = plan.spec(index)
            slot = plan.slots[index]
            pipe = await self._wait_pipe(spec)
            if prev is None:
                pipe_id = await self._place_first(pipe, slot)
            else:
                pipe_id = await self._attach_via_connector(prev, pipe, spec, slot)
            await self._clamp_all_zones(pipe_id, spec["size"])
            if position + 1 < len(chain):
                next_anchor = tuple(plan.slots[chain[position + 1]]["anchor"])
                entity = self.client.mirror.entities[pipe_id]
                prev = (pipe_id, pick_glue_end(entity, next_anchor))

    async def _place_first(self, pipe: dict, slot: dict) -> str:
        u, v = slot["anchor"]
        horizontal = slot["orientation"] == "horizontal"
        axis = [1.0, 0.0, 0.01] if horizontal else [0.01, 0.0, 1.0]
        # placement is checked against the highest clamp zone (0.9 of length)
        top_zone = v if horizontal else v + 0.4 * pipe["length"]
        await self._ensure_reach(top_zone)
        await self._act(kind="grab", target=pipe["id"])
        await self._act(kind="release", pos=[u, 0.2, v], axis=axis)
        return pipe["id"]

    async def _attach_via_connector(
        self, prev: tuple[str, str], pipe: dict, spec: dict, slot: dict
    ) -> str:
        prev_id, prev_end = prev
        size = spec["size"]
        anchor = tuple(slot["anchor"])
        await self._glue(prev_id, prev_end)
        connector = await self._wait_item("connector", size)
        fixed = entity_end(self.client.mirror.entities[prev_id], prev_end)
        held_end = pick_connector_end(fixed, size, spec["length"], anchor)
        await self._ensure_reach(fixed.position[1])
        await self._act(kind="grab", target=connector["id"])
        await self._act(kind="connect", target=prev_id, end=prev_end, held_end=held_end)
        conn_free = other_end(held_end)
        await self._glue(connector["id"], conn_free)
        free_frame = entity_end(self.client.mirror.entities[connector["id"]], conn_free)
        await self._ensure_reach(free_frame.position[1])
        await self._act(kind="grab", target=pipe["id"])
        await self._act(kind="connect", target=connector["id"], end=conn_free, held_end="a")
        return pipe["id"]


# -- fetcher -----------------------------------------------------------------------


class FetcherBot:
    def __init__(self, client: BotClient, script: BotScript):
        self.client = client
        self.script = script
        self.plan: Plan | None = None

    async def _act(self, **intent) -> dict:
        return await self.client.act(**intent)

    async def run(self) -> None:
        client = self.client
        welcome = await client.hello()
        view = welcome["view"]
        self.plan = build_plan(view)
        seed_own_view(self.plan, view)
        for line in announcements(view):
            await client.chat(line)
        await self._act(kind="menu", item="ready")
        await client.wait_for(lambda: client.mirror.phase in ("main", "complete"), what="main phase")
        await client.wait_for(self._info_ready, what="segment info over chat")
        await self._stock_consumables(view)
        if self.script.policy == BATCH_PREPARE:
            await self._prepare_everything()
        else:
            await self._prepare_alternating()
        await client.wait_for(lambda: client.mirror.phase == "complete", what="completion")

    def _info_ready(self) -> bool:
        for entry in self.client.mirror.chat:
            absorb_chat(self.plan, entry["text"])
        return self.plan.info_complete()

    def _clamps_needed(self) -> dict[int, int]:
        needed: dict[int, int] = {}
        for chain in self.plan.chains:
            for position, index in enumerate(chain):
                size = self.plan.spec(index)["size"]
                needed[size] = needed.get(size, 0) + (2 if position == 0 else 1)
        return needed

    def _junctions(self) -> list[int]:
        """Slot indices that attach to the previous chain element."""
        return [index for chain in self.plan.chains for index in chain[1:]]

    async def _stock_consumables(self, view: dict) -> None:
        rules = view["rules"]
        per_refill = rules["clamp_refill_per_diameter"]
        refills = max(
            (count + per_refill - 1) // per_refill for count in self._clamps_needed().values()
        )
        for _ in range(refills):
            await self._act(kind="refill", refill="clamp")
        glue_needed = 2 * len(self._junctions())
        glue = self.client.mirror.by_kind("glue")[0]
        missing = glue_needed - glue["charges"]
        glue_refills = 0 if missing <= 0 else (missing + rules["glue_refill"] - 1) // rules["glue_refill"]
        for _ in range(glue_refills):
            await self._act(kind="refill", refill="glue")

    def _order_item(self, index: int) -> dict:
        spec = self.plan.spec(index)
        length = spec["length"] + (CUT_EXTRA if index == self.plan.cut_segment else 0.0)
        return {"type": spec["type"], "color": spec["color"], "size": spec["size"], "length": length}

    async def _cut_to_length(self, index: int) -> None:
        spec = self.plan.spec(index)
        oversized = {**self._order_item(index)}
        pipe = await self.client.wait_for(
            lambda: self.client.mirror.find_storage_pipe(oversized), what="oversized pipe"
        )
        await self._act(kind="robot_dog", cuts=[{"pipe": pipe["id"], "length": spec["length"]}])

    async def _prepare_everything(self) -> None:
        items = [self._order_item(i) for i in self.plan.install_order]
        await self._act(kind="order_pipes", items=items)
        connectors: dict[int, int] = {}
        for index in self._junctions():
            size = self.plan.spec(index)["size"]
            connectors[size] = connectors.get(size, 0) + 1
        if connectors:
            await self._act(
                kind="robot_dog",
                connectors=[{"size": s, "qty": q} for s, q in sorted(connectors.items())],
            )
        await self._cut_to_length(self.plan.cut_segment)

    async def _prepare_alternating(self) -> None:
        junctions = set(self._junctions())
        fixed_before = self._fixed_count()
        for position, index in enumerate(self.plan.install_order):
            await self._act(kind="order_pipes", items=[self._order_item(index)])
            if index in junctions:
                size = self.plan.spec(index)["size"]
                await self._act(kind="robot_dog", connectors=[{"size": size, "qty": 1}])
            if index == self.plan.cut_segment:
                await self._cut_to_length(index)
            target = fixed_before + position + 1
            await self.client.wait_for(
                lambda: self._fixed_count() >= target or self.client.mirror.phase == "complete",
                what=f"segment {index} installed",
            )

    def _fixed_count(self) -> int:
        return sum(1 for p in self.client.mirror.by_kind("pipe") if p["status"] == "fixed")
