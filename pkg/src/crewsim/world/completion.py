"""Completion checking: attribute-and-adjacency matching against the layout.

A wall is complete when some injective slot-to-pipe assignment satisfies
every slot's attributes (color/type/size exact, length within tolerance,
orientation class, pipe fixed) and realizes every layout junction through a
connector. Matching ignores coordinates: the layout graph, not exact
placement, is the ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .entities import FIXED, Pipe
from .state import WorldState
from .task import HORIZONTAL, TargetLayout, TaskConfig, VERTICAL

_ORIENT_TOL = 1e-6

MATCHED = "matched"
MISMATCH = "mismatch"
UNMATCHED = "unmatched"


def orientation_of(theta: float) -> str | None:
    half_pi = math.pi / 2.0
    for axis, name in ((0.0, HORIZONTAL), (math.pi, HORIZONTAL), (half_pi, VERTICAL), (-half_pi, VERTICAL)):
        if abs(math.remainder(theta - axis, 2.0 * math.pi)) <= _ORIENT_TOL:
            return name
    return None


def attribute_mismatches(segment, slot, pipe: Pipe, length_tol: float) -> list[str]:
    """Fields of ``pipe`` that fail the slot's requirements (empty = match)."""
    bad = []
    if pipe.color != segment.color.value:
        bad.append("color")
    if pipe.pipe_kind != segment.kind.value:
        bad.append("type")
    if pipe.diameter != segment.size:
        bad.append("size")
    if abs(pipe.length - segment.length) > length_tol:
        bad.append("length")
    pipe_orientation = None if pipe.wall_pose is None else orientation_of(pipe.wall_pose[2])
    if pipe_orientation != slot.orientation:
        bad.append("orientation")
    if pipe.status != FIXED:
        bad.append("fixed")
    return bad


def connector_adjacency(world: WorldState) -> set[frozenset[str]]:
    """Pairs of pipe ids joined through a single connector."""
    pairs: set[frozenset[str]] = set()
    for connector in world.by_kind("connector"):
        a, b = connector.joined["a"], connector.joined["b"]
        if a is not None and b is not None:
            pairs.add(frozenset({a, b}))
    return pairs


@dataclass
class CompletionReport:
    complete: bool
    slots: dict[int, dict] = field(default_factory=dict)

    @property
    def matched_count(self) -> int:
        return sum(1 for s in self.slots.values() if s["status"] == MATCHED)

    def to_wire(self) -> dict:
        return {
            "complete": self.complete,
            "matched": self.matched_count,
            "total": len(self.slots),
            "slots": {str(k): dict(v) for k, v in self.slots.items()},
        }


def _find_full_assignment(
    slot_ids: list[int],
    candidates: dict[int, list[str]],
    edges: set[frozenset[int]],
    adjacency: set[frozenset[str]],
) -> dict[int, str] | None:
    order = sorted(slot_ids, key=lambda i: (len(candidates[i]), i))
    assigned: dict[int, str] = {}
    used: set[str] = set()

    def consistent(slot: int, pipe_id: str) -> bool:
        for edge in edges:
            if slot not in edge:
                continue
            (other,) = edge - {slot}
            if other in assigned and frozenset({pipe_id, assigned[other]}) not in adjacency:
                return False
        return True

    def backtrack(pos: int) -> bool:
        if pos == len(order):
            return True
        slot = order[pos]
        for pipe_id in candidates[slot]:
            if pipe_id in used or not consistent(slot, pipe_id):
                continue
            assigned[slot] = pipe_id
            used.add(pipe_id)
            if backtrack(pos + 1):
                return True
            del assigned[slot]
            used.discard(pipe_id)
        return False

    return dict(assigned) if backtrack(0) else None


def _max_attribute_matching(slot_ids: list[int], candidates: dict[int, list[str]]) -> dict[int, str]:
    """Kuhn's augmenting-path maximum bipartite matching on attribute fit."""
    pipe_to_slot: dict[str, int] = {}

    def try_assign(slot: int, visited: set[str]) -> bool:
        for pipe_id in candidates[slot]:
            if pipe_id in visited:
                continue
            visited.add(pipe_id)
            if pipe_id not in pipe_to_slot or try_assign(pipe_to_slot[pipe_id], visited):
                pipe_to_slot[pipe_id] = slot
                return True
        return False

    for slot in slot_ids:
        try_assign(slot, set())
    return {slot: pipe_id for pipe_id, slot in pipe_to_slot.items()}


def check_completion(world: WorldState, layout: TargetLayout, task: TaskConfig) -> CompletionReport:
    length_tol = task.rules.length_tol
    wall_pipes = [p for p in world.by_kind("pipe") if p.wall_pose is not None]
    adjacency = connector_adjacency(world)
    edges = layout.edges()
    slot_ids = [s.index for s in layout.slots]

    candidates = {
        slot.index: [
            p.id
            for p in wall_pipes
            if not attribute_mismatches(task.segment(slot.index), slot, p, length_tol)
        ]
        for slot in layout.slots
    }

    full = _find_full_assignment(slot_ids, candidates, edges, adjacency)
    if full is not None:
        return CompletionReport(
            complete=True,
            slots={i: {"status": MATCHED, "pipe": full[i]} for i in slot_ids},
        )

    # diagnosis: best attribute-only matching, then flag broken junctions and
    # describe near-misses for the rest
    assigned = _max_attribute_matching(slot_ids, candidates)
    slots: dict[int, dict] = {}
    for slot in layout.slots:
        index = slot.index
        if index in assigned:
            slots[index] = {"status": MATCHED, "pipe": assigned[index]}
        elif not wall_pipes:
            slots[index] = {"status": UNMATCHED, "pipe": None}
        else:
            segment = task.segment(index)
            best = min(
                wall_pipes,
                key=lambda p: (len(attribute_mismatches(segment, slot, p, length_tol)), p.id),
            )
            bad = attribute_mismatches(segment, slot, best, length_tol)
            slots[index] = {"status": MISMATCH, "pipe": best.id, "mismatches": bad}
    for edge in edges:
        i, j = tuple(edge)
        if i in assigned and j in assigned:
            if frozenset({assigned[i], assigned[j]}) not in adjacency:
                for k in (i, j):
                    entry = slots[k]
                    entry["status"] = MISMATCH
                    entry.setdefault("mismatches", []).append("adjacency")
    return CompletionReport(complete=False, slots=slots)
