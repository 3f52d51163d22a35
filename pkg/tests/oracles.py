"""Independent oracles used to compute expected values.

Everything here deliberately avoids the production code paths it checks:
brute-force enumeration, direct formula evaluation, and numeric search stand
in for the real implementations.
"""

from __future__ import annotations

import itertools
import math

# -- angles -------------------------------------------------------------------


def nearest_axis_angle(theta: float) -> tuple[float, float]:
    """(nearest multiple of pi/2, angular distance to it) by enumeration."""
    best = None
    best_dist = float("inf")
    for k in range(-2, 3):
        cand = k * math.pi / 2.0
        dist = abs(math.remainder(theta - cand, 2.0 * math.pi))
        if dist < best_dist:
            best, best_dist = cand, dist
    return best, best_dist


def angular_distance(a: float, b: float) -> float:
    return abs(math.remainder(a - b, 2.0 * math.pi))


# -- planes -------------------------------------------------------------------


def projection_by_minimization(point, origin, axis_u, axis_v) -> tuple[float, float]:
    """Least-distance plane coordinates found by numeric search (scipy)."""
    from scipy.optimize import minimize

    def objective(x):
        u, v = x
        return sum(
            (origin[i] + u * axis_u[i] + v * axis_v[i] - point[i]) ** 2 for i in range(3)
        )

    res = minimize(objective, x0=(0.0, 0.0), method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-24})
    return res.x[0], res.x[1]


# -- polylines ----------------------------------------------------------------


def point_along_polyline(waypoints, distance: float):
    """Arc-length parameterization of a polyline, clamped to its ends."""
    if distance <= 0:
        return tuple(waypoints[0])
    remaining = distance
    for (x0, y0), (x1, y1) in zip(waypoints, waypoints[1:]):
        seg = math.hypot(x1 - x0, y1 - y0)
        if remaining <= seg:
            t = remaining / seg
            return (x0 + t * (x1 - x0), y0 + t * (y1 - y0))
        remaining -= seg
    return tuple(waypoints[-1])


def polyline_length(waypoints) -> float:
    return sum(math.hypot(x1 - x0, y1 - y0) for (x0, y0), (x1, y1) in zip(waypoints, waypoints[1:]))


# -- timelines ----------------------------------------------------------------


def stable_fire_order(entries, tick_rate: int):
    """Expected firing order: stable sort of (rounded fire tick, file index)."""
    keyed = [
        (round(e["time_offset"] * tick_rate), i, e) for i, e in enumerate(entries)
    ]
    return [e for _, _, e in sorted(keyed, key=lambda t: (t[0], t[1]))]


# -- questionnaire formulas ---------------------------------------------------


def sus_by_hand(items) -> float:
    odd = sum(items[i] - 1 for i in range(0, 10, 2))
    even = sum(5 - items[i] for i in range(1, 10, 2))
    return (odd + even) * 2.5


def ssq_by_hand(items, weight_sets) -> dict[str, float]:
    """weight_sets: {name: (item_indices_1based, multiplier)}, plus total mult."""
    sums = {}
    for name, (idxs, mult) in weight_sets["subscales"].items():
        sums[name] = sum(items[i - 1] for i in idxs) * mult
    raw_total = sum(sum(items[i - 1] for i in idxs) for idxs, _ in weight_sets["subscales"].values())
    sums["total"] = raw_total * weight_sets["total_multiplier"]
    return sums


# -- layout completion --------------------------------------------------------


def brute_force_layout_match(slots, edges, pipes, adjacency, length_tol: float) -> bool:
    """Try every injective slot->pipe assignment; True when one satisfies all
    attribute, orientation, fixation, and connector-adjacency requirements.

    ``slots``: list of dicts {index, color, kind, size, length, orientation}.
    ``edges``: set of frozenset({i, j}) over slot indices.
    ``pipes``: list of dicts {id, color, kind, size, length, orientation, fixed}.
    ``adjacency``: set of frozenset({pipe_id_a, pipe_id_b}) joined via a connector.
    """

    def attr_ok(slot, pipe) -> bool:
        return (
            pipe["color"] == slot["color"]
            and pipe["kind"] == slot["kind"]
            and pipe["size"] == slot["size"]
            and abs(pipe["length"] - slot["length"]) <= length_tol
            and pipe["orientation"] == slot["orientation"]
            and pipe["fixed"]
        )

    candidates = [[p for p in pipes if attr_ok(slot, p)] for slot in slots]
    if any(not c for c in candidates):
        return False
    for combo in itertools.product(*candidates):
        ids = [p["id"] for p in combo]
        if len(set(ids)) != len(ids):
            continue
        slot_to_pipe = {slot["index"]: pid for slot, pid in zip(slots, ids)}
        if all(
            frozenset({slot_to_pipe[i], slot_to_pipe[j]}) in adjacency
            for i, j in (tuple(e) for e in edges)
        ):
            return True
    return False
