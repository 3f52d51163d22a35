"""Vehicle kinematics and pipe scattering.

Vehicles follow polyline waypoint paths at constant speed; collisions are
axis-aligned overlap tests against loose pipes on the ground, and a hit
relocates the pipe to a seeded-random free spot nearby.
"""

from __future__ import annotations

import dataclasses
import math
import random

from ..world.entities import STORAGE, Pipe, Vehicle
from ..world.state import CLEARANCE, PIPE_FOOTPRINT_HALF_DEPTH

SCATTER_ATTEMPTS = 64


def path_length(path: tuple[tuple[float, float], ...]) -> float:
    return sum(
        math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(path, path[1:])
    )


def _pose_at(path: tuple[tuple[float, float], ...], distance: float) -> tuple[tuple[float, float], float]:
    """Position and heading after travelling ``distance`` along the polyline."""
    if distance <= 0.0 or len(path) < 2:
        a, b = path[0], path[1] if len(path) > 1 else path[0]
        return tuple(path[0]), math.atan2(b[1] - a[1], b[0] - a[0])
    remaining = distance
    for a, b in zip(path, path[1:]):
        seg = math.hypot(b[0] - a[0], b[1] - a[1])
        heading = math.atan2(b[1] - a[1], b[0] - a[0])
        if remaining <= seg:
            t = remaining / seg
            return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])), heading
        remaining -= seg
    a, b = path[-2], path[-1]
    return tuple(path[-1]), math.atan2(b[1] - a[1], b[0] - a[0])


def vehicle_step(vehicle: Vehicle, dt: float) -> Vehicle:
    """Advance along the active path by speed*dt; clears the script at the end.

    Carries leftover distance across waypoint corners, so n small steps land
    exactly where one big step does.
    """
    if vehicle.active_script is None or len(vehicle.path) < 2 or vehicle.speed <= 0.0:
        return vehicle
    progress = vehicle.progress + vehicle.speed * dt
    total = path_length(vehicle.path)
    if progress >= total:
        pos, heading = _pose_at(vehicle.path, total)
        return dataclasses.replace(
            vehicle, pos=pos, heading=heading, progress=total, active_script=None, speed=0.0
        )
    pos, heading = _pose_at(vehicle.path, progress)
    return dataclasses.replace(vehicle, pos=pos, heading=heading, progress=progress)


def _overlaps(ax, ay, ahx, ahy, bx, by, bhx, bhy) -> bool:
    return abs(ax - bx) <= ahx + bhx and abs(ay - by) <= ahy + bhy


def collide_and_scatter(
    vehicle: Vehicle,
    pipes: list[Pipe],
    rng: random.Random,
    *,
    bounds: tuple[float, float, float, float],
    scatter_radius: float = 3.0,
) -> list[Pipe]:
    """Displace loose pipes overlapping the vehicle footprint; returns the hit pipes.

    Held and installed pipes never move. New positions are rejection-sampled
    within ``scatter_radius`` (free of the vehicle and of other loose pipes),
    falling back to a deterministic outward scan.
    """
    if vehicle.overhead:
        return []
    vx, vy = vehicle.pos
    vhx, vhy = vehicle.footprint
    loose = [p for p in pipes if p.status == STORAGE and p.held_by is None and p.ground_pos]
    hit = [
        p
        for p in loose
        if _overlaps(vx, vy, vhx, vhy, p.ground_pos[0], p.ground_pos[1], p.length / 2.0, PIPE_FOOTPRINT_HALF_DEPTH)
    ]
    if not hit:
        return []
    x0, y0, x1, y1 = bounds

    def free(px: float, py: float, pipe: Pipe) -> bool:
        hx, hy = pipe.length / 2.0, PIPE_FOOTPRINT_HALF_DEPTH
        if not (x0 + hx <= px <= x1 - hx and y0 + hy <= py <= y1 - hy):
            return False
        if _overlaps(px, py, hx, hy, vx, vy, vhx + CLEARANCE, vhy + CLEARANCE):
            return False
        for other in loose:
            if other.id == pipe.id:
                continue
            if _overlaps(
                px, py, hx, hy,
                other.ground_pos[0], other.ground_pos[1],
                other.length / 2.0 + CLEARANCE, PIPE_FOOTPRINT_HALF_DEPTH + CLEARANCE,
            ):
                return False
        return True

    for pipe in sorted(hit, key=lambda p: p.id):
        cx, cy = pipe.ground_pos
        placed = False
        for _ in range(SCATTER_ATTEMPTS):
            px = cx + rng.uniform(-scatter_radius, scatter_radius)
            py = cy + rng.uniform(-scatter_radius, scatter_radius)
            if free(px, py, pipe):
                pipe.ground_pos = (px, py)
                placed = True
                break
        if not placed:
            for step in range(1, 200):
                ring = scatter_radius + 0.5 * step
                for i in range(16):
                    angle = i * (math.tau / 16.0)
                    px, py = cx + ring * math.cos(angle), cy + ring * math.sin(angle)
                    if free(px, py, pipe):
                        pipe.ground_pos = (px, py)
                        placed = True
                        break
                if placed:
                    break
    return hit
