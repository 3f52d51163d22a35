"""Per-tick machine processing: drone deliveries and robot-dog jobs.

Drone orders run in parallel, each delivering at its own due tick (FIFO on
ties); the robot dog works its queue one job at a time.
"""

from __future__ import annotations

from .entities import STORAGE
from .state import WorldState


def process_drone(world: WorldState) -> None:
    drone = world.the_drone()
    due = [o for o in drone.pending if o["due_tick"] <= world.tick]
    if not due:
        return
    for order in sorted(due, key=lambda o: (o["due_tick"], o["seq"])):
        for item in order["items"]:
            world.spawn_pipe(item["type"], item["color"], item["size"], item["length"])
    drone.pending = [o for o in drone.pending if o["due_tick"] > world.tick]
    world.touch(drone.id)


def _length_mu(value: float) -> int:
    return round(value * 1000.0)


def complete_cut(world: WorldState, pipe_id: str, cut_length: float) -> None:
    """Shorten the pipe to ``cut_length``; spawn the remainder when big enough.

    Lengths are kept on a 1 mm grid so piece lengths always sum exactly to the
    original on that grid. Skips silently when the pipe left storage while the
    job was queued.
    """
    pipe = world.get(pipe_id)
    if pipe is None or pipe.status != STORAGE:
        return
    cut_mu = _length_mu(cut_length)
    orig_mu = _length_mu(pipe.length)
    if cut_mu >= orig_mu:
        return  # full-length cut: single piece, nothing to do
    remainder_mu = orig_mu - cut_mu
    pipe.length = cut_mu / 1000.0
    world.touch(pipe.id)
    if remainder_mu >= _length_mu(world.task.rules.min_piece):
        world.spawn_pipe(pipe.pipe_kind, pipe.color, pipe.diameter, remainder_mu / 1000.0)


def process_robot_dog(world: WorldState) -> None:
    dog = world.the_dog()
    if not dog.queue:
        return
    head = dog.queue[0]
    if head["due_tick"] is None:
        head["due_tick"] = world.tick + round(world.task.rules.cut_delay_s * world.tick_rate)
        world.touch(dog.id)
    if head["due_tick"] > world.tick:
        return
    for cut in head["cuts"]:
        complete_cut(world, cut["pipe"], cut["length"])
    for request in head["connectors"]:
        for _ in range(request["qty"]):
            world.spawn_connector(request["size"])
    dog.queue.pop(0)
    world.touch(dog.id)
