"""World invariants under randomized intent sequences.

A seeded fuzzer fires a mix of plausible and nonsense intents at a session
core and checks the structural invariants after every tick: single holder
per entity, non-negative glue, monotone fixation, and consistent joint
records.
"""

import random

from crewsim.errors import CrewsimError
from crewsim.world import FIXED, apply_intent

from .helpers import configs_with_mini, join_both, make_core

KINDS = [
    "move", "chat", "menu", "grab", "release", "move_held", "joystick",
    "apply_glue", "place_clamp", "connect", "lift", "enter_lift", "exit_lift",
    "order_pipes", "robot_dog", "refill",
]


def _random_intent(rng, world):
    kind = rng.choice(KINDS)
    entity_ids = sorted(world.entities)
    target = rng.choice(entity_ids) if entity_ids else "nothing"
    payloads = {
        "move": {"pos": [rng.uniform(-5, 35), rng.uniform(-5, 15)]},
        "chat": {"text": f"msg {rng.randint(0, 9)}"},
        "menu": {"item": rng.choice(["ready", "supervisor", "ai_drone", "bogus"])},
        "grab": {"target": target},
        "release": {"pos": [rng.uniform(0, 30), rng.uniform(0, 1), rng.uniform(0, 6)],
                    "axis": [1.0, 0.0, rng.uniform(-0.2, 0.2)]},
        "move_held": {"pos": [1.0, 0.5, 1.0], "axis": [1.0, 0.0, 0.0]},
        "joystick": {"input": rng.choice(["left", "right", "press", "wat"])},
        "apply_glue": {"target": target, "end": rng.choice(["a", "b"])},
        "place_clamp": {"target": target, "zone": rng.randint(0, 2),
                        "pos": [rng.uniform(0, 30), rng.uniform(0, 3)]},
        "connect": {"target": target, "end": rng.choice(["a", "b"]),
                    "held_end": rng.choice(["a", "b"])},
        "lift": {"dir": rng.choice(["up", "down", "left", "right"])},
        "enter_lift": {},
        "exit_lift": {},
        "order_pipes": {"items": [{"type": "gas", "color": "green", "size": 1,
                                   "length": round(rng.uniform(0.5, 6.0), 1)}]},
        "robot_dog": {"connectors": [{"size": rng.choice([1, 2, 3, 4]), "qty": 1}]},
        "refill": {"refill": rng.choice(["glue", "clamp"])},
    }
    return {"kind": kind, **payloads[kind]}


def _check_invariants(world, ever_fixed):
    holders = {}
    for entity in world.entities.values():
        holder = getattr(entity, "held_by", None)
        if holder is not None:
            holders.setdefault(holder, []).append(entity.id)
    for holder, held in holders.items():
        assert len(held) == 1, f"{holder} holds {held}"
        assert world.participant(holder).held == held[0]
    assert world.the_glue().charges >= 0
    for pipe in world.by_kind("pipe"):
        if pipe.id in ever_fixed:
            assert pipe.status == FIXED, f"{pipe.id} left the fixed state"
        if pipe.status == FIXED:
            ever_fixed.add(pipe.id)
            assert pipe.zones == []
        for end in ("a", "b"):
            if pipe.glued[end]:
                assert pipe.wall_pose is not None  # glue only on wall-mounted pipes
            other_id = pipe.joined[end]
            if other_id is not None:
                other = world.get(other_id)
                assert other is not None
                assert pipe.id in other.joined.values()


def test_fuzzed_intents_preserve_invariants(configs):
    rng = random.Random(2024)
    core = make_core(configs_with_mini(configs))
    join_both(core)
    world = core.world
    ever_fixed: set[str] = set()
    for _ in range(400):
        role = rng.choice(["installer", "fetcher"])
        core.enqueue(role, _random_intent(rng, world))
        if rng.random() < 0.3:
            core.enqueue(role, _random_intent(rng, world))
        core.run_tick()
        _check_invariants(world, ever_fixed)


def test_fuzz_rejections_leave_state_untouched(configs):
    from crewsim.server.hashing import snapshot_hash

    rng = random.Random(77)
    core = make_core(configs_with_mini(configs))
    join_both(core)
    world = core.world
    rejected = 0
    for _ in range(300):
        role = rng.choice(["installer", "fetcher"])
        intent = _random_intent(rng, world)
        before = snapshot_hash(world.snapshot())
        try:
            apply_intent(world, role, intent)
        except CrewsimError:
            rejected += 1
            assert snapshot_hash(world.snapshot()) == before, intent
    assert rejected > 50  # the fuzzer produces plenty of illegal attempts
