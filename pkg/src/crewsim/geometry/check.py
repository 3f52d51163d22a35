"""Randomized self-check of the connection solve.

Draws random end frames, pipe shapes, and ends; solves the connecting pose;
then forward-evaluates the posed end to measure how far it landed from the
target and how far its axis is from anti-parallel. Used by the ``geom check``
CLI subcommand and by the acceptance suite.
"""

from __future__ import annotations

import math
import random

from .pipes import PIPE_ANGLES, PIPE_DIAMETERS, PipeColor, PipeKind, PipeSpec, generate_pipe
from .transform import EndFrame, connect_transform, end_frame


def random_spec(rng: random.Random) -> PipeSpec:
    angle = rng.choice(PIPE_ANGLES)
    return PipeSpec(
        kind=rng.choice(list(PipeKind)),
        color=rng.choice(list(PipeColor)),
        diameter=rng.choice(PIPE_DIAMETERS),
        angle=angle,
        arm_a=rng.uniform(0.2, 20.0),
        arm_b=0.0 if angle == 0 else rng.uniform(0.2, 20.0),
    )


def run_connect_trials(trials: int, seed: int) -> dict[str, float]:
    """Run randomized connect trials; return the worst residuals observed."""
    rng = random.Random(seed)
    max_pos = 0.0
    max_dir = 0.0
    for _ in range(trials):
        phi = rng.uniform(-math.pi, math.pi)
        fixed = EndFrame(
            position=(rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0)),
            outward=(math.cos(phi), math.sin(phi)),
        )
        geom = generate_pipe(random_spec(rng))
        end = rng.choice(("a", "b"))
        pose = connect_transform(fixed, geom, end)
        placed = end_frame(geom, pose, end)
        pos_err = math.hypot(
            placed.position[0] - fixed.position[0], placed.position[1] - fixed.position[1]
        )
        dot = placed.outward[0] * fixed.outward[0] + placed.outward[1] * fixed.outward[1]
        max_pos = max(max_pos, pos_err)
        max_dir = max(max_dir, abs(dot + 1.0))
    return {"trials": float(trials), "max_position_residual": max_pos, "max_direction_residual": max_dir}
