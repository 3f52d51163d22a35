"""Shared builders for session-level tests."""

from __future__ import annotations

import dataclasses

from crewsim.config import ConfigSet, load_layout, load_scenario, load_task
from crewsim.config.model import SessionConfig
from crewsim.engine import build_default_registry
from crewsim.server.session import SessionCore

MINI_TASK = """
name: "mini"
layout: "mini_layout"
segments:
  - index: 1
    color: green
    type: gas
    size: 1
    length: 4.0
    installer_visible: [color, length]
    fetcher_visible: [size, type]
  - index: 2
    color: blue
    type: gas
    size: 1
    length: 3.0
    installer_visible: [color, length]
    fetcher_visible: [size, type]
rules:
  order_delay_s: 1.0
  cut_delay_s: 1.0
"""

MINI_LAYOUT = """
name: "mini_layout"
slots:
  - {index: 1, orientation: horizontal, anchor: [2.0, 1.0], connects_to: [2], endpoint: true}
  - {index: 2, orientation: vertical, anchor: [4.5, 2.0], connects_to: [1]}
"""


def configs_with_mini(configs: ConfigSet, scenario_yaml: str | None = None) -> ConfigSet:
    """Clone the shipped config set and add the two-segment mini task."""
    out = ConfigSet(
        vehicles=dict(configs.vehicles),
        scenarios=dict(configs.scenarios),
        sessions=dict(configs.sessions),
        tasks=dict(configs.tasks),
        layouts=dict(configs.layouts),
        menu=configs.menu,
    )
    out.layouts["mini_layout"] = load_layout(MINI_LAYOUT)
    out.tasks["mini"] = load_task(MINI_TASK)
    scenario_names = ()
    if scenario_yaml is not None:
        scenario = load_scenario(scenario_yaml, list(out.vehicles.values()))
        out.scenarios[scenario.name] = scenario
        scenario_names = (scenario.name,)
    out.sessions["mini_session"] = SessionConfig(
        name="mini_session", scenarios=scenario_names, task="mini", tick_rate_hz=20, seed=5
    )
    return out


def make_core(configs: ConfigSet, session: str = "mini_session", seed: int | None = None) -> SessionCore:
    return SessionCore(
        config=configs.sessions[session],
        configs=configs,
        registry=build_default_registry(),
        seed=seed,
    )


def join_both(core: SessionCore) -> None:
    core.join("installer", "c1")
    core.join("fetcher", "c2")


def make_ready(core: SessionCore) -> None:
    core.enqueue("installer", {"kind": "menu", "item": "ready"})
    core.enqueue("fetcher", {"kind": "menu", "item": "ready"})
    core.run_tick()


def run_ticks(core: SessionCore, n: int, collect=None) -> list:
    results = []
    for _ in range(n):
        result = core.run_tick()
        if collect is not None:
            collect(result)
        results.append(result)
    return results
