"""Bot pair orchestration, transcripts, and deterministic replay.

``run_pair`` drives two bots against a live server over the real protocol
and records every wire message. A transcript carries enough (including the
resolved configs when the harness also started the server) to re-execute the
run without any networking and compare final snapshot hashes bit-exactly.
"""

from __future__ import annotations

import asyncio
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..config import (
    ConfigSet,
    dump_yaml,
    layout_to_mapping,
    load_layout,
    load_menu_config,
    load_scenario,
    load_session,
    load_task,
    load_vehicle_config,
    menu_to_mapping,
    scenario_to_mapping,
    session_to_mapping,
    task_to_mapping,
    vehicle_to_mapping,
)
from ..engine import build_default_registry
from ..errors import HashMismatchError
from ..errors import TimeoutError as BudgetError
from ..server.host import serve_session
from ..server.session import SessionCore
from .client import BotClient, LatencyProfile
from .policy import BotScript, FetcherBot, InstallerBot


@dataclass
class Transcript:
    lines: list[dict] = field(default_factory=list)

    @property
    def header(self) -> dict | None:
        return next((l for l in self.lines if l["type"] == "header"), None)

    @property
    def end(self) -> dict | None:
        return next((l for l in self.lines if l["type"] == "end"), None)

    @property
    def final_hash(self) -> str | None:
        end = self.end
        return None if end is None else end["final_hash"]

    @property
    def report(self) -> dict | None:
        end = self.end
        return None if end is None else end.get("report")

    def wire(self, role: str | None = None, direction: str | None = None) -> list[dict]:
        return [
            l
            for l in self.lines
            if l["type"] == "wire"
            and (role is None or l["role"] == role)
            and (direction is None or l["dir"] == direction)
        ]

    def actions(self) -> list[dict]:
        """Applied-order intent records, from the installer's delta stream."""
        out = []
        for line in self.wire(role="installer", direction="in"):
            msg = line["msg"]
            if msg.get("kind") != "delta_batch":
                continue
            for delta in msg["deltas"]:
                if delta["op"] == "action":
                    out.append(delta)
        return out

    def batch_seqs(self, role: str) -> list[int]:
        return [
            l["msg"]["batch_seq"]
            for l in self.wire(role=role, direction="in")
            if l["msg"].get("kind") == "delta_batch"
        ]

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for line in self.lines:
                fh.write(json.dumps(line) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Transcript":
        with open(path, encoding="utf-8") as fh:
            return cls(lines=[json.loads(l) for l in fh if l.strip()])


def _configs_to_header(configs: ConfigSet, session_name: str) -> dict:
    session = configs.sessions[session_name]
    task = configs.tasks[session.task]
    return {
        "session_config": session_to_mapping(session),
        "vehicles": [vehicle_to_mapping(v) for v in configs.vehicles.values()],
        "scenarios": [scenario_to_mapping(configs.scenarios[n]) for n in session.scenarios],
        "task": task_to_mapping(task),
        "layout": layout_to_mapping(configs.layouts[task.layout]),
        "menu": menu_to_mapping(configs.menu) if configs.menu else None,
    }


def configs_from_header(header: dict) -> ConfigSet:
    """Rebuild a config set from the serialized forms embedded in a transcript."""
    embedded = header["configs"]
    out = ConfigSet()
    for mapping in embedded["vehicles"]:
        vehicle = load_vehicle_config(dump_yaml(mapping))
        out.vehicles[vehicle.name] = vehicle
    vehicles = list(out.vehicles.values())
    for mapping in embedded["scenarios"]:
        scenario = load_scenario(dump_yaml(mapping), vehicles)
        out.scenarios[scenario.name] = scenario
    layout = load_layout(dump_yaml(embedded["layout"]))
    out.layouts[layout.name] = layout
    task = load_task(dump_yaml(embedded["task"]))
    out.tasks[task.name] = task
    if embedded.get("menu"):
        out.menu = load_menu_config(dump_yaml(embedded["menu"]))
    session = load_session(
        dump_yaml(embedded["session_config"]), set(out.scenarios), set(out.tasks)
    )
    out.sessions[session.name] = session
    return out


async def run_pair_async(
    addr: str,
    installer: BotScript | None,
    fetcher: BotScript | None,
    *,
    budget_s: float = 60.0,
    latency: LatencyProfile | None = None,
    transcript: Transcript | None = None,
) -> Transcript:
    """Run the bots against a listening server; raises BudgetError on overrun."""
    transcript = transcript or Transcript()
    clients: list[BotClient] = []
    bots = []
    if installer is not None:
        client = BotClient(role="installer", latency=latency, transcript=transcript.lines)
        clients.append(client)
        bots.append(InstallerBot(client, installer))
    if fetcher is not None:
        client = BotClient(role="fetcher", latency=latency, transcript=transcript.lines)
        clients.append(client)
        bots.append(FetcherBot(client, fetcher))
    loop = asyncio.get_running_loop()
    deadline = loop.time() + budget_s
    for client in clients:
        client.deadline = deadline
        await client.connect(addr)
    try:
        await asyncio.wait_for(
            asyncio.gather(*(bot.run() for bot in bots)), timeout=budget_s
        )
        for client in clients:
            await client.wait_for(lambda c=client: c.session_end, what="session end")
    except asyncio.TimeoutError:
        raise BudgetError(f"bot run exceeded its {budget_s:.0f}s budget") from None
    finally:
        if transcript.header is None:
            welcomes = [c.welcome for c in clients if c.welcome]
            if welcomes:
                # runs against an external server have no embedded configs;
                # replay then needs --config-dir, but session/seed are known
                transcript.lines.insert(
                    0,
                    {
                        "type": "header",
                        "session": welcomes[0]["session"],
                        "seed": welcomes[0]["seed"],
                        "tick_rate": welcomes[0]["tick_rate"],
                        "configs": None,
                    },
                )
        ends = [c.session_end for c in clients if c.session_end]
        hashes = {c.role: c.mirror.hash() for c in clients}
        gaps = {c.role: c.mirror.seq_gaps for c in clients}
        if ends:
            transcript.lines.append(
                {
                    "type": "end",
                    "outcome": ends[0].get("outcome"),
                    "final_hash": ends[0].get("final_hash"),
                    "report": ends[0].get("report"),
                    "ticks": max(c.mirror.tick for c in clients),
                    "mirror_hashes": hashes,
                    "seq_gaps": gaps,
                }
            )
        for client in clients:
            await client.close()
    return transcript


async def run_pair_local_async(
    configs: ConfigSet,
    session_name: str,
    *,
    installer: BotScript | None = None,
    fetcher: BotScript | None = None,
    seed: int | None = None,
    budget_s: float = 60.0,
    latency: LatencyProfile | None = None,
    speedup: float = 0.0,
) -> Transcript:
    """Start an in-process server, run the pair, embed configs for replay."""
    core = SessionCore(
        config=configs.sessions[session_name],
        configs=configs,
        registry=build_default_registry(),
        seed=seed,
    )
    transcript = Transcript()
    transcript.lines.append(
        {
            "type": "header",
            "session": session_name,
            "seed": core.world.seed,
            "tick_rate": core.config.tick_rate_hz,
            "configs": _configs_to_header(configs, session_name),
        }
    )
    bound: asyncio.Future = asyncio.get_running_loop().create_future()
    server_task = asyncio.create_task(
        serve_session(core, port=0, speedup=speedup, bound_port=bound)
    )
    port = await bound
    try:
        return await run_pair_async(
            f"127.0.0.1:{port}",
            installer,
            fetcher,
            budget_s=budget_s,
            latency=latency,
            transcript=transcript,
        )
    finally:
        server_task.cancel()
        try:
            await server_task
        except (asyncio.CancelledError, Exception):
            pass


def run_pair_local(configs: ConfigSet, session_name: str, **kwargs) -> Transcript:
    return asyncio.run(run_pair_local_async(configs, session_name, **kwargs))


def replay(
    transcript: Transcript,
    configs: ConfigSet | None = None,
    seed: int | None = None,
    log_sink=None,
) -> str:
    """Re-execute a transcript's intents tick by tick; verify the final hash.

    Raises HashMismatchError when the reproduced world digest differs from
    the recorded one.
    """
    header = transcript.header
    if header is None:
        raise ValueError("transcript has no header line")
    if configs is None:
        if not header.get("configs"):
            raise ValueError(
                "transcript has no embedded configs; pass the config set it ran against"
            )
        configs = configs_from_header(header)
    if seed is None:
        seed = header["seed"]
    session_name = header["session"]
    core = SessionCore(
        config=configs.sessions[session_name],
        configs=configs,
        registry=build_default_registry(),
        seed=seed,
        log_sink=log_sink,
    )
    core.join("installer", "replay-1")
    core.join("fetcher", "replay-2")
    by_tick: dict[int, list[dict]] = {}
    for action in transcript.actions():
        by_tick.setdefault(action["tick"], []).append(action)
    end = transcript.end
    final_tick = end["ticks"] if end else max(by_tick, default=0)
    while core.world.tick < final_tick:
        for action in by_tick.get(core.world.tick + 1, []):
            core.enqueue(action["role"], action["intent"], action.get("ref"))
        core.run_tick()
    reproduced = core.world_hash()
    recorded = transcript.final_hash
    if recorded is not None and reproduced != recorded:
        raise HashMismatchError(
            f"replay produced {reproduced}, transcript recorded {recorded}"
        )
    return reproduced
