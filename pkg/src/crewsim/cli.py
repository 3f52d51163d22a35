"""Command-line entry points.

Subcommands: ``validate`` (config corpus), ``serve`` (host one session),
``bots run`` / ``bots replay`` (scripted clients and determinism checks),
``events replay`` (verify a logged event stream), ``geom check`` (randomized
connection-solve suite), ``score`` (questionnaire CSVs), and ``log summary``.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import functools
import http.server
import json
import sys
import threading
import time
from pathlib import Path

from . import errors
from .bots import BotScript, LatencyProfile, Transcript, replay, run_pair_local
from .bots.runner import run_pair_async
from .config import load_config_dir, shipped_config_dir, validate_config_dir
from .engine import build_default_registry, build_timeline
from .errors import CrewsimError, SchemaError
from .geometry.check import run_connect_trials
from .metrics import (
    cohesion_score,
    ipq_scores,
    load_ipq_mapping,
    load_ssq_weights,
    ssq_scores,
    summarize_log,
    sus_score,
)
from .server.host import serve_session
from .server.session import SessionCore

GEOM_TOLERANCE = 1e-9


def _config_dir(value: str | None) -> Path:
    return Path(value) if value else shipped_config_dir()


# -- validate ------------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    directory = _config_dir(args.config_dir)
    started = time.perf_counter()
    try:
        configs = validate_config_dir(directory, registry=build_default_registry())
    except SchemaError as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        return 1
    elapsed = time.perf_counter() - started
    print(
        f"OK: {len(configs.vehicles)} vehicles, {len(configs.scenarios)} scenarios, "
        f"{len(configs.tasks)} tasks, {len(configs.layouts)} layouts, "
        f"{len(configs.sessions)} sessions ({elapsed*1000:.0f} ms)"
    )
    return 0


# -- serve ---------------------------------------------------------------------------


def _serve_static(directory: str, port: int) -> threading.Thread:
    handler = functools.partial(http.server.SimpleHTTPRequestHandler, directory=directory)
    server = http.server.ThreadingHTTPServer(("0.0.0.0", port), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    print(f"serving web client from {directory} at http://127.0.0.1:{port}/")
    return thread


def cmd_serve(args: argparse.Namespace) -> int:
    configs = load_config_dir(_config_dir(args.config_dir))
    if args.session not in configs.sessions:
        print(f"unknown session {args.session!r}; available: {sorted(configs.sessions)}", file=sys.stderr)
        return 1
    core = SessionCore(
        config=configs.sessions[args.session],
        configs=configs,
        registry=build_default_registry(),
        seed=args.seed,
    )
    if args.tick_rate:
        import dataclasses

        core.config = dataclasses.replace(core.config, tick_rate_hz=args.tick_rate)
    if args.web_dir:
        _serve_static(args.web_dir, args.web_port)
    log_file = open(args.log, "w", encoding="utf-8") if args.log else None
    print(f"session {args.session!r} listening on ws://{args.host}:{args.port} (seed {core.world.seed})")
    try:
        outcome = asyncio.run(
            serve_session(
                core,
                host=args.host,
                port=args.port,
                speedup=args.speedup,
                log_file=log_file,
            )
        )
    except KeyboardInterrupt:
        outcome = "interrupted"
    finally:
        if log_file:
            log_file.close()
    print(f"session ended: {outcome}")
    return 0 if outcome == "complete" else 2


# -- bots ----------------------------------------------------------------------------


def cmd_bots_run(args: argparse.Namespace) -> int:
    latency = None
    if args.latency_ms or args.jitter_ms:
        latency = LatencyProfile(fixed_ms=args.latency_ms, jitter_ms=args.jitter_ms, seed=args.seed or 0)
    installer = BotScript(role="installer", policy=args.policy)
    fetcher = BotScript(role="fetcher", policy=args.policy)
    try:
        if args.addr:
            transcript = asyncio.run(
                run_pair_async(args.addr, installer, fetcher, budget_s=args.budget, latency=latency)
            )
        else:
            configs = load_config_dir(_config_dir(args.config_dir))
            session = args.session or "main_session"
            transcript = run_pair_local(
                configs,
                session,
                installer=installer,
                fetcher=fetcher,
                seed=args.seed,
                budget_s=args.budget,
                latency=latency,
            )
    except errors.TimeoutError as exc:
        print(f"TIMEOUT: {exc}", file=sys.stderr)
        return 2
    end = transcript.end or {}
    if args.task:
        task = _transcript_task_name(transcript)
        if task is not None and task != args.task:
            print(f"server ran task {task!r}, expected {args.task!r}", file=sys.stderr)
            return 1
    if args.out:
        transcript.save(args.out)
        print(f"transcript written to {args.out}")
    print(
        f"outcome={end.get('outcome')} ticks={end.get('ticks')} "
        f"final_hash={end.get('final_hash')} seq_gaps={end.get('seq_gaps')}"
    )
    report = end.get("report") or {}
    print(f"completion: {report.get('matched')}/{report.get('total')} slots matched")
    return 0 if end.get("outcome") == "complete" else 2


def _transcript_task_name(transcript: Transcript) -> str | None:
    header = transcript.header
    if header and header.get("configs"):
        return header["configs"]["task"]["name"]
    for line in transcript.wire(direction="in"):
        if line["msg"].get("kind") == "welcome":
            return line["msg"]["view"]["task"]["name"]
    return None


def cmd_bots_replay(args: argparse.Namespace) -> int:
    transcript = Transcript.load(args.infile)
    configs = load_config_dir(_config_dir(args.config_dir)) if args.config_dir else None
    try:
        reproduced = replay(transcript, configs=configs)
    except errors.HashMismatchError as exc:
        print(f"MISMATCH: {exc}", file=sys.stderr)
        return 1
    print(f"replay ok: {reproduced}")
    return 0


# -- events replay --------------------------------------------------------------------


def cmd_events_replay(args: argparse.Namespace) -> int:
    configs = load_config_dir(_config_dir(args.config_dir))
    session = configs.sessions[args.session]
    timeline = build_timeline(
        session, [configs.scenarios[n] for n in session.scenarios], session.tick_rate_hz
    )
    with open(args.infile, encoding="utf-8") as fh:
        lines = [json.loads(l) for l in fh if l.strip()]
    logged = [l for l in lines if l.get("type", "event") == "event" or "event_id" in l]
    expected = timeline.entries
    if len(logged) != len(expected):
        print(f"MISMATCH: log has {len(logged)} events, timeline has {len(expected)}", file=sys.stderr)
        return 1
    base_offset = None
    for i, (line, entry) in enumerate(zip(logged, expected)):
        got = (line["vehicle"], line["condition"], line["event_id"], line.get("warning"))
        want = (entry.vehicle, entry.condition.value, entry.event_id, entry.warning)
        if got != want:
            print(f"MISMATCH at event {i}: logged {got}, expected {want}", file=sys.stderr)
            return 1
        offset = line["tick"] - entry.fire_tick
        if base_offset is None:
            base_offset = offset
        elif offset != base_offset:
            print(
                f"MISMATCH at event {i}: tick offset {offset} != {base_offset}", file=sys.stderr
            )
            return 1
    print(f"event log matches the timeline ({len(logged)} events)")
    return 0


# -- geom check ------------------------------------------------------------------------


def cmd_geom_check(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    report = run_connect_trials(args.trials, seed=args.seed)
    elapsed = time.perf_counter() - started
    print(
        f"{args.trials} trials in {elapsed:.2f}s: "
        f"max position residual {report['max_position_residual']:.3e}, "
        f"max direction residual {report['max_direction_residual']:.3e}"
    )
    ok = (
        report["max_position_residual"] <= GEOM_TOLERANCE
        and report["max_direction_residual"] <= GEOM_TOLERANCE
    )
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


# -- score ------------------------------------------------------------------------------


def cmd_score(args: argparse.Namespace) -> int:
    with open(args.infile, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if rows and not all(_is_int(cell) for cell in rows[0]):
        rows = rows[1:]  # header row
    scorer = {
        "sus": lambda items: {"score": sus_score(items)},
        "cohesion": lambda items: {"score": cohesion_score(items)},
        "ipq": lambda items: ipq_scores(
            items, load_ipq_mapping(args.mapping) if args.mapping else None
        ),
        "ssq": lambda items: ssq_scores(
            items, load_ssq_weights(args.weights) if args.weights else None
        ),
    }[args.instrument]
    failures = 0
    for i, row in enumerate(rows, start=1):
        try:
            items = [int(cell) for cell in row]
            result = scorer(items)
        except (ValueError, CrewsimError) as exc:
            print(json.dumps({"respondent": i, "error": str(exc)}))
            failures += 1
            continue
        print(json.dumps({"respondent": i, **result}))
    return 1 if failures else 0


def _is_int(cell: str) -> bool:
    try:
        int(cell)
        return True
    except ValueError:
        return False


# -- log summary ---------------------------------------------------------------------------


def cmd_log_summary(args: argparse.Namespace) -> int:
    try:
        summary = summarize_log(args.infile)
    except errors.ParseError as exc:
        print(f"PARSE ERROR: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(summary, indent=2))
    return 0


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crewsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a config directory")
    p.add_argument("--config-dir", help="defaults to the shipped corpus")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("serve", help="host one session over WebSocket")
    p.add_argument("--config-dir")
    p.add_argument("--session", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--seed", type=int)
    p.add_argument("--tick-rate", type=int)
    p.add_argument("--speedup", type=float, default=1.0, help="0 = unpaced, 1 = real time")
    p.add_argument("--log", help="JSONL wire/session log file")
    p.add_argument("--web-dir", help="also serve this directory of static files")
    p.add_argument("--web-port", type=int, default=8080)
    p.set_defaults(fn=cmd_serve)

    bots = sub.add_parser("bots", help="scripted clients").add_subparsers(
        dest="bots_command", required=True
    )
    p = bots.add_parser("run", help="run an installer/fetcher pair")
    p.add_argument("--addr", help="host:port of a running server (otherwise in-process)")
    p.add_argument("--config-dir")
    p.add_argument("--session", help="session name for in-process runs")
    p.add_argument("--task", help="expected task name (checked against the transcript)")
    p.add_argument("--policy", choices=["canonical", "batch_prepare"], default="canonical")
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=float, default=60.0)
    p.add_argument("--latency-ms", type=float, default=0.0)
    p.add_argument("--jitter-ms", type=float, default=0.0)
    p.add_argument("--out", help="write the transcript JSONL here")
    p.set_defaults(fn=cmd_bots_run)
    p = bots.add_parser("replay", help="re-execute a transcript and verify its hash")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--config-dir", help="needed only when the transcript lacks embedded configs")
    p.set_defaults(fn=cmd_bots_replay)

    events = sub.add_parser("events", help="event engine tools").add_subparsers(
        dest="events_command", required=True
    )
    p = events.add_parser("replay", help="verify a logged event stream against the timeline")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--config-dir")
    p.add_argument("--session", required=True)
    p.set_defaults(fn=cmd_events_replay)

    geom = sub.add_parser("geom", help="geometry tools").add_subparsers(
        dest="geom_command", required=True
    )
    p = geom.add_parser("check", help="randomized connection-solve property suite")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(fn=cmd_geom_check)

    p = sub.add_parser("score", help="score questionnaire CSVs (one respondent per row)")
    p.add_argument("--instrument", choices=["sus", "ipq", "ssq", "cohesion"], required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mapping", help="IPQ subscale mapping YAML override")
    p.add_argument("--weights", help="SSQ weights YAML override")
    p.set_defaults(fn=cmd_score)

    log = sub.add_parser("log", help="session log tools").add_subparsers(
        dest="log_command", required=True
    )
    p = log.add_parser("summary", help="aggregate a session log")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(fn=cmd_log_summary)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
