"""Aggregation over session log files (JSONL, one typed record per line)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from ..errors import ParseError


def parse_log_lines(lines: Iterable[str]) -> list[dict]:
    records = []
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {number}: invalid JSON: {exc}") from exc
        if not isinstance(record, dict) or "type" not in record:
            raise ParseError(f"line {number}: expected an object with a 'type' field")
        records.append(record)
    return records


def summarize_log(source: str | Path | Iterable[str]) -> dict:
    """Aggregate counts a researcher skims first: duration, intents, errors.

    Accepts a path or an iterable of JSONL lines.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            records = parse_log_lines(fh)
    else:
        records = parse_log_lines(source)

    intents_by_role: dict[str, int] = {}
    errors_by_kind: dict[str, int] = {}
    chat_by_role: dict[str, int] = {}
    events_fired = 0
    scatters = 0
    ticks = [r["tick"] for r in records if isinstance(r.get("tick"), int)]
    phases: list[str] = []
    for record in records:
        rtype = record["type"]
        if rtype == "action":
            role = record.get("role", "?")
            intents_by_role[role] = intents_by_role.get(role, 0) + 1
            outcome = record.get("outcome")
            if outcome and outcome != "applied":
                errors_by_kind[outcome] = errors_by_kind.get(outcome, 0) + 1
            if record.get("intent", {}).get("kind") == "chat":
                chat_by_role[role] = chat_by_role.get(role, 0) + 1
        elif rtype == "event":
            events_fired += 1
        elif rtype == "scatter":
            scatters += 1
        elif rtype == "phase":
            phases.append(record.get("phase", "?"))
    return {
        "task_duration_ticks": (max(ticks) - min(ticks)) if ticks else 0,
        "intents_by_role": intents_by_role,
        "chat_by_role": chat_by_role,
        "events_fired": events_fired,
        "pipes_scattered": scatters,
        "errors_by_kind": errors_by_kind,
        "phases": phases,
    }
