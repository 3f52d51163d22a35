"""Questionnaire scoring for the study instruments.

Usability (10 five-point items), presence (14 seven-point items, three
subscales), simulator sickness (16 three-point items, weighted subscales),
and task cohesion (4 five-point items). Subscale item sets that belong to
the cited external instruments ship as editable YAML data files rather than
code constants.
"""

from __future__ import annotations

from pathlib import Path

import yaml

from ..config.dirs import shipped_instruments_dir
from ..errors import MappingError, RangeError

SUS_ITEMS = 10
IPQ_ITEMS = 14
SSQ_ITEMS = 16
COHESION_ITEMS = 4


def _check_items(items: list[int], count: int, low: int, high: int, instrument: str) -> list[int]:
    if len(items) != count:
        raise RangeError(f"{instrument} expects {count} items, got {len(items)}")
    for i, value in enumerate(items, start=1):
        if isinstance(value, bool) or not isinstance(value, int):
            raise RangeError(f"{instrument} item {i} must be an integer")
        if not low <= value <= high:
            raise RangeError(f"{instrument} item {i} must be in {low}..{high}, got {value}")
    return list(items)


def sus_score(items: list[int]) -> float:
    """Odd items score value-1, even items score 5-value; total scaled by 2.5."""
    items = _check_items(items, SUS_ITEMS, 1, 5, "SUS")
    odd = sum(items[i] - 1 for i in range(0, SUS_ITEMS, 2))
    even = sum(5 - items[i] for i in range(1, SUS_ITEMS, 2))
    return (odd + even) * 2.5


def load_ipq_mapping(path: str | Path | None = None) -> dict:
    source = Path(path) if path else shipped_instruments_dir() / "ipq_mapping.yaml"
    raw = yaml.safe_load(source.read_text(encoding="utf-8"))
    subscales = raw.get("subscales")
    reverse = raw.get("reverse", [])
    if not isinstance(subscales, dict) or not subscales:
        raise MappingError("ipq mapping needs a 'subscales' table")
    seen: dict[int, str] = {}
    for name, indices in subscales.items():
        for index in indices:
            if index in seen:
                raise MappingError(f"item {index} mapped to both {seen[index]!r} and {name!r}")
            seen[index] = name
    missing = [i for i in range(1, IPQ_ITEMS + 1) if i not in seen]
    if missing:
        raise MappingError(f"items not mapped to any subscale: {missing}")
    bad = [i for i in reverse if i not in seen]
    if bad:
        raise MappingError(f"reverse-coded items outside the instrument: {bad}")
    return {"subscales": {k: list(v) for k, v in subscales.items()}, "reverse": list(reverse)}


def ipq_scores(items: list[int], mapping: dict | None = None) -> dict[str, float]:
    """Per-subscale means on the 7-point scale; reverse-coded items score 8-r."""
    items = _check_items(items, IPQ_ITEMS, 1, 7, "IPQ")
    if mapping is None:
        mapping = load_ipq_mapping()
    reverse = set(mapping["reverse"])
    out = {}
    for name, indices in mapping["subscales"].items():
        values = [(8 - items[i - 1]) if i in reverse else items[i - 1] for i in indices]
        out[name] = sum(values) / len(values)
    return out


def load_ssq_weights(path: str | Path | None = None) -> dict:
    source = Path(path) if path else shipped_instruments_dir() / "ssq_weights.yaml"
    raw = yaml.safe_load(source.read_text(encoding="utf-8"))
    for key in ("nausea", "oculomotor", "disorientation"):
        entry = raw.get(key)
        if not isinstance(entry, dict) or "items" not in entry or "multiplier" not in entry:
            raise MappingError(f"ssq weights missing subscale {key!r}")
        for index in entry["items"]:
            if not 1 <= index <= SSQ_ITEMS:
                raise MappingError(f"ssq subscale {key!r} references item {index} outside 1..16")
    if "total_multiplier" not in raw:
        raise MappingError("ssq weights missing 'total_multiplier'")
    return raw


def ssq_scores(items: list[int], weights: dict | None = None) -> dict[str, float]:
    """Weighted subscale sums plus the combined total score."""
    items = _check_items(items, SSQ_ITEMS, 0, 3, "SSQ")
    if weights is None:
        weights = load_ssq_weights()
    out = {}
    raw_total = 0
    for name in ("nausea", "oculomotor", "disorientation"):
        entry = weights[name]
        raw = sum(items[i - 1] for i in entry["items"])
        raw_total += raw
        out[name] = raw * entry["multiplier"]
    out["total"] = raw_total * weights["total_multiplier"]
    return out


def cohesion_score(items: list[int]) -> float:
    """Plain mean of the four task-cohesion items."""
    items = _check_items(items, COHESION_ITEMS, 1, 5, "cohesion")
    return sum(items) / COHESION_ITEMS
