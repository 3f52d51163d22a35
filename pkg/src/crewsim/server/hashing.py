"""Canonical world serialization and the 64-bit snapshot digest.

Equality of digests is the convergence instrument: server and client mirrors
hash their state with the same canonicalization (sorted keys, numbers
quantized to 1e-9) so replay and cross-language comparisons are bit-exact.
The digest is FNV-1a 64, chosen so a browser client can compute it without
crypto dependencies.
"""

from __future__ import annotations

import json
import math
from typing import Any

QUANT = 1e9

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK = 0xFFFFFFFFFFFFFFFF


def quantize(value: float) -> int:
    """Numbers quantize to integer nanounits; floor(x+0.5) matches JS Math.round."""
    return math.floor(value * QUANT + 0.5)


def _transform(value: Any) -> Any:
    if value is None or value is True or value is False:
        return value
    if isinstance(value, (int, float)):
        return quantize(value)
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        return [_transform(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _transform(v) for k, v in value.items()}
    raise TypeError(f"cannot canonicalize {type(value).__name__}")


def canonical(value: Any) -> str:
    """Deterministic string form: sorted keys, quantized numbers, JSON escaping."""
    return json.dumps(_transform(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK
    return h


def digest(value: Any) -> str:
    """16-hex-char FNV-1a 64 digest of the canonical form."""
    return f"{fnv1a64(canonical(value).encode('utf-8')):016x}"


def snapshot_hash(snapshot: dict) -> str:
    return digest(snapshot)
