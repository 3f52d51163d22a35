"""Wire protocol: message kinds, envelope rules, and validation.

Every message is one JSON object carried in a WebSocket text frame (the
frame supplies the length delimiting) and carries the protocol version and a
per-direction, per-connection strictly increasing ``seq``. The schema is
documented in PROTOCOL.md at the repository root.
"""

from __future__ import annotations

from typing import Any

from ..errors import ProtocolError

PROTOCOL_VERSION = 1

# client -> server
HELLO = "hello"
INTENT = "intent"
CHAT = "chat"
PING = "ping"
RESYNC = "resync"

# server -> client
WELCOME = "welcome"
DELTA_BATCH = "delta_batch"
SIGNAL = "signal"
PONG = "pong"
SNAPSHOT = "snapshot"
SESSION_END = "session_end"
ERROR = "error"

CLIENT_KINDS = frozenset({HELLO, INTENT, CHAT, PING, RESYNC})
SERVER_KINDS = frozenset({WELCOME, DELTA_BATCH, SIGNAL, PONG, SNAPSHOT, SESSION_END, ERROR})


def make(kind: str, seq: int, **payload: Any) -> dict:
    msg = {"v": PROTOCOL_VERSION, "kind": kind, "seq": seq}
    msg.update(payload)
    return msg


def check_envelope(msg: Any, allowed: frozenset[str], last_seq: int | None) -> int:
    """Validate version, kind, and seq monotonicity; returns the new seq."""
    if not isinstance(msg, dict):
        raise ProtocolError("message must be a JSON object")
    if msg.get("v") != PROTOCOL_VERSION:
        raise ProtocolError(f"unsupported protocol version {msg.get('v')!r}")
    kind = msg.get("kind")
    if kind not in allowed:
        raise ProtocolError(f"unexpected message kind {kind!r}")
    seq = msg.get("seq")
    if not isinstance(seq, int) or isinstance(seq, bool):
        raise ProtocolError("seq must be an integer")
    if last_seq is not None and seq <= last_seq:
        raise ProtocolError(f"seq must be strictly increasing ({seq} after {last_seq})")
    return seq
