"""Authoritative session server: protocol, tick loop, snapshot hashing."""

from .hashing import canonical, digest, fnv1a64, quantize, snapshot_hash
from .host import SessionHost, serve_session
from .protocol import PROTOCOL_VERSION, check_envelope, make
from .session import QueuedIntent, SessionCore, TickResult

__all__ = [
    "PROTOCOL_VERSION",
    "QueuedIntent",
    "SessionCore",
    "SessionHost",
    "TickResult",
    "canonical",
    "check_envelope",
    "digest",
    "fnv1a64",
    "make",
    "quantize",
    "serve_session",
    "snapshot_hash",
]
