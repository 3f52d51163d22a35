"""WebSocket host: connections, the paced tick loop, and broadcast.

Network receipt is concurrent, but every intent funnels into the session's
single queue and only the tick loop mutates the world. The loop can run
wall-clock paced (live sessions) or unpaced (bots, tests); pacing never
affects determinism because replay works from recorded ticks.
"""

from __future__ import annotations

import asyncio
import json
import time
from dataclasses import dataclass, field
from typing import Any, TextIO

from websockets.asyncio.server import ServerConnection, serve
from websockets.exceptions import ConnectionClosed

from ..errors import ProtocolError, RoleTakenError, SessionFullError
from ..world.state import PHASE_COMPLETE, PHASE_LOBBY
from . import protocol
from .session import SessionCore

COMPLETE_GRACE_S = 0.5


@dataclass
class _Client:
    connection: ServerConnection
    role: str
    out_seq: int = 0
    last_in_seq: int | None = None

    def next_seq(self) -> int:
        self.out_seq += 1
        return self.out_seq


@dataclass
class SessionHost:
    core: SessionCore
    speedup: float = 0.0  # <= 0 means unpaced (as fast as the loop allows)
    pause_timeout_s: float = 60.0
    log_file: TextIO | None = None

    clients: dict[str, _Client] = field(default_factory=dict)
    paused_since: float | None = None
    _stopped: asyncio.Event = field(default_factory=asyncio.Event)
    _conn_count: int = 0

    # -- logging -------------------------------------------------------------------

    def log_line(self, line: dict) -> None:
        if self.log_file is not None:
            self.log_file.write(json.dumps(line) + "\n")

    def _log_wire(self, direction: str, role: str, msg: dict) -> None:
        self.log_line({"type": "wire", "dir": direction, "role": role, "msg": msg})

    # -- sending -------------------------------------------------------------------

    async def _send(self, client: _Client, kind: str, **payload: Any) -> None:
        msg = protocol.make(kind, client.next_seq(), **payload)
        self._log_wire("out", client.role, msg)
        try:
            await client.connection.send(json.dumps(msg))
        except ConnectionClosed:
            pass

    async def _broadcast(self, kind: str, **payload: Any) -> None:
        for client in list(self.clients.values()):
            await self._send(client, kind, **payload)

    # -- connection handling ----------------------------------------------------------

    async def handle_connection(self, connection: ServerConnection) -> None:
        self._conn_count += 1
        conn_id = f"conn-{self._conn_count}"
        client: _Client | None = None
        try:
            raw = await connection.recv()
            msg = json.loads(raw)
            protocol.check_envelope(msg, frozenset({protocol.HELLO}), None)
            role = msg.get("role")
            welcome = self.core.join(role, conn_id)
            client = _Client(connection=connection, role=role, last_in_seq=msg["seq"])
            self.clients[role] = client
            self._log_wire("in", role, msg)
            await self._send(client, protocol.WELCOME, **welcome)
            if self.paused_since is not None and len(self.clients) == 2:
                self.paused_since = None  # resumed with the same role set
            await self._recv_loop(client)
        except (ProtocolError, RoleTakenError, SessionFullError) as exc:
            err = protocol.make(protocol.ERROR, 0, code=type(exc).__name__, detail=str(exc))
            try:
                await connection.send(json.dumps(err))
            except ConnectionClosed:
                pass
        except (ConnectionClosed, json.JSONDecodeError):
            pass
        finally:
            if client is not None and self.clients.get(client.role) is client:
                del self.clients[client.role]
                self.core.leave(client.role)
                if self.core.phase not in (PHASE_LOBBY, PHASE_COMPLETE) and self.core.outcome is None:
                    self.paused_since = time.monotonic()

    async def _recv_loop(self, client: _Client) -> None:
        async for raw in client.connection:
            try:
                msg = json.loads(raw)
                client.last_in_seq = protocol.check_envelope(
                    msg, protocol.CLIENT_KINDS - {protocol.HELLO}, client.last_in_seq
                )
            except (json.JSONDecodeError, ProtocolError) as exc:
                await self._send(client, protocol.ERROR, code=type(exc).__name__, detail=str(exc))
                continue
            self._log_wire("in", client.role, msg)
            kind = msg["kind"]
            if kind == protocol.INTENT:
                intent = msg.get("intent")
                if not isinstance(intent, dict):
                    await self._send(client, protocol.ERROR, code="ProtocolError", detail="intent must be an object")
                    continue
                self.core.enqueue(client.role, intent, msg.get("ref"))
            elif kind == protocol.CHAT:
                self.core.enqueue(client.role, {"kind": "chat", "text": msg.get("text")}, msg.get("ref"))
            elif kind == protocol.PING:
                await self._send(client, protocol.PONG, nonce=msg.get("nonce"))
            elif kind == protocol.RESYNC:
                await self._send(
                    client,
                    protocol.SNAPSHOT,
                    batch_seq=self.core.batch_seq,
                    tick=self.core.world.tick,
                    snapshot=self.core.world.snapshot(),
                )

    # -- tick loop ----------------------------------------------------------------------

    async def run(self) -> str:
        """Drive ticks until the session completes or aborts; returns the outcome."""
        interval = 0.0 if self.speedup <= 0 else 1.0 / (self.core.config.tick_rate_hz * self.speedup)
        while not self._stopped.is_set():
            if self.core.phase == PHASE_LOBBY:
                await asyncio.sleep(0.01)
                continue
            if self.paused_since is not None:
                if time.monotonic() - self.paused_since > self.pause_timeout_s:
                    self.core.abort("disconnect timeout")
                    await self._broadcast(
                        protocol.SESSION_END,
                        outcome=self.core.outcome,
                        final_hash=self.core.world_hash(),
                        report=None,
                    )
                    break
                await asyncio.sleep(0.02)
                continue
            result = self.core.run_tick()
            if result.batch is not None:
                await self._broadcast(protocol.DELTA_BATCH, **result.batch)
            for signal in result.signals:
                targets = (
                    [signal.to_role] if signal.to_role is not None else list(self.clients)
                )
                for role in targets:
                    client = self.clients.get(role)
                    if client is not None:
                        await self._send(client, protocol.SIGNAL, **signal.to_wire())
            if result.completed:
                report = self.core.final_report.to_wire() if self.core.final_report else None
                await self._broadcast(
                    protocol.SESSION_END,
                    outcome=self.core.outcome,
                    final_hash=self.core.world_hash(),
                    report=report,
                )
                await asyncio.sleep(COMPLETE_GRACE_S)
                break
            await asyncio.sleep(interval)
        self._stopped.set()
        return self.core.outcome or "stopped"

    def stop(self) -> None:
        self._stopped.set()


async def serve_session(
    core: SessionCore,
    host: str = "127.0.0.1",
    port: int = 0,
    *,
    speedup: float = 0.0,
    pause_timeout_s: float = 60.0,
    log_file: TextIO | None = None,
    bound_port: asyncio.Future | None = None,
) -> str:
    """Run one session over WebSocket; resolves ``bound_port`` once listening."""
    session_host = SessionHost(
        core=core, speedup=speedup, pause_timeout_s=pause_timeout_s, log_file=log_file
    )
    core.log_sink = session_host.log_line
    async with serve(session_host.handle_connection, host, port) as server:
        actual_port = server.sockets[0].getsockname()[1]
        if bound_port is not None and not bound_port.done():
            bound_port.set_result(actual_port)
        outcome = await session_host.run()
    return outcome
