"""Headless wire client used by the scripted bots.

Speaks only the public protocol: hello/welcome, intents with refs, chat,
resync. Keeps a full state mirror, verifies the server hash on every batch,
and can delay its outgoing traffic to emulate network latency (FIFO link:
jitter never reorders messages).
"""

from __future__ import annotations

import asyncio
import json
import random
import time
from dataclasses import dataclass, field

from websockets.asyncio.client import connect
from websockets.exceptions import ConnectionClosed

from ..errors import ProtocolError
from ..errors import TimeoutError as BudgetError
from ..server import protocol
from .mirror import ClientMirror


@dataclass(frozen=True)
class LatencyProfile:
    fixed_ms: float = 0.0
    jitter_ms: float = 0.0
    seed: int = 0

    @property
    def active(self) -> bool:
        return self.fixed_ms > 0 or self.jitter_ms > 0


@dataclass
class BotClient:
    role: str
    latency: LatencyProfile | None = None
    transcript: list[dict] | None = None

    mirror: ClientMirror = field(default_factory=ClientMirror)
    welcome: dict | None = None
    signals: list[dict] = field(default_factory=list)
    session_end: dict | None = None
    hash_checks: int = 0
    deadline: float | None = None

    def __post_init__(self) -> None:
        self._ws = None
        self._seq = 0
        self._ref = 0
        self._updated = asyncio.Event()
        self._welcome_event = asyncio.Event()
        self._action_results: dict[str, dict] = {}
        self._send_queue: asyncio.Queue | None = None
        self._tasks: list[asyncio.Task] = []
        self._rng = random.Random(self.latency.seed if self.latency else 0)
        self._recv_error: Exception | None = None

    # -- plumbing ------------------------------------------------------------------

    def _record(self, direction: str, msg: dict) -> None:
        if self.transcript is not None:
            self.transcript.append({"type": "wire", "role": self.role, "dir": direction, "msg": msg})

    async def connect(self, addr: str) -> None:
        self._ws = await connect(f"ws://{addr}", max_size=2**24)
        self._send_queue = asyncio.Queue()
        self._tasks = [
            asyncio.create_task(self._sender()),
            asyncio.create_task(self._receiver()),
        ]

    async def close(self) -> None:
        for task in self._tasks:
            task.cancel()
        if self._ws is not None:
            await self._ws.close()

    async def _sender(self) -> None:
        last_target = 0.0
        while True:
            text, enqueued = await self._send_queue.get()
            if self.latency is not None and self.latency.active:
                delay = (
                    self.latency.fixed_ms + self._rng.uniform(0.0, self.latency.jitter_ms)
                ) / 1000.0
                target = max(enqueued + delay, last_target)
                last_target = target
                now = time.monotonic()
                if target > now:
                    await asyncio.sleep(target - now)
            await self._ws.send(text)

    async def _receiver(self) -> None:
        try:
            async for raw in self._ws:
                msg = json.loads(raw)
                self._record("in", msg)
                await self._handle(msg)
                self._updated.set()
        except ConnectionClosed:
            pass
        except Exception as exc:  # surfaced on the next wait
            self._recv_error = exc
        finally:
            self._updated.set()

    async def _handle(self, msg: dict) -> None:
        kind = msg.get("kind")
        if kind == protocol.WELCOME:
            self.welcome = msg
            self.mirror.load_snapshot(msg["snapshot"], msg["batch_seq"], msg["tick"])
            self._welcome_event.set()
        elif kind == protocol.DELTA_BATCH:
            start = len(self.mirror.actions)
            if not self.mirror.apply_batch(msg):
                await self._raw_send(protocol.RESYNC)
                return
            if msg.get("world_hash") is not None:
                self.hash_checks += 1
                if self.mirror.hash() != msg["world_hash"]:
                    raise ProtocolError(
                        f"{self.role} mirror diverged from server at batch {msg['batch_seq']}"
                    )
            for action in self.mirror.actions[start:]:
                ref = action.get("ref")
                if ref is not None:
                    self._action_results[ref] = action
        elif kind == protocol.SNAPSHOT:
            self.mirror.load_snapshot(msg["snapshot"], msg["batch_seq"], msg["tick"])
        elif kind == protocol.SIGNAL:
            self.signals.append({"signal": msg["signal"], "value": msg["value"]})
        elif kind == protocol.SESSION_END:
            self.session_end = msg
        elif kind == protocol.ERROR:
            self._recv_error = ProtocolError(f"server error: {msg.get('code')}: {msg.get('detail')}")

    async def _raw_send(self, kind: str, **payload) -> None:
        self._seq += 1
        msg = protocol.make(kind, self._seq, **payload)
        self._record("out", msg)
        await self._send_queue.put((json.dumps(msg), time.monotonic()))

    # -- public api -----------------------------------------------------------------

    async def hello(self) -> dict:
        await self._raw_send(protocol.HELLO, role=self.role)
        await self.wait_for(lambda: self.welcome, what="welcome")
        return self.welcome

    async def send_intent(self, intent: dict) -> str:
        self._ref += 1
        ref = f"{self.role}-{self._ref}"
        await self._raw_send(protocol.INTENT, intent=intent, ref=ref)
        return ref

    async def chat(self, text: str) -> None:
        await self._raw_send(protocol.CHAT, text=text)

    async def ping(self) -> None:
        await self._raw_send(protocol.PING, nonce=self._seq)

    async def act(self, check: bool = True, **intent) -> dict:
        """Send an intent and wait for its outcome record."""
        ref = await self.send_intent(intent)
        action = await self.wait_for(
            lambda: self._action_results.get(ref), what=f"outcome of {intent.get('kind')}"
        )
        if check and action["outcome"] != "applied":
            raise ProtocolError(
                f"{self.role} intent {intent} rejected: "
                f"{action['outcome']}: {action.get('detail', '')}"
            )
        return action

    async def wait_for(self, predicate, what: str = "condition"):
        """Poll ``predicate`` after every received message until truthy."""
        while True:
            if self._recv_error is not None:
                raise self._recv_error
            value = predicate()
            if value:
                return value
            remaining = None if self.deadline is None else self.deadline - time.monotonic()
            if remaining is not None and remaining <= 0:
                raise BudgetError(f"{self.role} timed out waiting for {what}")
            self._updated.clear()
            try:
                await asyncio.wait_for(self._updated.wait(), timeout=remaining)
            except asyncio.TimeoutError:
                raise BudgetError(f"{self.role} timed out waiting for {what}") from None
