"""Client-side state mirror.

Applies snapshot + delta batches exactly as broadcast; its snapshot has the
same shape as the server world's, so hashing both with the shared canonical
digest proves convergence at any batch seq.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..server.hashing import snapshot_hash


@dataclass
class ClientMirror:
    phase: str | None = None
    entities: dict[str, dict] = field(default_factory=dict)
    chat: list[dict] = field(default_factory=list)
    tick: int = 0
    batch_seq: int = 0
    actions: list[dict] = field(default_factory=list)
    seq_gaps: int = 0

    def load_snapshot(self, snapshot: dict, batch_seq: int, tick: int) -> None:
        self.phase = snapshot["phase"]
        self.entities = {eid: dict(e) for eid, e in snapshot["entities"].items()}
        self.chat = [dict(c) for c in snapshot["chat"]]
        self.batch_seq = batch_seq
        self.tick = tick

    def apply_batch(self, batch: dict) -> bool:
        """Apply one delta batch; returns False on a seq gap (caller resyncs)."""
        if batch["batch_seq"] != self.batch_seq + 1:
            self.seq_gaps += 1
            return False
        self.batch_seq = batch["batch_seq"]
        self.tick = batch["tick"]
        for delta in batch["deltas"]:
            op = delta["op"]
            if op == "upsert":
                entity = delta["entity"]
                self.entities[entity["id"]] = entity
            elif op == "remove":
                self.entities.pop(delta["id"], None)
            elif op == "phase":
                self.phase = delta["phase"]
            elif op == "chat":
                self.chat.append(delta["entry"])
            elif op == "action":
                self.actions.append({k: v for k, v in delta.items() if k != "op"})
        return True

    def snapshot(self) -> dict:
        return {
            "phase": self.phase,
            "entities": {eid: self.entities[eid] for eid in sorted(self.entities)},
            "chat": list(self.chat),
        }

    def hash(self) -> str:
        return snapshot_hash(self.snapshot())

    # -- convenience queries used by bots and the harness ----------------------

    def by_kind(self, kind: str) -> list[dict]:
        return [self.entities[eid] for eid in sorted(self.entities) if self.entities[eid]["kind"] == kind]

    def find_storage_pipe(self, spec: dict, length_tol: float = 1e-6) -> dict | None:
        for pipe in self.by_kind("pipe"):
            if (
                pipe["status"] == "storage"
                and pipe["held_by"] is None
                and pipe["pipe_kind"] == spec["type"]
                and pipe["color"] == spec["color"]
                and pipe["diameter"] == spec["size"]
                and abs(pipe["length"] - spec["length"]) <= length_tol
            ):
                return pipe
        return None

    def find_storage(self, kind: str, diameter: int) -> dict | None:
        for entity in self.by_kind(kind):
            if entity["status"] == "storage" and entity.get("held_by") is None and entity["diameter"] == diameter:
                return entity
        return None
