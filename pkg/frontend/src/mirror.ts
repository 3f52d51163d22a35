// Client-side world mirror: applies snapshots and delta batches exactly as
// broadcast and hashes itself with the shared canonical digest, so equality
// with the server's world_hash proves convergence at that batch seq.

import { digest } from "./hash.js";
import type { ChatEntry, Delta, DeltaBatch, EntitySnapshot, Snapshot } from "./protocol.js";

export interface ActionRecord {
  tick: number;
  role: string;
  intent: { kind: string; [key: string]: unknown };
  outcome: string;
  detail?: string;
  ref?: string;
}

export class Mirror {
  phase: string | null = null;
  entities: Record<string, EntitySnapshot> = {};
  chat: ChatEntry[] = [];
  tick = 0;
  batchSeq = 0;
  actions: ActionRecord[] = [];
  seqGaps = 0;

  loadSnapshot(snapshot: Snapshot, batchSeq: number, tick: number): void {
    this.phase = snapshot.phase;
    this.entities = {};
    for (const [id, entity] of Object.entries(snapshot.entities)) {
      this.entities[id] = { ...entity };
    }
    this.chat = snapshot.chat.map((c) => ({ ...c }));
    this.batchSeq = batchSeq;
    this.tick = tick;
  }

  /** Apply one batch; false signals a seq gap (caller should resync). */
  applyBatch(batch: DeltaBatch): boolean {
    if (batch.batch_seq !== this.batchSeq + 1) {
      this.seqGaps += 1;
      return false;
    }
    this.batchSeq = batch.batch_seq;
    this.tick = batch.tick;
    for (const delta of batch.deltas) {
      this.applyDelta(delta);
    }
    return true;
  }

  private applyDelta(delta: Delta): void {
    switch (delta.op) {
      case "upsert": {
        const entity = delta.entity as EntitySnapshot;
        this.entities[entity.id] = entity;
        break;
      }
      case "remove":
        delete this.entities[delta.id as string];
        break;
      case "phase":
        this.phase = delta.phase as string;
        break;
      case "chat":
        this.chat.push(delta.entry as ChatEntry);
        break;
      case "action": {
        const { op: _op, ...record } = delta;
        this.actions.push(record as unknown as ActionRecord);
        break;
      }
    }
  }

  snapshot(): Snapshot {
    // canonical() sorts keys itself, so insertion order is irrelevant here
    return { phase: this.phase ?? "", entities: this.entities, chat: this.chat };
  }

  hash(): string {
    return digest({ phase: this.phase, entities: this.entities, chat: this.chat });
  }

  byKind(kind: string): EntitySnapshot[] {
    return Object.keys(this.entities)
      .sort()
      .map((id) => this.entities[id])
      .filter((e) => e.kind === kind);
  }
}
