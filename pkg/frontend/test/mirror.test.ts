// The mirror must reproduce the server's world hash from a recorded session:
// fixtures.json carries a real welcome snapshot and every delta batch of a
// live run, plus the server-computed hashes.

import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { Mirror } from "../src/mirror.js";
import type { DeltaBatch, Snapshot } from "../src/protocol.js";

const fixtures = JSON.parse(readFileSync(new URL("./fixtures.json", import.meta.url), "utf-8"));

function loadedMirror(): Mirror {
  const mirror = new Mirror();
  const w = fixtures.welcome_installer;
  mirror.loadSnapshot(w.snapshot as Snapshot, w.batch_seq, w.tick);
  return mirror;
}

describe("Mirror", () => {
  it("hashes the welcome snapshot to the server value", () => {
    expect(loadedMirror().hash()).toBe(fixtures.welcome_installer.snapshot_hash);
  });

  it("converges on the server hash at every recorded batch", () => {
    const mirror = loadedMirror();
    for (const batch of fixtures.batches as DeltaBatch[]) {
      expect(mirror.applyBatch(batch)).toBe(true);
      expect(mirror.hash()).toBe(batch.world_hash);
    }
    expect(mirror.hash()).toBe(fixtures.final_hash);
    expect(mirror.seqGaps).toBe(0);
  });

  it("collects action records and chat from batches", () => {
    const mirror = loadedMirror();
    for (const batch of fixtures.batches as DeltaBatch[]) {
      mirror.applyBatch(batch);
    }
    expect(mirror.actions.length).toBeGreaterThan(0);
    expect(mirror.actions.every((a) => a.outcome === "applied")).toBe(true);
    expect(mirror.chat.some((c) => c.text.includes("héllo"))).toBe(true);
  });

  it("detects a gap and refuses the batch", () => {
    const mirror = loadedMirror();
    const batches = fixtures.batches as DeltaBatch[];
    expect(mirror.applyBatch(batches[0])).toBe(true);
    expect(mirror.applyBatch(batches[2])).toBe(false); // skipped one
    expect(mirror.seqGaps).toBe(1);
    // state unchanged by the refused batch: hash still matches batch 0
    expect(mirror.hash()).toBe(batches[0].world_hash);
  });

  it("recovers by reloading a snapshot", () => {
    const mirror = loadedMirror();
    const batches = fixtures.batches as DeltaBatch[];
    mirror.applyBatch(batches[0]);
    mirror.applyBatch(batches[2]);
    // a resync delivers the authoritative snapshot at some later seq
    const reference = loadedMirror();
    for (const batch of batches) reference.applyBatch(batch);
    mirror.loadSnapshot(reference.snapshot(), reference.batchSeq, reference.tick);
    expect(mirror.hash()).toBe(fixtures.final_hash);
  });
});
