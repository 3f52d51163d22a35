// Gesture mapping and outgoing-message validation: role-illegal gestures are
// blocked locally and anything sent validates against the protocol schema.

import { describe, expect, it } from "vitest";
import {
  clickEntityToIntent,
  dragToIntent,
  keyToIntent,
  menuClickToIntent,
  orderFormToIntent,
  releaseToIntent,
} from "../src/input.js";
import { makeMessage, validateOutgoing } from "../src/protocol.js";
import type { EntitySnapshot } from "../src/protocol.js";

const drag = { u: 3.0, v: 1.5, onWall: true, horizontal: true };

describe("gesture mapping", () => {
  it("drag streams move_held with a wall-depth cursor", () => {
    const result = dragToIntent("installer", drag);
    expect(result && "intent" in result && result.intent).toEqual({
      kind: "move_held",
      pos: [3.0, 0.2, 1.5],
      axis: [1.0, 0.0, 0.01],
    });
  });

  it("release near the wall becomes a placement", () => {
    const result = releaseToIntent("installer", { ...drag, horizontal: false });
    expect(result && "intent" in result && result.intent).toEqual({
      kind: "release",
      pos: [3.0, 0.2, 1.5],
      axis: [0.01, 0.0, 1.0],
    });
  });

  it("arrows and space drive the holding point", () => {
    const left = keyToIntent("installer", "ArrowLeft");
    expect(left && "intent" in left && left.intent).toEqual({ kind: "joystick", input: "left" });
    const press = keyToIntent("installer", " ");
    expect(press && "intent" in press && press.intent).toEqual({ kind: "joystick", input: "press" });
    expect(keyToIntent("installer", "x")).toBeNull();
  });

  it("blocks installer gestures for the fetcher and vice versa", () => {
    const blockedDrag = dragToIntent("fetcher", drag);
    expect(blockedDrag && "blocked" in blockedDrag).toBe(true);
    const blockedOrder = orderFormToIntent("installer", [
      { type: "gas", color: "green", size: 1, length: 2, qty: 1 },
    ]);
    expect(blockedOrder && "blocked" in blockedOrder).toBe(true);
    const allowedOrder = orderFormToIntent("fetcher", [
      { type: "gas", color: "green", size: 1, length: 2, qty: 1 },
    ]);
    expect(allowedOrder && "intent" in allowedOrder).toBe(true);
  });

  it("click grabs only grabbable things, installer only", () => {
    const pipe = { id: "pipe:0001", kind: "pipe", status: "storage" } as unknown as EntitySnapshot;
    const fixed = { id: "pipe:0002", kind: "pipe", status: "fixed" } as unknown as EntitySnapshot;
    const grab = clickEntityToIntent("installer", pipe, null);
    expect(grab && "intent" in grab && grab.intent).toEqual({ kind: "grab", target: "pipe:0001" });
    expect(clickEntityToIntent("installer", fixed, null)).toBeNull();
    const foreign = clickEntityToIntent("fetcher", pipe, null);
    expect(foreign && "blocked" in foreign).toBe(true);
  });

  it("menu clicks map refills locally and npc requests to menu intents", () => {
    const refill = menuClickToIntent("fetcher", "glue", "client_ui");
    expect(refill && "intent" in refill && refill.intent).toEqual({ kind: "refill", refill: "glue" });
    const npc = menuClickToIntent("installer", "supervisor", "npc_request");
    expect(npc && "intent" in npc && npc.intent).toEqual({ kind: "menu", item: "supervisor" });
    expect(menuClickToIntent("fetcher", "ai_drone", "client_ui")).toBeNull(); // opens a dialog
  });
});

describe("validateOutgoing", () => {
  it("accepts well-formed client messages", () => {
    expect(validateOutgoing(makeMessage("hello", 1, { role: "installer" }), null)).toBeNull();
    expect(
      validateOutgoing(makeMessage("intent", 2, { intent: { kind: "grab", target: "x" } }), 1),
    ).toBeNull();
    expect(validateOutgoing(makeMessage("chat", 3, { text: "hi" }), 2)).toBeNull();
  });

  it("rejects bad kinds, stale seqs, and unknown intents", () => {
    expect(validateOutgoing(makeMessage("welcome", 1), null)).toMatch(/client message/);
    expect(validateOutgoing(makeMessage("ping", 1, { nonce: 1 }), 1)).toMatch(/seq/);
    expect(
      validateOutgoing(makeMessage("intent", 2, { intent: { kind: "teleport" } }), 1),
    ).toMatch(/unknown intent/);
    expect(validateOutgoing({ ...makeMessage("ping", 1), v: 9 }, null)).toMatch(/version/);
  });
});
