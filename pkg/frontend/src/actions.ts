// Context-sensitive action list for the side panel, computed as pure data
// from the mirror and the current selection (testable without a DOM).

import type { Mirror } from "./mirror.js";
import type { EntitySnapshot, Intent, Role } from "./protocol.js";

export interface Selection {
  entityId: string;
  end?: "a" | "b";
  zoneIndex?: number;
}

export interface ContextAction {
  label: string;
  intent: Intent;
}

function me(mirror: Mirror, role: Role): EntitySnapshot | undefined {
  return mirror.entities[role];
}

export function contextActions(role: Role, mirror: Mirror, selection: Selection | null): ContextAction[] {
  const actor = me(mirror, role);
  if (!actor) return [];
  const actions: ContextAction[] = [];
  const heldId = actor.held as string | null;
  const held = heldId ? mirror.entities[heldId] : null;
  const selected = selection ? mirror.entities[selection.entityId] : null;

  if (role === "installer") {
    installerActions(actions, mirror, actor, held, selection, selected);
  } else {
    fetcherActions(actions, selection, selected);
  }
  return actions;
}

function installerActions(
  actions: ContextAction[],
  mirror: Mirror,
  actor: EntitySnapshot,
  held: EntitySnapshot | null,
  selection: Selection | null,
  selected: EntitySnapshot | null,
): void {
  if (held === null && selected) {
    const grabbable =
      (selected.kind === "pipe" &&
        (selected.status === "storage" || selected.status === "on_wall_loose")) ||
      ((selected.kind === "connector" || selected.kind === "clamp") &&
        selected.status === "storage") ||
      (selected.kind === "glue" && selected.held_by === null);
    if (grabbable) {
      actions.push({ label: `Grab ${selected.id}`, intent: { kind: "grab", target: selected.id } });
    }
  }
  if (held) {
    actions.push({ label: `Drop ${held.id}`, intent: { kind: "release" } });
  }
  if (held?.kind === "clamp" && selected?.kind === "pipe" && selection?.zoneIndex !== undefined) {
    const zones = (selected.zones as Array<{ index: number; center: [number, number] }>) ?? [];
    const zone = zones.find((z) => z.index === selection.zoneIndex);
    if (zone) {
      actions.push({
        label: `Place clamp on zone ${zone.index}`,
        intent: { kind: "place_clamp", target: selected.id, zone: zone.index, pos: zone.center },
      });
    }
  }
  if (held?.kind === "glue" && selected && selection?.end) {
    actions.push({
      label: `Apply glue to ${selected.id} end ${selection.end}`,
      intent: { kind: "apply_glue", target: selected.id, end: selection.end },
    });
  }
  if ((held?.kind === "connector" || held?.kind === "pipe") && selected && selection?.end) {
    const glued = (selected.glued as Record<string, boolean>)?.[selection.end];
    if (glued) {
      for (const heldEnd of ["a", "b"] as const) {
        actions.push({
          label: `Connect ${held.id} (end ${heldEnd}) to ${selected.id} end ${selection.end}`,
          intent: {
            kind: "connect",
            target: selected.id,
            end: selection.end,
            held_end: heldEnd,
          },
        });
      }
    }
  }
  const lift = mirror.byKind("lift")[0];
  if (lift) {
    if (actor.in_lift) {
      actions.push({ label: "Lift up", intent: { kind: "lift", dir: "up" } });
      actions.push({ label: "Lift down", intent: { kind: "lift", dir: "down" } });
      actions.push({ label: "Lift left", intent: { kind: "lift", dir: "left" } });
      actions.push({ label: "Lift right", intent: { kind: "lift", dir: "right" } });
      actions.push({ label: "Exit lift", intent: { kind: "exit_lift" } });
    } else {
      actions.push({ label: "Walk to lift", intent: { kind: "move", pos: lift.pos } });
      actions.push({ label: "Enter lift", intent: { kind: "enter_lift" } });
    }
  }
}

function fetcherActions(
  actions: ContextAction[],
  selection: Selection | null,
  selected: EntitySnapshot | null,
): void {
  if (selected?.kind === "pipe" && selected.status === "storage") {
    actions.push({
      label: `Cut ${selected.id} (${selected.length})…`,
      intent: { kind: "robot_dog", cuts: [{ pipe: selected.id, length: 0 }], connectors: [] },
    });
  }
}
