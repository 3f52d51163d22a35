// Gesture-to-intent mapping, kept DOM-free so it is directly testable.
// Role-illegal gestures are blocked locally with an explanation instead of
// ever reaching the wire.

import type { EntitySnapshot, Intent, Role } from "./protocol.js";
import { intentLegalFor } from "./protocol.js";

export type GestureResult = { intent: Intent } | { blocked: string } | null;

export interface HeldDrag {
  /** wall-plane position of the cursor (u along the wall, v height) */
  u: number;
  v: number;
  /** true while the pointer is inside the wall viewport */
  onWall: boolean;
  horizontal: boolean;
}

function guard(role: Role, intent: Intent): GestureResult {
  if (!intentLegalFor(role, intent.kind)) {
    return { blocked: `${intent.kind} is not available to the ${role}` };
  }
  return { intent };
}

/** Pointer drag while holding something: stream the cursor as move_held. */
export function dragToIntent(role: Role, drag: HeldDrag): GestureResult {
  const axis = drag.horizontal ? [1.0, 0.0, 0.01] : [0.01, 0.0, 1.0];
  const depth = drag.onWall ? 0.2 : 2.0;
  return guard(role, { kind: "move_held", pos: [drag.u, depth, drag.v], axis });
}

/** Pointer release ends the drag: place on the wall or drop. */
export function releaseToIntent(role: Role, drag: HeldDrag): GestureResult {
  const axis = drag.horizontal ? [1.0, 0.0, 0.01] : [0.01, 0.0, 1.0];
  const depth = drag.onWall ? 0.2 : 2.0;
  return guard(role, { kind: "release", pos: [drag.u, depth, drag.v], axis });
}

/** Arrow keys and space map to the holding-point joystick. */
export function keyToIntent(role: Role, key: string): GestureResult {
  const input = key === "ArrowLeft" ? "left" : key === "ArrowRight" ? "right" : key === " " ? "press" : null;
  if (input === null) return null;
  return guard(role, { kind: "joystick", input });
}

export function clickEntityToIntent(role: Role, entity: EntitySnapshot, heldId: string | null): GestureResult {
  if (heldId !== null) return null; // clicks while holding are handled by context actions
  const grabbable =
    (entity.kind === "pipe" && (entity.status === "storage" || entity.status === "on_wall_loose")) ||
    ((entity.kind === "connector" || entity.kind === "clamp") && entity.status === "storage") ||
    (entity.kind === "glue" && entity.held_by === null);
  if (!grabbable) return null;
  return guard(role, { kind: "grab", target: entity.id });
}

export interface OrderForm {
  type: string;
  color: string;
  size: number;
  length: number;
  qty: number;
}

export function orderFormToIntent(role: Role, items: OrderForm[]): GestureResult {
  return guard(role, { kind: "order_pipes", items });
}

export interface RobotDogForm {
  cuts: { pipe: string; length: number }[];
  connectors: { size: number; qty: number }[];
}

export function robotDogFormToIntent(role: Role, form: RobotDogForm): GestureResult {
  return guard(role, { kind: "robot_dog", cuts: form.cuts, connectors: form.connectors });
}

/** Menu clicks: config-driven items either act locally (client_ui) or go to the server. */
export function menuClickToIntent(
  role: Role,
  itemId: string,
  actionKind: string,
): GestureResult {
  if (actionKind === "client_ui") {
    const local: Record<string, Intent> = {
      glue: { kind: "refill", refill: "glue" },
      clamp: { kind: "refill", refill: "clamp" },
    };
    const intent = local[itemId];
    return intent ? guard(role, intent) : null; // drone/robot-dog open dialogs
  }
  return guard(role, { kind: "menu", item: itemId });
}
