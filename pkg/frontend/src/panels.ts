// Panel content builders (menu, instruction sheet, debug overlay), returned
// as plain data so tests can assert masking without a DOM.

import type { MenuItem, RoleView } from "./protocol.js";

export interface MenuButton {
  itemId: string;
  label: string;
  actionKind: string;
}

export function buildMenu(view: RoleView): MenuButton[] {
  return view.menu.map((item: MenuItem) => ({
    itemId: item.item_id,
    label: item.label,
    actionKind: item.action_kind,
  }));
}

const FIELD_ORDER = ["color", "type", "size", "length"] as const;

export interface InstructionRow {
  index: number;
  cells: Array<{ field: string; value: string }>;
}

/** Rows show exactly the fields this role may see; nothing is inferred. */
export function buildInstructionRows(view: RoleView): InstructionRow[] {
  return view.task.segments.map((segment) => {
    const index = segment.index as number;
    const cells = FIELD_ORDER.filter((f) => f in segment).map((f) => ({
      field: f,
      value: String(segment[f]),
    }));
    return { index, cells };
  });
}

export interface OverlayState {
  batchSeq: number;
  tick: number;
  phase: string;
  mirrorHash: string;
  serverHash: string | null;
  converged: boolean;
  seqGaps: number;
}

export function buildOverlay(
  mirror: { batchSeq: number; tick: number; phase: string | null; seqGaps: number; hash(): string },
  serverHash: string | null,
): OverlayState {
  const mirrorHash = mirror.hash();
  return {
    batchSeq: mirror.batchSeq,
    tick: mirror.tick,
    phase: mirror.phase ?? "connecting",
    mirrorHash,
    serverHash,
    converged: serverHash === null || mirrorHash === serverHash,
    seqGaps: mirror.seqGaps,
  };
}
