// Canvas rendering: a front view of the wall above a top-down site view,
// plus pure coordinate mapping and hit-testing helpers.

import type { Mirror } from "./mirror.js";
import type { EntitySnapshot, LayoutSlot, RoleView } from "./protocol.js";
import type { Selection } from "./actions.js";

export const PIPE_COLORS: Record<string, string> = {
  magenta: "#c4399f",
  green: "#3fa34d",
  blue: "#2f6fd6",
  yellow: "#d6b52f",
};

export interface Viewport {
  width: number;
  height: number;
  wallWidth: number;
  wallHeight: number;
  siteDepth: number;
  wallPixHeight: number; // split line between the two views
}

export function makeViewport(width: number, height: number, rules: Record<string, unknown>): Viewport {
  const wallWidth = (rules.wall_width as number) ?? 30;
  const wallHeight = (rules.wall_height as number) ?? 10;
  const siteDepth = (rules.site_depth as number) ?? 12;
  return {
    width,
    height,
    wallWidth,
    wallHeight,
    siteDepth,
    wallPixHeight: Math.round((height * wallHeight) / (wallHeight + siteDepth)),
  };
}

// wall plane (u along the wall, v height) -> canvas pixels
export function wallToPix(vp: Viewport, u: number, v: number): [number, number] {
  return [(u / vp.wallWidth) * vp.width, vp.wallPixHeight - (v / vp.wallHeight) * vp.wallPixHeight];
}

export function pixToWall(vp: Viewport, x: number, y: number): [number, number] | null {
  if (y > vp.wallPixHeight) return null;
  return [(x / vp.width) * vp.wallWidth, ((vp.wallPixHeight - y) / vp.wallPixHeight) * vp.wallHeight];
}

// ground plane (x along the wall, y depth) -> canvas pixels
export function siteToPix(vp: Viewport, x: number, y: number): [number, number] {
  const sitePix = vp.height - vp.wallPixHeight;
  return [(x / vp.wallWidth) * vp.width, vp.wallPixHeight + (y / vp.siteDepth) * sitePix];
}

export function pixToSite(vp: Viewport, x: number, y: number): [number, number] | null {
  if (y <= vp.wallPixHeight) return null;
  const sitePix = vp.height - vp.wallPixHeight;
  return [(x / vp.width) * vp.wallWidth, ((y - vp.wallPixHeight) / sitePix) * vp.siteDepth];
}

// -- hit testing (pure) -------------------------------------------------------

export interface Hit {
  selection: Selection;
  distance: number;
}

function dist(a: [number, number], b: [number, number]): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1]);
}

function pipeEnds(entity: EntitySnapshot): { a: [number, number]; b: [number, number] } | null {
  const pose = entity.wall_pose as [number, number, number] | null;
  if (!pose) return null;
  const [u, v, theta] = pose;
  if (entity.kind === "connector") {
    const arm = 0.5 * (entity.diameter as number);
    const c = Math.cos(theta);
    const s = Math.sin(theta);
    return {
      a: [u + c * -arm, v + s * -arm],
      b: [u - s * arm, v + c * arm],
    };
  }
  const half = (entity.length as number) / 2;
  const c = Math.cos(theta);
  const s = Math.sin(theta);
  return { a: [u - c * half, v - s * half], b: [u + c * half, v + s * half] };
}

/** Nearest selectable thing on the wall: a pipe end, a clamp zone, or a body. */
export function hitTestWall(mirror: Mirror, point: [number, number], threshold = 0.6): Selection | null {
  let best: Hit | null = null;
  const consider = (selection: Selection, d: number) => {
    if (d <= threshold && (best === null || d < best.distance)) {
      best = { selection, distance: d };
    }
  };
  for (const entity of [...mirror.byKind("pipe"), ...mirror.byKind("connector")]) {
    const ends = pipeEnds(entity);
    if (!ends) continue;
    consider({ entityId: entity.id, end: "a" }, dist(point, ends.a));
    consider({ entityId: entity.id, end: "b" }, dist(point, ends.b));
    const zones = (entity.zones as Array<{ index: number; center: [number, number] }>) ?? [];
    for (const zone of zones) {
      consider({ entityId: entity.id, zoneIndex: zone.index }, dist(point, zone.center) * 0.9);
    }
    const mid: [number, number] = [(ends.a[0] + ends.b[0]) / 2, (ends.a[1] + ends.b[1]) / 2];
    consider({ entityId: entity.id }, dist(point, mid));
  }
  return best ? (best as Hit).selection : null;
}

/** Nearest selectable thing on the ground. */
export function hitTestSite(mirror: Mirror, point: [number, number], threshold = 1.2): Selection | null {
  let best: Hit | null = null;
  for (const entity of Object.keys(mirror.entities).sort().map((id) => mirror.entities[id])) {
    const pos = (entity.ground_pos ?? entity.pos) as [number, number] | null;
    if (!pos) continue;
    if (!["pipe", "connector", "clamp", "glue", "lift"].includes(entity.kind)) continue;
    const d = dist(point, pos);
    if (d <= threshold && (best === null || d < best.distance)) {
      best = { selection: { entityId: entity.id }, distance: d };
    }
  }
  return best ? (best as Hit).selection : null;
}

// -- drawing -------------------------------------------------------------------

interface Cue {
  kind: string;
  until: number;
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  mirror: Mirror,
  view: RoleView,
  selection: Selection | null,
  cues: Cue[],
  now: number,
): void {
  ctx.clearRect(0, 0, vp.width, vp.height);
  drawWall(ctx, vp, mirror, view, selection, cues, now);
  drawSite(ctx, vp, mirror, selection);
}

function drawWall(
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  mirror: Mirror,
  view: RoleView,
  selection: Selection | null,
  cues: Cue[],
  now: number,
): void {
  ctx.fillStyle = "#ece7df";
  ctx.fillRect(0, 0, vp.width, vp.wallPixHeight);
  // layout guides
  for (const slot of view.layout.slots) {
    drawSlotGuide(ctx, vp, slot);
  }
  const pulse = cues.some((c) => c.kind === "long" && c.until > now);
  for (const entity of [...mirror.byKind("pipe"), ...mirror.byKind("connector")]) {
    drawWallEntity(ctx, vp, entity, selection, pulse);
  }
  for (const clamp of mirror.byKind("clamp")) {
    const pos = clamp.wall_pos as [number, number] | null;
    if (!pos) continue;
    const [x, y] = wallToPix(vp, pos[0], pos[1]);
    ctx.fillStyle = "#333";
    ctx.fillRect(x - 4, y - 7, 8, 14);
  }
  const lift = mirror.byKind("lift")[0];
  if (lift) {
    const pos = lift.pos as [number, number];
    const [x, y] = wallToPix(vp, pos[0], lift.height as number);
    ctx.fillStyle = "#8a6d3b";
    ctx.fillRect(x - 18, y - 4, 36, 6);
    if (lift.occupant) {
      ctx.beginPath();
      ctx.arc(x, y - 12, 7, 0, Math.PI * 2);
      ctx.fillStyle = "#1f77b4";
      ctx.fill();
    }
  }
}

function drawSlotGuide(ctx: CanvasRenderingContext2D, vp: Viewport, slot: LayoutSlot): void {
  const [x, y] = wallToPix(vp, slot.anchor[0], slot.anchor[1]);
  ctx.save();
  ctx.strokeStyle = slot.boxed ? "#b08f5a" : "#9aa2ad";
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  if (slot.orientation === "horizontal") {
    ctx.moveTo(x - 24, y);
    ctx.lineTo(x + 24, y);
  } else {
    ctx.moveTo(x, y - 24);
    ctx.lineTo(x, y + 24);
  }
  ctx.stroke();
  ctx.setLineDash([]);
  ctx.fillStyle = "#6a7380";
  ctx.font = "11px sans-serif";
  ctx.fillText(`${slot.index}${slot.endpoint ? " ⊗" : ""}${slot.boxed ? " □" : ""}`, x + 4, y - 6);
  ctx.restore();
}

function drawWallEntity(
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  entity: EntitySnapshot,
  selection: Selection | null,
  pulse: boolean,
): void {
  const pose = entity.wall_pose as [number, number, number] | null;
  if (!pose) return;
  const ends = pipeEnds(entity)!;
  const a = wallToPix(vp, ends.a[0], ends.a[1]);
  const b = wallToPix(vp, ends.b[0], ends.b[1]);
  const selected = selection?.entityId === entity.id;
  ctx.lineWidth = entity.kind === "connector" ? 8 : 4 + 1.5 * (entity.diameter as number);
  ctx.strokeStyle =
    entity.kind === "connector" ? "#777" : PIPE_COLORS[entity.color as string] ?? "#555";
  if (pulse && selected) ctx.strokeStyle = "#ff9933";
  ctx.beginPath();
  if (entity.kind === "connector") {
    const vertex = wallToPix(vp, pose[0], pose[1]);
    ctx.moveTo(a[0], a[1]);
    ctx.lineTo(vertex[0], vertex[1]);
    ctx.lineTo(b[0], b[1]);
  } else {
    ctx.moveTo(a[0], a[1]);
    ctx.lineTo(b[0], b[1]);
  }
  ctx.stroke();
  if (selected) {
    ctx.strokeStyle = "#ff6600";
    ctx.lineWidth = 1.5;
    ctx.strokeRect(Math.min(a[0], b[0]) - 6, Math.min(a[1], b[1]) - 6,
      Math.abs(b[0] - a[0]) + 12, Math.abs(b[1] - a[1]) + 12);
  }
  // blue clamp zones (open ones only; clamped indices are filled elsewhere)
  const zones = (entity.zones as Array<{ index: number; center: [number, number] }>) ?? [];
  const clamped = (entity.clamped as number[]) ?? [];
  for (const zone of zones) {
    if (clamped.includes(zone.index)) continue;
    const [x, y] = wallToPix(vp, zone.center[0], zone.center[1]);
    ctx.fillStyle = "rgba(50, 120, 255, 0.55)";
    ctx.fillRect(x - 5, y - 10, 10, 20);
  }
  // purple glued hints
  const glued = entity.glued as Record<string, boolean>;
  for (const [end, point] of [["a", a], ["b", b]] as const) {
    if (glued?.[end]) {
      ctx.beginPath();
      ctx.arc(point[0], point[1], 5, 0, Math.PI * 2);
      ctx.fillStyle = "#8e44ad";
      ctx.fill();
    }
    if (selection?.entityId === entity.id && selection.end === end) {
      ctx.beginPath();
      ctx.arc(point[0], point[1], 8, 0, Math.PI * 2);
      ctx.strokeStyle = "#ff6600";
      ctx.lineWidth = 2;
      ctx.stroke();
    }
  }
}

function drawSite(
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  mirror: Mirror,
  selection: Selection | null,
): void {
  const top = vp.wallPixHeight;
  ctx.fillStyle = "#dde6d2";
  ctx.fillRect(0, top, vp.width, vp.height - top);
  ctx.strokeStyle = "#49525e";
  ctx.beginPath();
  ctx.moveTo(0, top);
  ctx.lineTo(vp.width, top);
  ctx.stroke();

  for (const entity of Object.keys(mirror.entities).sort().map((id) => mirror.entities[id])) {
    const selected = selection?.entityId === entity.id;
    if (entity.kind === "vehicle") {
      const [x, y] = siteToPix(vp, (entity.pos as number[])[0], (entity.pos as number[])[1]);
      ctx.save();
      if (entity.overhead) ctx.setLineDash([3, 3]);
      ctx.strokeStyle = entity.active_script ? "#b3003c" : "#49525e";
      ctx.strokeRect(x - 14, y - 9, 28, 18);
      ctx.restore();
      ctx.fillStyle = "#49525e";
      ctx.font = "10px sans-serif";
      ctx.fillText(entity.template as string, x - 13, y + 3);
    } else if (entity.kind === "participant") {
      const [x, y] = siteToPix(vp, (entity.pos as number[])[0], (entity.pos as number[])[1]);
      ctx.beginPath();
      ctx.arc(x, y, 8, 0, Math.PI * 2);
      ctx.fillStyle = entity.role === "installer" ? "#1f77b4" : "#e07b39";
      ctx.fill();
      ctx.fillStyle = "#fff";
      ctx.font = "10px sans-serif";
      ctx.fillText(entity.role === "installer" ? "I" : "F", x - 3, y + 3);
    } else if (entity.ground_pos) {
      const pos = entity.ground_pos as [number, number];
      const [x, y] = siteToPix(vp, pos[0], pos[1]);
      if (entity.kind === "pipe") {
        const half = ((entity.length as number) / 2 / vp.wallWidth) * vp.width;
        ctx.strokeStyle = PIPE_COLORS[entity.color as string] ?? "#555";
        ctx.lineWidth = 3 + (entity.diameter as number);
        ctx.beginPath();
        ctx.moveTo(x - half, y);
        ctx.lineTo(x + half, y);
        ctx.stroke();
      } else if (entity.kind === "connector") {
        ctx.strokeStyle = "#777";
        ctx.lineWidth = 4;
        ctx.beginPath();
        ctx.moveTo(x - 5, y + 5);
        ctx.lineTo(x, y);
        ctx.lineTo(x + 5, y + 5);
        ctx.stroke();
      } else if (entity.kind === "clamp") {
        ctx.fillStyle = "#333";
        ctx.fillRect(x - 3, y - 3, 6, 6);
      } else if (entity.kind === "glue") {
        ctx.fillStyle = "#8e44ad";
        ctx.fillRect(x - 4, y - 6, 8, 12);
      }
      if (selected) {
        ctx.strokeStyle = "#ff6600";
        ctx.lineWidth = 1.5;
        ctx.strokeRect(x - 12, y - 12, 24, 24);
      }
    } else if (entity.kind === "drone" || entity.kind === "robot_dog") {
      const [x, y] = siteToPix(vp, (entity.pos as number[])[0], (entity.pos as number[])[1]);
      ctx.fillStyle = "#4a6fa5";
      ctx.font = "12px sans-serif";
      ctx.fillText(entity.kind === "drone" ? "✈" : "🐕", x - 6, y + 4);
    } else if (entity.kind === "lift") {
      const [x, y] = siteToPix(vp, (entity.pos as number[])[0], (entity.pos as number[])[1]);
      ctx.strokeStyle = "#8a6d3b";
      ctx.strokeRect(x - 10, y - 6, 20, 12);
    }
  }
}
