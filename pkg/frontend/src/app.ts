// Browser client bootstrap: join form, canvas, panels, and event wiring.

import { contextActions, Selection } from "./actions.js";
import { CueBoard } from "./cues.js";
import {
  dragToIntent,
  keyToIntent,
  menuClickToIntent,
  orderFormToIntent,
  releaseToIntent,
  robotDogFormToIntent,
} from "./input.js";
import { Connection } from "./net.js";
import { buildInstructionRows, buildMenu, buildOverlay } from "./panels.js";
import type { Role, RoleView } from "./protocol.js";
import { drawScene, hitTestSite, hitTestWall, makeViewport, pixToSite, pixToWall, Viewport } from "./render.js";

const $ = (id: string) => document.getElementById(id)!;

let conn: Connection;
let role: Role;
let view: RoleView | null = null;
let vp: Viewport;
let selection: Selection | null = null;
let dragging = false;
let dragHorizontal = true;
const cues = new CueBoard();

function toast(text: string): void {
  const el = $("toast");
  el.textContent = text;
  el.classList.add("visible");
  setTimeout(() => el.classList.remove("visible"), 2500);
}

function sendIntent(intent: { kind: string; [k: string]: unknown }): void {
  conn.sendIntent(intent);
}

function handleGesture(result: ReturnType<typeof keyToIntent>): void {
  if (!result) return;
  if ("blocked" in result) {
    toast(result.blocked);
    return;
  }
  sendIntent(result.intent);
}

function join(chosen: Role): void {
  role = chosen;
  conn = new Connection({
    onWelcome: (welcome) => {
      view = welcome.view;
      $("join").style.display = "none";
      $("main").style.display = "grid";
      renderPanels();
      requestAnimationFrame(frame);
    },
    onBatch: () => {
      renderChat();
      renderActions();
    },
    onSignal: (signal, value) => {
      cues.trigger(signal, value, performance.now());
    },
    onSessionEnd: (outcome, finalHash) => {
      toast(`session ${outcome} (final hash ${finalHash})`);
    },
    onServerError: (code, detail) => toast(`${code}: ${detail}`),
    onClose: () => toast("connection closed"),
  });
  const addr = (($("addr") as HTMLInputElement).value || location.host).trim();
  conn.open(`ws://${addr}`, role);
}

// -- panels ---------------------------------------------------------------------

function renderPanels(): void {
  if (!view) return;
  const menuBox = $("menu");
  menuBox.innerHTML = "";
  for (const button of buildMenu(view)) {
    const el = document.createElement("button");
    el.textContent = button.label;
    el.dataset.item = button.itemId;
    el.onclick = () => {
      if (button.itemId === "ai_drone") return openOrderDialog();
      if (button.itemId === "robot_dog") return openRobotDogDialog();
      handleGesture(menuClickToIntent(role, button.itemId, button.actionKind));
    };
    menuBox.appendChild(el);
  }
  const sheet = $("instructions");
  sheet.innerHTML = `<h3>Instruction sheet (${role})</h3>`;
  for (const row of buildInstructionRows(view)) {
    const div = document.createElement("div");
    div.className = "segment";
    div.textContent =
      `seg ${row.index}: ` + row.cells.map((c) => `${c.field}=${c.value}`).join("  ");
    sheet.appendChild(div);
  }
}

function renderChat(): void {
  const log = $("chatlog");
  const entries = conn.mirror.chat;
  log.innerHTML = entries
    .slice(-80)
    .map((c) => `<div><b>${c.role}</b>: ${escapeHtml(c.text)}</div>`)
    .join("");
  log.scrollTop = log.scrollHeight;
}

function renderActions(): void {
  const box = $("actions");
  box.innerHTML = "";
  for (const action of contextActions(role, conn.mirror, selection)) {
    const el = document.createElement("button");
    el.textContent = action.label;
    el.onclick = () => {
      let intent = action.intent;
      if (intent.kind === "robot_dog" && Array.isArray(intent.cuts) && intent.cuts.length) {
        const length = prompt("cut length?");
        if (!length) return;
        intent = {
          ...intent,
          cuts: [{ ...(intent.cuts[0] as object), length: parseFloat(length) }],
        };
      }
      sendIntent(intent);
    };
    box.appendChild(el);
  }
}

function escapeHtml(text: string): string {
  return text.replace(/[&<>"]/g, (ch) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" }[ch]!));
}

// -- dialogs ---------------------------------------------------------------------

function openOrderDialog(): void {
  const dialog = $("order-dialog") as HTMLDialogElement;
  dialog.showModal();
}

function confirmOrder(): void {
  const item = {
    type: ($("order-type") as HTMLSelectElement).value,
    color: ($("order-color") as HTMLSelectElement).value,
    size: parseInt(($("order-size") as HTMLSelectElement).value, 10),
    length: parseFloat(($("order-length") as HTMLInputElement).value),
    qty: parseInt(($("order-qty") as HTMLInputElement).value, 10) || 1,
  };
  handleGesture(orderFormToIntent(role, [item]));
  ($("order-dialog") as HTMLDialogElement).close();
}

function openRobotDogDialog(): void {
  ($("dog-dialog") as HTMLDialogElement).showModal();
}

function confirmRobotDog(): void {
  const size = parseInt(($("dog-size") as HTMLSelectElement).value, 10);
  const qty = parseInt(($("dog-qty") as HTMLInputElement).value, 10) || 1;
  handleGesture(robotDogFormToIntent(role, { cuts: [], connectors: [{ size, qty }] }));
  ($("dog-dialog") as HTMLDialogElement).close();
}

// -- canvas ---------------------------------------------------------------------

function canvasPoint(event: MouseEvent): [number, number] {
  const canvas = $("scene") as HTMLCanvasElement;
  const rect = canvas.getBoundingClientRect();
  return [event.clientX - rect.left, event.clientY - rect.top];
}

function onCanvasDown(event: MouseEvent): void {
  const [x, y] = canvasPoint(event);
  const actor = conn.mirror.entities[role];
  if (actor?.held) {
    dragging = true;
    onCanvasMove(event);
    return;
  }
  const wall = pixToWall(vp, x, y);
  const site = pixToSite(vp, x, y);
  selection = wall ? hitTestWall(conn.mirror, wall) : site ? hitTestSite(conn.mirror, site) : null;
  if (!selection && site && role === "fetcher") {
    sendIntent({ kind: "move", pos: site });
  }
  if (!selection && site && role === "installer" && !(actor?.in_lift)) {
    sendIntent({ kind: "move", pos: site });
  }
  renderActions();
}

let lastDragSent = 0;

function onCanvasMove(event: MouseEvent): void {
  if (!dragging) return;
  const now = performance.now();
  if (now - lastDragSent < 90) return;
  lastDragSent = now;
  const [x, y] = canvasPoint(event);
  const wall = pixToWall(vp, x, y);
  const point = wall ?? pixToSite(vp, x, y);
  if (!point) return;
  handleGesture(
    dragToIntent(role, { u: point[0], v: point[1], onWall: wall !== null, horizontal: dragHorizontal }),
  );
}

function onCanvasUp(event: MouseEvent): void {
  if (!dragging) return;
  dragging = false;
  const [x, y] = canvasPoint(event);
  const wall = pixToWall(vp, x, y);
  const point = wall ?? pixToSite(vp, x, y);
  if (!point) return;
  handleGesture(
    releaseToIntent(role, { u: point[0], v: point[1], onWall: wall !== null, horizontal: dragHorizontal }),
  );
}

function onKey(event: KeyboardEvent): void {
  if ((event.target as HTMLElement).tagName === "INPUT") return;
  if (event.key === "h") dragHorizontal = true;
  if (event.key === "v") dragHorizontal = false;
  if (event.key === "o" && role === "installer") {
    toast("ordering is not available to the installer");
    return;
  }
  handleGesture(keyToIntent(role, event.key));
}

// -- frame loop ---------------------------------------------------------------------

let lastOverlay = 0;

function frame(): void {
  const canvas = $("scene") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  if (view) {
    vp = makeViewport(canvas.width, canvas.height, view.rules);
    const now = performance.now();
    drawScene(ctx, vp, conn.mirror, view, selection, cues.active(now), now);
    const warning = cues.warningText(now);
    const banner = $("warning");
    banner.textContent = warning ?? "";
    banner.style.display = warning ? "block" : "none";
    if (now - lastOverlay > 1000) {
      lastOverlay = now;
      const overlay = buildOverlay(conn.mirror, conn.lastServerHash);
      $("overlay").textContent =
        `phase ${overlay.phase} | tick ${overlay.tick} | batch ${overlay.batchSeq} | ` +
        `mirror ${overlay.mirrorHash} | server ${overlay.serverHash ?? "-"} | ` +
        (overlay.converged ? "CONVERGED" : "DIVERGED") + ` | gaps ${overlay.seqGaps}`;
      $("overlay").className = overlay.converged ? "ok" : "bad";
    }
  }
  requestAnimationFrame(frame);
}

// -- wiring ---------------------------------------------------------------------------

window.addEventListener("DOMContentLoaded", () => {
  $("join-installer").onclick = () => join("installer");
  $("join-fetcher").onclick = () => join("fetcher");
  $("chat-send").onclick = () => {
    const box = $("chat-text") as HTMLInputElement;
    if (box.value) {
      conn.sendChat(box.value);
      box.value = "";
    }
  };
  ($("chat-text") as HTMLInputElement).addEventListener("keydown", (e) => {
    if (e.key === "Enter") $("chat-send").click();
  });
  $("order-confirm").onclick = confirmOrder;
  $("dog-confirm").onclick = confirmRobotDog;
  const canvas = $("scene") as HTMLCanvasElement;
  canvas.addEventListener("mousedown", onCanvasDown);
  canvas.addEventListener("mousemove", onCanvasMove);
  canvas.addEventListener("mouseup", onCanvasUp);
  window.addEventListener("keydown", onKey);
});
