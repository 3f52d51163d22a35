// Wire protocol types and outgoing-message validation (PROTOCOL.md, v1).

export const PROTOCOL_VERSION = 1;

export type Role = "installer" | "fetcher";

export interface Envelope {
  v: number;
  kind: string;
  seq: number;
  [key: string]: unknown;
}

export interface EntitySnapshot {
  id: string;
  kind: string;
  [key: string]: unknown;
}

export interface Snapshot {
  phase: string;
  entities: Record<string, EntitySnapshot>;
  chat: ChatEntry[];
}

export interface ChatEntry {
  tick: number;
  role: string;
  text: string;
}

export interface Delta {
  op: "upsert" | "remove" | "phase" | "chat" | "action";
  [key: string]: unknown;
}

export interface DeltaBatch extends Envelope {
  batch_seq: number;
  tick: number;
  deltas: Delta[];
  world_hash: string;
}

export interface MenuItem {
  item_id: string;
  label: string;
  action_kind: string;
}

export interface Welcome extends Envelope {
  role: Role;
  session: string;
  tick_rate: number;
  seed: number;
  phase: string;
  tick: number;
  batch_seq: number;
  snapshot: Snapshot;
  view: RoleView;
}

export interface RoleView {
  role: Role;
  task: { name: string; segments: Array<Record<string, unknown>> };
  layout: { name: string; slots: LayoutSlot[] };
  menu: MenuItem[];
  rules: Record<string, number | string | number[]>;
}

export interface LayoutSlot {
  index: number;
  orientation: "horizontal" | "vertical";
  anchor: [number, number];
  connects_to: number[];
  endpoint: boolean;
  boxed: boolean;
}

export interface Intent {
  kind: string;
  [key: string]: unknown;
}

const CLIENT_KINDS = new Set(["hello", "intent", "chat", "ping", "resync"]);

export const INTENT_ROLES: Record<string, Role[]> = {
  move: ["installer", "fetcher"],
  chat: ["installer", "fetcher"],
  menu: ["installer", "fetcher"],
  grab: ["installer"],
  release: ["installer"],
  move_held: ["installer"],
  joystick: ["installer"],
  apply_glue: ["installer"],
  place_clamp: ["installer"],
  connect: ["installer"],
  lift: ["installer"],
  enter_lift: ["installer"],
  exit_lift: ["installer"],
  order_pipes: ["fetcher"],
  robot_dog: ["fetcher"],
  refill: ["fetcher"],
};

export function intentLegalFor(role: Role, kind: string): boolean {
  const roles = INTENT_ROLES[kind];
  return roles !== undefined && roles.includes(role);
}

export function makeMessage(kind: string, seq: number, payload: Record<string, unknown> = {}): Envelope {
  return { v: PROTOCOL_VERSION, kind, seq, ...payload };
}

/** Returns a problem description, or null when the outgoing message is valid. */
export function validateOutgoing(msg: Envelope, lastSeq: number | null): string | null {
  if (msg.v !== PROTOCOL_VERSION) return `bad protocol version ${msg.v}`;
  if (!CLIENT_KINDS.has(msg.kind)) return `not a client message kind: ${msg.kind}`;
  if (!Number.isInteger(msg.seq)) return "seq must be an integer";
  if (lastSeq !== null && msg.seq <= lastSeq) return `seq ${msg.seq} not after ${lastSeq}`;
  if (msg.kind === "hello" && msg.role !== "installer" && msg.role !== "fetcher") {
    return "hello needs a role";
  }
  if (msg.kind === "intent") {
    const intent = msg.intent as Intent | undefined;
    if (!intent || typeof intent.kind !== "string") return "intent needs a kind";
    if (INTENT_ROLES[intent.kind] === undefined) return `unknown intent kind ${intent.kind}`;
  }
  if (msg.kind === "chat" && typeof msg.text !== "string") return "chat needs text";
  return null;
}
