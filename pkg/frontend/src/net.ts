// WebSocket connection: envelope sequencing, validation, batch application,
// automatic resync on gaps, and hash verification against the server.

import { Mirror } from "./mirror.js";
import {
  DeltaBatch,
  Envelope,
  Intent,
  Role,
  Welcome,
  makeMessage,
  validateOutgoing,
} from "./protocol.js";

export interface ConnectionEvents {
  onWelcome?: (welcome: Welcome) => void;
  onBatch?: (batch: DeltaBatch, hashOk: boolean) => void;
  onSignal?: (signal: string, value: string) => void;
  onSessionEnd?: (outcome: string, finalHash: string, report: unknown) => void;
  onServerError?: (code: string, detail: string) => void;
  onClose?: () => void;
}

export class Connection {
  mirror = new Mirror();
  welcome: Welcome | null = null;
  lastServerHash: string | null = null;
  lastHashOk = true;
  private ws: WebSocket | null = null;
  private seq = 0;
  private refCounter = 0;
  private events: ConnectionEvents;

  constructor(events: ConnectionEvents = {}) {
    this.events = events;
  }

  open(addr: string, role: Role): void {
    this.ws = new WebSocket(addr);
    this.ws.onopen = () => this.send("hello", { role });
    this.ws.onmessage = (event) => this.handle(JSON.parse(event.data as string));
    this.ws.onclose = () => this.events.onClose?.();
  }

  send(kind: string, payload: Record<string, unknown> = {}): void {
    if (!this.ws) return;
    const msg = makeMessage(kind, ++this.seq, payload);
    const problem = validateOutgoing(msg, null);
    if (problem) {
      throw new Error(`refusing to send invalid message: ${problem}`);
    }
    this.ws.send(JSON.stringify(msg));
  }

  sendIntent(intent: Intent): string {
    const ref = `web-${++this.refCounter}`;
    this.send("intent", { intent, ref });
    return ref;
  }

  sendChat(text: string): void {
    this.send("chat", { text });
  }

  private handle(msg: Envelope): void {
    switch (msg.kind) {
      case "welcome": {
        const welcome = msg as Welcome;
        this.welcome = welcome;
        this.mirror.loadSnapshot(welcome.snapshot, welcome.batch_seq, welcome.tick);
        this.events.onWelcome?.(welcome);
        break;
      }
      case "delta_batch": {
        const batch = msg as DeltaBatch;
        if (!this.mirror.applyBatch(batch)) {
          this.send("resync");
          return;
        }
        this.lastServerHash = batch.world_hash;
        this.lastHashOk = this.mirror.hash() === batch.world_hash;
        this.events.onBatch?.(batch, this.lastHashOk);
        break;
      }
      case "snapshot":
        this.mirror.loadSnapshot(
          msg.snapshot as Welcome["snapshot"],
          msg.batch_seq as number,
          msg.tick as number,
        );
        break;
      case "signal":
        this.events.onSignal?.(msg.signal as string, msg.value as string);
        break;
      case "session_end":
        this.events.onSessionEnd?.(
          msg.outcome as string,
          msg.final_hash as string,
          msg.report,
        );
        break;
      case "error":
        this.events.onServerError?.(msg.code as string, msg.detail as string);
        break;
    }
  }
}
