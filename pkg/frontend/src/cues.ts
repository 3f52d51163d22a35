// Visual stand-ins for the haptic cues: a long pulse for snapping, a short
// click flash for a seated clamp, and a banner for warnings.

export interface Cue {
  kind: string; // "long" | "short" | "warning"
  text?: string;
  until: number;
}

const DURATIONS_MS: Record<string, number> = { long: 900, short: 250, warning: 4000 };

export class CueBoard {
  cues: Cue[] = [];

  trigger(signal: string, value: string, now: number): Cue {
    const kind = signal === "warning" ? "warning" : value; // haptic value is long/short
    const cue: Cue = {
      kind,
      text: signal === "warning" ? value : undefined,
      until: now + (DURATIONS_MS[kind] ?? 500),
    };
    this.cues.push(cue);
    return cue;
  }

  active(now: number): Cue[] {
    this.cues = this.cues.filter((c) => c.until > now);
    return this.cues;
  }

  warningText(now: number): string | null {
    const warnings = this.active(now).filter((c) => c.kind === "warning");
    return warnings.length ? warnings[warnings.length - 1].text ?? null : null;
  }
}
