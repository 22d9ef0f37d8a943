// Single console store mirroring the server's mission record. The phase
// machine never invents states: it is a projection of the server status,
// re-derived on every poll or stream event.

import type { Frame, MissionBrief, MissionPlan } from "./types.js";

export type Phase = "intent-entry" | "briefed" | "running" | "finished";

export const MAX_FRAMES = 600;

const PHASE_OF_STATUS: Record<string, Phase> = {
  draft: "intent-entry",
  briefed: "briefed",
  approved: "briefed",
  rejected: "intent-entry",
  running: "running",
  succeeded: "finished",
  failed: "finished",
};

export function phaseOfStatus(status: string): Phase {
  const phase = PHASE_OF_STATUS[status];
  if (phase === undefined) throw new Error(`unknown status: ${status}`);
  return phase;
}

export interface QueryPanel {
  expr: string;
  individuals: string[];
  error: string | null;
}

export class ConsoleState {
  phase: Phase = "intent-entry";
  missionId: string | null = null;
  plan: MissionPlan | null = null;
  brief: MissionBrief | null = null;
  rejectedBrief: MissionBrief | null = null; // kept for comparison
  outcome: string | null = null;
  errorBanner: string | null = null;
  queryPanel: QueryPanel | null = null;
  readonly frames: Frame[] = [];
  private inFlight = false;

  // Serializes server mutations: at most one POST outstanding, so a
  // double-clicked approve issues a single request.
  beginRequest(): boolean {
    if (this.inFlight) return false;
    this.inFlight = true;
    return true;
  }

  endRequest(): void {
    this.inFlight = false;
  }

  applyBriefed(id: string, plan: MissionPlan, brief: MissionBrief): void {
    this.missionId = id;
    this.plan = plan;
    this.brief = brief;
    this.outcome = null;
    this.errorBanner = null;
    this.frames.length = 0;
    this.applyStatus(plan.status);
  }

  applyStatus(status: string): void {
    this.phase = phaseOfStatus(status);
    if (this.plan !== null) this.plan.status = status;
    if (status === "rejected") {
      this.rejectedBrief = this.brief;
      this.brief = null;
    }
    if (status === "succeeded" || status === "failed") {
      this.outcome = status;
    }
  }

  pushFrame(frame: Frame): void {
    this.frames.push(frame);
    if (this.frames.length > MAX_FRAMES) {
      this.frames.splice(0, this.frames.length - MAX_FRAMES);
    }
  }

  latestFrame(): Frame | null {
    return this.frames.length > 0
      ? this.frames[this.frames.length - 1]
      : null;
  }
}

// Client-side validation of the intent form against the fetched paddock
// bounds; a failure here means no request is sent at all.
export function validateIntentForm(
  form: { intent: string; goal: [number, number]; sheep: number },
  paddock: [number, number],
): string | null {
  if (form.intent.trim().length === 0) return "intent must not be empty";
  const [x, y] = form.goal;
  if (!Number.isFinite(x) || !Number.isFinite(y)) {
    return "goal coordinates must be numbers";
  }
  if (x < 0 || y < 0 || x > paddock[0] || y > paddock[1]) {
    return `goal must lie inside the ${paddock[0]}x${paddock[1]} paddock`;
  }
  if (!Number.isInteger(form.sheep) || form.sheep < 1) {
    return "flock size must be a positive integer";
  }
  return null;
}
