import { describe, expect, it } from "vitest";

import {
  ConsoleState,
  MAX_FRAMES,
  phaseOfStatus,
  validateIntentForm,
} from "../src/state.js";
import type { Frame, MissionBrief, MissionPlan } from "../src/types.js";

function frame(t: number): Frame {
  return {
    t,
    dog: [0, 0],
    sheep: [[1, 1]],
    gcm: [1, 1],
    behaviour: "drive",
    complete: false,
  };
}

function plan(status = "briefed"): MissionPlan {
  return {
    id: "m1",
    intent: "mustering",
    tactic: "mustering",
    behaviours: ["collect", "drive"],
    goal: [40, 40],
    flock: ["sheep1"],
    paddock: [50, 50],
    max_steps: 100,
    seed: 0,
    status,
  };
}

function brief(): MissionBrief {
  return {
    plan_id: "m1",
    narrative: "tactic: mustering",
    inferred: {},
    warnings: [],
  };
}

describe("phase machine", () => {
  it("projects every server status onto a phase", () => {
    expect(phaseOfStatus("draft")).toBe("intent-entry");
    expect(phaseOfStatus("briefed")).toBe("briefed");
    expect(phaseOfStatus("approved")).toBe("briefed");
    expect(phaseOfStatus("rejected")).toBe("intent-entry");
    expect(phaseOfStatus("running")).toBe("running");
    expect(phaseOfStatus("succeeded")).toBe("finished");
    expect(phaseOfStatus("failed")).toBe("finished");
  });

  it("rejects unknown statuses instead of guessing", () => {
    expect(() => phaseOfStatus("paused")).toThrow(/unknown status/);
  });

  it("mirrors injected statuses after a single event", () => {
    const state = new ConsoleState();
    state.applyBriefed("m1", plan(), brief());
    const statuses = [
      "briefed",
      "approved",
      "running",
      "succeeded",
      "failed",
      "rejected",
    ];
    for (const status of statuses) {
      state.applyStatus(status);
      expect(state.phase).toBe(phaseOfStatus(status));
      expect(state.plan?.status).toBe(status);
    }
  });

  it("keeps the rejected brief for comparison", () => {
    const state = new ConsoleState();
    state.applyBriefed("m1", plan(), brief());
    state.applyStatus("rejected");
    expect(state.phase).toBe("intent-entry");
    expect(state.brief).toBeNull();
    expect(state.rejectedBrief?.narrative).toBe("tactic: mustering");
  });

  it("records the outcome on terminal statuses", () => {
    const state = new ConsoleState();
    state.applyBriefed("m1", plan(), brief());
    state.applyStatus("succeeded");
    expect(state.outcome).toBe("succeeded");
  });
});

describe("frame buffer", () => {
  it("keeps at most MAX_FRAMES frames, dropping the oldest", () => {
    const state = new ConsoleState();
    for (let t = 1; t <= MAX_FRAMES + 50; t += 1) state.pushFrame(frame(t));
    expect(state.frames.length).toBe(MAX_FRAMES);
    expect(state.frames[0].t).toBe(51);
    expect(state.latestFrame()?.t).toBe(MAX_FRAMES + 50);
  });

  it("is cleared when a new mission is briefed", () => {
    const state = new ConsoleState();
    state.pushFrame(frame(1));
    state.applyBriefed("m1", plan(), brief());
    expect(state.frames.length).toBe(0);
  });
});

describe("request guard", () => {
  it("suppresses a second request while one is in flight", () => {
    const state = new ConsoleState();
    expect(state.beginRequest()).toBe(true);
    expect(state.beginRequest()).toBe(false); // the double click
    state.endRequest();
    expect(state.beginRequest()).toBe(true);
  });
});

describe("client-side intent validation", () => {
  const paddock: [number, number] = [50, 50];

  it("accepts a goal inside the paddock", () => {
    expect(
      validateIntentForm(
        { intent: "mustering", goal: [40, 40], sheep: 20 },
        paddock,
      ),
    ).toBeNull();
  });

  it("rejects a goal outside the paddock without a request", () => {
    const message = validateIntentForm(
      { intent: "mustering", goal: [60, 40], sheep: 20 },
      paddock,
    );
    expect(message).toMatch(/paddock/);
  });

  it("rejects empty intent and bad flock sizes", () => {
    expect(
      validateIntentForm({ intent: "  ", goal: [1, 1], sheep: 5 }, paddock),
    ).toMatch(/intent/);
    expect(
      validateIntentForm(
        { intent: "mustering", goal: [1, 1], sheep: 0 },
        paddock,
      ),
    ).toMatch(/flock/);
  });
});
