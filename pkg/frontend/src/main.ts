// DOM wiring for the console. All state lives in one ConsoleState store;
// every mutation here is a documented service endpoint call.

import { ApiClient, ApiError } from "./api.js";
import { drawFrame, outcomeBanner, badgeText } from "./render.js";
import { ConsoleState, validateIntentForm } from "./state.js";
import type { SimDefaults } from "./types.js";

const api = new ApiClient("");
const state = new ConsoleState();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const intentForm = el<HTMLFormElement>("intent-form");
const intentInput = el<HTMLInputElement>("intent-text");
const goalXInput = el<HTMLInputElement>("goal-x");
const goalYInput = el<HTMLInputElement>("goal-y");
const sheepInput = el<HTMLInputElement>("sheep-count");
const seedInput = el<HTMLInputElement>("seed");
const formError = el<HTMLElement>("form-error");
const briefPanel = el<HTMLElement>("brief-panel");
const briefNarrative = el<HTMLElement>("brief-narrative");
const briefStructured = el<HTMLElement>("brief-structured");
const briefWarnings = el<HTMLElement>("brief-warnings");
const approveBtn = el<HTMLButtonElement>("approve");
const rejectBtn = el<HTMLButtonElement>("reject");
const runView = el<HTMLElement>("run-view");
const canvas = el<HTMLCanvasElement>("paddock-canvas");
const badge = el<HTMLElement>("behaviour-badge");
const banner = el<HTMLElement>("outcome-banner");
const downloadLink = el<HTMLAnchorElement>("trajectory-download");
const queryForm = el<HTMLFormElement>("query-form");
const queryInput = el<HTMLInputElement>("query-expr");
const queryOut = el<HTMLElement>("query-result");

let defaults: SimDefaults | null = null;

function showPhase(): void {
  briefPanel.hidden = state.brief === null;
  runView.hidden = state.phase !== "running" && state.phase !== "finished";
  intentForm
    .querySelectorAll("input, button")
    .forEach((node) => {
      (node as HTMLInputElement).disabled = state.phase === "running";
    });
}

function renderBrief(): void {
  if (state.brief === null || state.plan === null) return;
  briefNarrative.textContent = state.brief.narrative;
  briefStructured.textContent = [
    `tactic: ${state.plan.tactic}`,
    `behaviours: ${state.plan.behaviours.join(", ")}`,
    `goal: (${state.plan.goal[0]}, ${state.plan.goal[1]})`,
    `flock size: ${state.plan.flock.length}`,
  ].join("\n");
  briefWarnings.textContent = state.brief.warnings.join("\n");
}

function renderRun(): void {
  const frame = state.latestFrame();
  if (frame === null || state.plan === null) return;
  const ctx = canvas.getContext("2d") as unknown as
    import("./render.js").Canvas2D;
  const view = {
    width: canvas.width,
    height: canvas.height,
    paddock: state.plan.paddock,
  };
  const goalRadius =
    defaults !== null ? (defaults.goal_radius as number) : 8;
  drawFrame(ctx, frame, state.frames.slice(0, -1), view,
    state.plan.goal, goalRadius);
  badge.textContent = badgeText(frame.behaviour);
}

function showError(err: unknown): void {
  const message =
    err instanceof ApiError ? err.detail : String(err);
  state.errorBanner = message;
  formError.textContent = message;
}

intentForm.addEventListener("submit", async (evt) => {
  evt.preventDefault();
  if (defaults === null || !state.beginRequest()) return;
  formError.textContent = "";
  const form = {
    intent: intentInput.value,
    goal: [Number(goalXInput.value), Number(goalYInput.value)] as
      [number, number],
    sheep: Number(sheepInput.value),
    seed: Number(seedInput.value || "0"),
  };
  const invalid = validateIntentForm(form, defaults.paddock);
  if (invalid !== null) {
    formError.textContent = invalid;
    state.endRequest();
    return;
  }
  try {
    const res = await api.submitIntent(form);
    state.applyBriefed(res.id, res.plan, res.brief);
    renderBrief();
  } catch (err) {
    showError(err);
  } finally {
    state.endRequest();
    showPhase();
  }
});

approveBtn.addEventListener("click", async () => {
  if (state.missionId === null || !state.beginRequest()) return;
  try {
    const record = await api.approve(state.missionId);
    state.applyStatus(record.plan.status);
    await api.run(state.missionId);
    state.applyStatus("running");
    showPhase();
    const { outcome } = await api.stream(state.missionId, (frame) => {
      state.pushFrame(frame);
      renderRun();
    });
    state.applyStatus(outcome);
    banner.textContent = outcomeBanner(outcome);
    downloadLink.href = api.trajectoryUrl(state.missionId);
    downloadLink.hidden = false;
  } catch (err) {
    showError(err);
  } finally {
    state.endRequest();
    showPhase();
  }
});

rejectBtn.addEventListener("click", async () => {
  if (state.missionId === null || !state.beginRequest()) return;
  try {
    const record = await api.reject(state.missionId);
    state.applyStatus(record.plan.status);
  } catch (err) {
    showError(err);
  } finally {
    state.endRequest();
    showPhase();
  }
});

queryForm.addEventListener("submit", async (evt) => {
  evt.preventDefault();
  try {
    const result = await api.query(queryInput.value);
    queryOut.textContent =
      result.individuals.length > 0
        ? result.individuals.join("\n")
        : "(no individuals)";
  } catch (err) {
    queryOut.textContent =
      err instanceof ApiError ? err.detail : String(err);
  }
});

api
  .config()
  .then((cfg) => {
    defaults = cfg;
    goalXInput.value = String(cfg.goal[0]);
    goalYInput.value = String(cfg.goal[1]);
    showPhase();
  })
  .catch(showError);
