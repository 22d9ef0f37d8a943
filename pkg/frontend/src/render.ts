// Canvas drawing for the run view. The drawing surface is abstracted to
// the handful of 2D-context members used, so tests drive it with a
// recording stub instead of a real canvas.

import type { Frame } from "./types.js";

export interface Canvas2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  globalAlpha: number;
  lineWidth: number;
  beginPath(): void;
  arc(
    x: number,
    y: number,
    r: number,
    start: number,
    end: number,
  ): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  rect(x: number, y: number, w: number, h: number): void;
  fill(): void;
  stroke(): void;
  clearRect(x: number, y: number, w: number, h: number): void;
}

export interface Viewport {
  width: number; // canvas pixels
  height: number;
  paddock: [number, number]; // world units
}

// World coordinates grow upward; canvas y grows downward.
export function worldToCanvas(
  point: [number, number],
  view: Viewport,
): [number, number] {
  const sx = view.width / view.paddock[0];
  const sy = view.height / view.paddock[1];
  return [point[0] * sx, view.height - point[1] * sy];
}

export function badgeText(behaviour: string): string {
  return behaviour;
}

export function outcomeBanner(outcome: string): string {
  return outcome === "succeeded"
    ? "Mission succeeded — flock delivered to goal"
    : `Mission ${outcome}`;
}

function dot(
  ctx: Canvas2D,
  at: [number, number],
  radius: number,
  fill: string,
): void {
  ctx.fillStyle = fill;
  ctx.beginPath();
  ctx.arc(at[0], at[1], radius, 0, 2 * Math.PI);
  ctx.fill();
}

function cross(ctx: Canvas2D, at: [number, number], arm: number): void {
  ctx.strokeStyle = "#333";
  ctx.beginPath();
  ctx.moveTo(at[0] - arm, at[1]);
  ctx.lineTo(at[0] + arm, at[1]);
  ctx.moveTo(at[0], at[1] - arm);
  ctx.lineTo(at[0], at[1] + arm);
  ctx.stroke();
}

export function drawFrame(
  ctx: Canvas2D,
  frame: Frame,
  trail: Frame[],
  view: Viewport,
  goal: [number, number],
  goalRadius: number,
): void {
  ctx.clearRect(0, 0, view.width, view.height);
  ctx.globalAlpha = 1;

  // paddock border
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.rect(0, 0, view.width, view.height);
  ctx.stroke();

  // goal disc at radius R_G
  const goalPx = worldToCanvas(goal, view);
  ctx.fillStyle = "rgba(80, 170, 80, 0.25)";
  ctx.beginPath();
  ctx.arc(
    goalPx[0],
    goalPx[1],
    (goalRadius * view.width) / view.paddock[0],
    0,
    2 * Math.PI,
  );
  ctx.fill();

  // fading trails of all agents
  for (let i = 0; i < trail.length; i += 1) {
    ctx.globalAlpha = 0.05 + (0.3 * i) / Math.max(trail.length, 1);
    const past = trail[i];
    for (const sheep of past.sheep) {
      dot(ctx, worldToCanvas(sheep, view), 1, "#9bb");
    }
    dot(ctx, worldToCanvas(past.dog, view), 1, "#c99");
  }
  ctx.globalAlpha = 1;

  for (const sheep of frame.sheep) {
    dot(ctx, worldToCanvas(sheep, view), 3, "#346");
  }
  dot(ctx, worldToCanvas(frame.dog, view), 4, "#a33");
  cross(ctx, worldToCanvas(frame.gcm, view), 5);
}
