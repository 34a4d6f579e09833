/** Canvas drawing for the two panels: first-person camera view and the
 * top-down map (heatmap + obstacles + robot pose + force arrow).
 */

import {
  arrowLengthPx, cellRect, forceArrowWorld, gridAt, heatColor, metersPerPixel,
  worldToScreen,
} from "./geometry.js";
import type { Viewport } from "./geometry.js";
import type { FrameMessage } from "./protocol.js";
import type { WorldInfo } from "./viewmodel.js";

const FORCE_FULL_SCALE_N = 10;
const FORCE_FULL_SCALE_PX = 70;
const ROBOT_RADIUS_M = 0.3;

export function drawCamera(img: HTMLImageElement, frame: FrameMessage): void {
  img.src = `data:image/png;base64,${frame.rgb_png}`;
}

export function drawMap(
  canvas: HTMLCanvasElement, frame: FrameMessage, world: WorldInfo,
): void {
  const ctx = canvas.getContext("2d");
  if (ctx === null) return;
  const view: Viewport = {
    bounds: world.bounds,
    widthPx: canvas.width,
    heightPx: canvas.height,
  };

  ctx.fillStyle = "#141a20";
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  drawHeatmap(ctx, view, frame);
  drawObstacles(ctx, view, world, frame);
  drawRobot(ctx, view, frame);
  drawForceArrow(ctx, view, frame);
}

function fillWorldRect(
  ctx: CanvasRenderingContext2D, view: Viewport,
  x: number, y: number, w: number, h: number,
): void {
  const [sx, sy] = worldToScreen(view, x, y + h);
  const mpp = metersPerPixel(view);
  ctx.fillRect(sx, sy, w / mpp, h / mpp);
}

function drawHeatmap(
  ctx: CanvasRenderingContext2D, view: Viewport, frame: FrameMessage,
): void {
  const grid = frame.attentiveness;
  for (let iy = 0; iy < grid.height; iy++) {
    for (let ix = 0; ix < grid.width; ix++) {
      const byte = gridAt(grid, ix, iy);
      if (byte === 0) continue;
      const [r, g, b, a] = heatColor(byte);
      ctx.fillStyle = `rgba(${r},${g},${b},${a / 255})`;
      const [x, y, w, h] = cellRect(grid, ix, iy);
      fillWorldRect(ctx, view, x, y, w, h);
    }
  }
}

function drawObstacles(
  ctx: CanvasRenderingContext2D, view: Viewport, world: WorldInfo,
  frame: FrameMessage,
): void {
  const mpp = metersPerPixel(view);
  world.obstacles.forEach((box, index) => {
    const [xmin, ymin, xmax, ymax] = box;
    const [sx, sy] = worldToScreen(view, xmin, ymax);
    const info = frame.obstacles.find((o) => o.id === index);
    // Outline brightness tracks the live modulated repulsion contribution.
    const glow = info ? Math.min(info.modulated, 1) : 0;
    ctx.strokeStyle = `rgba(${120 + 135 * glow}, ${160 - 100 * glow}, 200, 1)`;
    ctx.lineWidth = 1.5 + 2 * glow;
    ctx.strokeRect(sx, sy, (xmax - xmin) / mpp, (ymax - ymin) / mpp);
  });
}

function drawRobot(
  ctx: CanvasRenderingContext2D, view: Viewport, frame: FrameMessage,
): void {
  const { x, y, theta } = frame.pose;
  const mpp = metersPerPixel(view);
  const r = ROBOT_RADIUS_M / mpp;
  const [sx, sy] = worldToScreen(view, x, y);
  // Screen y is flipped, so world heading theta becomes -theta on canvas.
  const nose: [number, number] = [
    sx + r * 1.6 * Math.cos(-theta), sy + r * 1.6 * Math.sin(-theta)];
  const left: [number, number] = [
    sx + r * Math.cos(-theta + 2.5), sy + r * Math.sin(-theta + 2.5)];
  const right: [number, number] = [
    sx + r * Math.cos(-theta - 2.5), sy + r * Math.sin(-theta - 2.5)];
  ctx.fillStyle = frame.colliding ? "#ff5252" : "#5ad1ff";
  ctx.beginPath();
  ctx.moveTo(nose[0], nose[1]);
  ctx.lineTo(left[0], left[1]);
  ctx.lineTo(right[0], right[1]);
  ctx.closePath();
  ctx.fill();
}

function drawForceArrow(
  ctx: CanvasRenderingContext2D, view: Viewport, frame: FrameMessage,
): void {
  const arrow = forceArrowWorld(
    frame.pose, frame.force.forward, frame.force.lateral);
  if (arrow.magnitude === 0) return;
  const length = arrowLengthPx(
    arrow.magnitude, FORCE_FULL_SCALE_N, FORCE_FULL_SCALE_PX);
  const [sx, sy] = worldToScreen(view, frame.pose.x, frame.pose.y);
  const ex = sx + arrow.dx * length;
  const ey = sy - arrow.dy * length;  // world y up, canvas y down
  ctx.strokeStyle = "#ffd54f";
  ctx.lineWidth = 3;
  ctx.beginPath();
  ctx.moveTo(sx, sy);
  ctx.lineTo(ex, ey);
  ctx.stroke();
  const tip = Math.atan2(ey - sy, ex - sx);
  ctx.beginPath();
  ctx.moveTo(ex, ey);
  ctx.lineTo(ex - 9 * Math.cos(tip - 0.4), ey - 9 * Math.sin(tip - 0.4));
  ctx.lineTo(ex - 9 * Math.cos(tip + 0.4), ey - 9 * Math.sin(tip + 0.4));
  ctx.closePath();
  ctx.fillStyle = "#ffd54f";
  ctx.fill();
}

/** Per-obstacle force contribution bars plus the raw-vs-modulated pair. */
export function renderObstacleBars(
  container: HTMLElement, frame: FrameMessage,
): void {
  const rows = frame.obstacles
    .slice()
    .sort((a, b) => a.id - b.id)
    .map((o) => {
      const raw = Math.min(o.repulsion, 1);
      const mod = Math.min(Math.abs(o.modulated), 1);
      return `<div class="bar-row">
        <span class="bar-label">#${o.id} d=${o.distance.toFixed(2)}m ` +
        `m=${o.attentiveness.toFixed(2)}</span>
        <span class="bar raw"><i style="width:${(raw * 100).toFixed(1)}%"></i></span>
        <span class="bar mod"><i style="width:${(mod * 100).toFixed(1)}%"></i></span>
      </div>`;
    });
  container.innerHTML = rows.length > 0
    ? rows.join("")
    : '<div class="bar-empty">no obstacles in range</div>';
}
