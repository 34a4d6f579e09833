/** Pure screen-space math for the top-down map panel: world-to-pixel
 * transforms, the heatmap color scale, and the force-arrow projection.
 */

import type { AttentivenessGrid, Pose } from "./protocol.js";

export interface Viewport {
  /** World bounds [xmin, ymin, xmax, ymax]. */
  bounds: [number, number, number, number];
  widthPx: number;
  heightPx: number;
}

/** World (x, y) to canvas pixels. World y points up; canvas y points down. */
export function worldToScreen(
  view: Viewport, x: number, y: number,
): [number, number] {
  const [xmin, ymin, xmax, ymax] = view.bounds;
  const sx = ((x - xmin) / (xmax - xmin)) * view.widthPx;
  const sy = (1 - (y - ymin) / (ymax - ymin)) * view.heightPx;
  return [sx, sy];
}

export function metersPerPixel(view: Viewport): number {
  const [xmin, , xmax] = view.bounds;
  return (xmax - xmin) / view.widthPx;
}

/** Fixed heatmap scale: byte 0 is fully transparent, byte 255 is a fully
 * saturated warm tone. Deliberately NOT normalized per frame so decay is
 * visible as fading over time. */
export function heatColor(byte: number): [number, number, number, number] {
  const t = byte / 255;
  const r = 255;
  const g = Math.round(200 * (1 - t * 0.75));
  const b = 40;
  const a = Math.round(220 * t);
  return [r, g, b, a];
}

/** Attentiveness value at a grid cell (row-major, index = y * width + x). */
export function gridAt(grid: AttentivenessGrid, ix: number, iy: number): number {
  return grid.values[iy * grid.width + ix];
}

/** World footprint of one downsampled heatmap cell: [x, y, w, h]. */
export function cellRect(
  grid: AttentivenessGrid, ix: number, iy: number,
): [number, number, number, number] {
  const w = grid.resolution * grid.stride[0];
  const h = grid.resolution * grid.stride[1];
  return [grid.origin[0] + ix * w, grid.origin[1] + iy * h, w, h];
}

/** Project the robot-frame force (forward, lateral) into a world-frame unit
 * direction plus magnitude, for drawing the arrow at the robot's pose.
 * A force of (-f, 0) points exactly opposite the robot's heading. */
export function forceArrowWorld(
  pose: Pose, forward: number, lateral: number,
): { dx: number; dy: number; magnitude: number } {
  const magnitude = Math.hypot(forward, lateral);
  if (magnitude === 0) return { dx: 0, dy: 0, magnitude: 0 };
  const c = Math.cos(pose.theta);
  const s = Math.sin(pose.theta);
  const wx = c * forward - s * lateral;
  const wy = s * forward + c * lateral;
  return { dx: wx / magnitude, dy: wy / magnitude, magnitude };
}

/** Arrow length in pixels, proportional to |force| with a fixed legend:
 * fullScaleNewtons maps to fullScalePx. */
export function arrowLengthPx(
  magnitude: number, fullScaleNewtons: number, fullScalePx: number,
): number {
  return Math.min(magnitude / fullScaleNewtons, 1) * fullScalePx;
}
