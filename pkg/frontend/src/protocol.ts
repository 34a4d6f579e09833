/** Wire types and message validation for the teleop session stream.
 *
 * Everything here is DOM-free so it can be unit tested headlessly;
 * base64 decoding is implemented directly rather than via atob().
 */

export const PROTO_VERSION = 1;

export interface Pose {
  x: number;
  y: number;
  theta: number;
  v: number;
  omega: number;
}

export interface ForceInfo {
  forward: number;
  lateral: number;
  norm: number;
  magnitude: number;
}

export interface ObstacleInfo {
  id: number;
  distance: number;
  closing_speed: number;
  repulsion: number;
  attentiveness: number;
  modulated: number;
  weight: number;
}

export interface AttentivenessGrid {
  width: number;        // cells along world x
  height: number;       // cells along world y
  stride: [number, number];
  resolution: number;   // meters per (downsampled) source cell
  origin: [number, number];
  /** Row-major bytes, index = y * width + x, 0..255 maps to 0..1. */
  values: Uint8Array;
}

export interface FrameMessage {
  type: "frame";
  proto_version: number;
  session: string;
  tick: number;
  seq: number;
  method: string;
  rgb_png: string;      // base64 PNG, fed to an <img> data URL
  pose: Pose;
  force: ForceInfo;
  obstacles: ObstacleInfo[];
  attentiveness: AttentivenessGrid;
  colliding: boolean;
  metrics: Record<string, number | boolean>;
}

export interface AckMessage {
  type: "ack";
  ack: string;
  [key: string]: unknown;
}

export interface ErrorMessage {
  type: "error" | undefined;
  error: string;
}

export type ServerMessage = FrameMessage | AckMessage | ErrorMessage;

const B64 =
  "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
const B64_LOOKUP = new Int8Array(128).fill(-1);
for (let i = 0; i < B64.length; i++) B64_LOOKUP[B64.charCodeAt(i)] = i;

export function decodeBase64(text: string): Uint8Array {
  const clean = text.replace(/=+$/, "");
  const out = new Uint8Array(Math.floor((clean.length * 3) / 4));
  let buffer = 0;
  let bits = 0;
  let n = 0;
  for (let i = 0; i < clean.length; i++) {
    const v = B64_LOOKUP[clean.charCodeAt(i)];
    if (v < 0) throw new Error(`invalid base64 character at ${i}`);
    buffer = (buffer << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out[n++] = (buffer >> bits) & 0xff;
    }
  }
  return out.subarray(0, n);
}

function isNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

/** Parse and validate a raw server message. Throws on malformed frames so
 * the caller can skip them without touching UI state. */
export function parseServerMessage(raw: string): ServerMessage {
  const msg = JSON.parse(raw);
  if (msg === null || typeof msg !== "object") {
    throw new Error("message is not an object");
  }
  if (typeof msg.error === "string") {
    return { type: "error", error: msg.error };
  }
  if (msg.type === "ack" || typeof msg.ack === "string") {
    return { ...msg, type: "ack", ack: String(msg.ack) };
  }
  if (msg.type !== "frame") {
    throw new Error(`unknown message type: ${String(msg.type)}`);
  }
  if (msg.proto_version !== PROTO_VERSION) {
    throw new Error(`protocol version mismatch: ${msg.proto_version}`);
  }
  const pose = msg.pose;
  const force = msg.force;
  const attn = msg.attentiveness;
  if (
    !isNumber(msg.tick) || !isNumber(msg.seq) ||
    typeof msg.rgb_png !== "string" ||
    !pose || !isNumber(pose.x) || !isNumber(pose.y) || !isNumber(pose.theta) ||
    !force || !isNumber(force.forward) || !isNumber(force.lateral) ||
    !attn || !isNumber(attn.width) || !isNumber(attn.height) ||
    typeof attn.data !== "string"
  ) {
    throw new Error("malformed frame message");
  }
  const values = decodeBase64(attn.data);
  if (values.length !== attn.width * attn.height) {
    throw new Error(
      `attentiveness payload is ${values.length} bytes, ` +
      `expected ${attn.width * attn.height}`,
    );
  }
  const grid: AttentivenessGrid = {
    width: attn.width,
    height: attn.height,
    stride: attn.stride ?? [1, 1],
    resolution: attn.resolution ?? 0.25,
    origin: attn.origin ?? [0, 0],
    values,
  };
  return { ...msg, type: "frame", attentiveness: grid } as FrameMessage;
}

export function commandMessage(forward: number, angular: number): string {
  return JSON.stringify({
    type: "command",
    axes: [forward, angular],
    client_ts: Date.now() / 1000,
  });
}

export type ControlAction =
  | { action: "start" }
  | { action: "pause" }
  | { action: "reset" }
  | { action: "step"; ticks: number }
  | { action: "select_method"; method: "amgpf" | "gpf" };

export function controlMessage(control: ControlAction): string {
  return JSON.stringify({ type: "control", ...control });
}
