/** Cockpit wiring: session lifecycle, keyboard capture, and the render loop.
 * All simulation truth comes from server frames (see viewmodel.ts).
 */

import { applyKey, InputSampler } from "./input.js";
import { SessionChannel } from "./net.js";
import type { ServerMessage } from "./protocol.js";
import { drawCamera, drawMap, renderObstacleBars } from "./render.js";
import { CockpitViewModel } from "./viewmodel.js";
import type { WorldInfo } from "./viewmodel.js";

const model = new CockpitViewModel();
const input = new InputSampler();
let channel: SessionChannel | null = null;
let worlds: WorldInfo[] = [];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const cameraImg = el<HTMLImageElement>("camera");
const mapCanvas = el<HTMLCanvasElement>("map");
const barsDiv = el<HTMLDivElement>("obstacle-bars");
const hudMethod = el<HTMLSpanElement>("hud-method");
const hudTick = el<HTMLSpanElement>("hud-tick");
const hudForce = el<HTMLSpanElement>("hud-force");
const hudStatus = el<HTMLSpanElement>("hud-status");
const hudMetrics = el<HTMLSpanElement>("hud-metrics");
const worldSelect = el<HTMLSelectElement>("world-select");

function apiBase(): string {
  return window.location.origin;
}

function wsBase(): string {
  return apiBase().replace(/^http/, "ws");
}

async function loadWorlds(): Promise<void> {
  const response = await fetch(`${apiBase()}/worlds`);
  const body = await response.json();
  worlds = body.worlds;
  worldSelect.innerHTML = worlds
    .map((w) => `<option value="${w.name}">${w.name}</option>`)
    .join("");
}

async function createSession(): Promise<void> {
  channel?.close();
  model.sessionId = null;
  model.frame = null;
  const name = worldSelect.value;
  model.world = worlds.find((w) => w.name === name) ?? null;
  const response = await fetch(`${apiBase()}/sessions`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ world: name, method: model.method }),
  });
  if (!response.ok) {
    model.lastError = `session create failed: ${response.status}`;
    return;
  }
  const body = await response.json();
  model.sessionId = body.session;
  channel = new SessionChannel(
    `${wsBase()}/sessions/${body.session}/stream`,
    {
      onMessage: handleMessage,
      onState: (connected) => {
        model.connection = connected ? "connected" : "disconnected";
        setControlsEnabled(connected);
      },
      sampleAxes: (dt) => input.sample(dt),
    },
  );
  channel.connect();
}

function handleMessage(msg: ServerMessage): void {
  if (msg.type === "frame") {
    model.applyFrame(msg);
  } else if (msg.type === "ack") {
    model.applyAck(msg.ack, msg as Record<string, unknown>);
  } else {
    model.lastError = msg.error;
    console.warn("server error:", msg.error);
  }
}

function setControlsEnabled(enabled: boolean): void {
  for (const id of ["btn-start", "btn-pause", "btn-reset", "btn-method"]) {
    el<HTMLButtonElement>(id).disabled = !enabled;
  }
}

function bindControls(): void {
  el<HTMLButtonElement>("btn-connect").onclick = () => void createSession();
  el<HTMLButtonElement>("btn-start").onclick = () =>
    channel?.sendControl({ action: "start" });
  el<HTMLButtonElement>("btn-pause").onclick = () =>
    channel?.sendControl({ action: "pause" });
  el<HTMLButtonElement>("btn-reset").onclick = () =>
    channel?.sendControl({ action: "reset" });
  el<HTMLButtonElement>("btn-method").onclick = () => {
    const next = model.method === "amgpf" ? "gpf" : "amgpf";
    channel?.sendControl({ action: "select_method", method: next });
  };

  document.addEventListener("keydown", (event) => {
    if (applyKey(input.keys, event.code, true)) event.preventDefault();
  });
  document.addEventListener("keyup", (event) => {
    if (applyKey(input.keys, event.code, false)) event.preventDefault();
  });
}

function renderLoop(): void {
  const frame = model.frame;
  hudStatus.textContent = model.connection;
  hudStatus.className = `status-${model.connection}`;
  hudMethod.textContent = model.method.toUpperCase();
  if (frame !== null && model.world !== null) {
    drawCamera(cameraImg, frame);
    drawMap(mapCanvas, frame, model.world);
    renderObstacleBars(barsDiv, frame);
    hudTick.textContent = `tick ${frame.tick}`;
    hudForce.textContent =
      `|F| ${frame.force.norm.toFixed(2)} N (scale: 10 N = full arrow)`;
    const m = frame.metrics;
    hudMetrics.textContent =
      `t=${Number(m.completion_time_s ?? 0).toFixed(1)}s ` +
      `dist=${Number(m.total_displacement_m ?? 0).toFixed(1)}m ` +
      `collisions=${m.collisions ?? 0}`;
  }
  requestAnimationFrame(renderLoop);
}

async function init(): Promise<void> {
  bindControls();
  setControlsEnabled(false);
  await loadWorlds();
  requestAnimationFrame(renderLoop);
}

void init();
