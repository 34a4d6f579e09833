/** WebSocket session channel with exponential-backoff reconnect and a
 * fixed-rate command loop independent of the render rate.
 */

import { commandMessage, controlMessage, parseServerMessage } from "./protocol.js";
import type { ControlAction, ServerMessage } from "./protocol.js";

const COMMAND_RATE_HZ = 20;
const BACKOFF_START_MS = 250;
const BACKOFF_MAX_MS = 8000;

export interface ChannelCallbacks {
  onMessage: (msg: ServerMessage) => void;
  onState: (connected: boolean) => void;
  /** Sampled at the command rate; return null to skip sending. */
  sampleAxes: (dt: number) => [number, number] | null;
}

export class SessionChannel {
  private ws: WebSocket | null = null;
  private backoffMs = BACKOFF_START_MS;
  private closed = false;
  private commandTimer: number | null = null;

  constructor(
    private url: string,
    private callbacks: ChannelCallbacks,
  ) {}

  connect(): void {
    this.closed = false;
    this.open();
  }

  private open(): void {
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.backoffMs = BACKOFF_START_MS;
      this.callbacks.onState(true);
      this.startCommandLoop();
    };
    ws.onmessage = (event) => {
      try {
        this.callbacks.onMessage(parseServerMessage(event.data));
      } catch (err) {
        console.warn("skipping malformed server message:", err);
      }
    };
    ws.onclose = () => {
      this.stopCommandLoop();
      this.callbacks.onState(false);
      if (!this.closed) {
        setTimeout(() => this.open(), this.backoffMs);
        this.backoffMs = Math.min(this.backoffMs * 2, BACKOFF_MAX_MS);
      }
    };
    ws.onerror = () => ws.close();
  }

  private startCommandLoop(): void {
    const dt = 1 / COMMAND_RATE_HZ;
    this.commandTimer = setInterval(() => {
      const axes = this.callbacks.sampleAxes(dt);
      if (axes !== null && this.ws?.readyState === WebSocket.OPEN) {
        this.ws.send(commandMessage(axes[0], axes[1]));
      }
    }, 1000 * dt) as unknown as number;
  }

  private stopCommandLoop(): void {
    if (this.commandTimer !== null) {
      clearInterval(this.commandTimer);
      this.commandTimer = null;
    }
  }

  get connected(): boolean {
    return this.ws?.readyState === WebSocket.OPEN;
  }

  sendControl(control: ControlAction): void {
    if (this.ws?.readyState === WebSocket.OPEN) {
      this.ws.send(controlMessage(control));
    }
  }

  close(): void {
    this.closed = true;
    this.stopCommandLoop();
    this.ws?.close();
  }
}
