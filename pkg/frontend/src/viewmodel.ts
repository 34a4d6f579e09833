/** The cockpit's only client-side state. Every displayed quantity originates
 * from a server frame; the model never extrapolates simulation state.
 */

import type { FrameMessage } from "./protocol.js";

export type ConnectionState =
  | "disconnected"
  | "connecting"
  | "connected";

export interface WorldInfo {
  name: string;
  hash: string;
  bounds: [number, number, number, number];
  obstacles: [number, number, number, number][];
}

export class CockpitViewModel {
  connection: ConnectionState = "disconnected";
  frame: FrameMessage | null = null;
  method = "amgpf";
  world: WorldInfo | null = null;
  sessionId: string | null = null;
  running = false;
  lastError: string | null = null;
  framesDropped = 0;

  /** Accept a validated frame. Rejects regressions in tick number (except
   * the restart after a reset) so the rendered tick is monotone. */
  applyFrame(frame: FrameMessage): boolean {
    if (this.frame !== null && frame.tick < this.frame.tick && frame.tick !== 0) {
      this.framesDropped += 1;
      return false;
    }
    this.frame = frame;
    this.method = frame.method;
    return true;
  }

  applyAck(ack: string, payload: Record<string, unknown>): void {
    if (ack === "select_method" && typeof payload.method === "string") {
      this.method = payload.method;
    } else if (ack === "start") {
      this.running = true;
    } else if (ack === "pause") {
      this.running = false;
    } else if (ack === "reset") {
      this.frame = null;
      this.running = false;
    }
  }

  get tick(): number {
    return this.frame?.tick ?? 0;
  }

  get elapsedSeconds(): number {
    const value = this.frame?.metrics?.completion_time_s;
    return typeof value === "number" ? value : 0;
  }
}
