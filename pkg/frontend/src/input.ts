/** Keyboard steering: held keys ramp the two axes up and released keys ramp
 * them back down, emulating analog stick deflection. Pure logic, no DOM.
 */

export interface RampConfig {
  /** Seconds from 0 to full deflection while a key is held. */
  attack: number;
  /** Seconds from full deflection back to 0 after release. */
  release: number;
}

export const DEFAULT_RAMP: RampConfig = { attack: 0.25, release: 0.15 };

/** One signed axis driven toward a target in [-1, 1]. */
export class AxisRamp {
  value = 0;

  constructor(private config: RampConfig = DEFAULT_RAMP) {}

  step(target: number, dt: number): number {
    const toward = Math.abs(target) > Math.abs(this.value) ||
      target * this.value < 0;
    const seconds = toward ? this.config.attack : this.config.release;
    const rate = seconds > 0 ? dt / seconds : Infinity;
    const delta = target - this.value;
    if (Math.abs(delta) <= rate) {
      this.value = target;
    } else {
      this.value += Math.sign(delta) * rate;
    }
    return this.value;
  }
}

export interface KeyState {
  forward: boolean;  // W / ArrowUp
  back: boolean;     // S / ArrowDown
  left: boolean;     // A / ArrowLeft
  right: boolean;    // D / ArrowRight
}

export function emptyKeys(): KeyState {
  return { forward: false, back: false, left: false, right: false };
}

const KEY_MAP: Record<string, keyof KeyState> = {
  KeyW: "forward", ArrowUp: "forward",
  KeyS: "back", ArrowDown: "back",
  KeyA: "left", ArrowLeft: "left",
  KeyD: "right", ArrowRight: "right",
};

/** Apply a keydown/keyup for the given KeyboardEvent.code.
 * Returns true if the key is one of ours (caller should preventDefault). */
export function applyKey(keys: KeyState, code: string, down: boolean): boolean {
  const name = KEY_MAP[code];
  if (name === undefined) return false;
  keys[name] = down;
  return true;
}

/** Target deflections from the key state: opposing keys cancel.
 * Positive angular turns left (counter-clockwise), matching the robot frame. */
export function keyTargets(keys: KeyState): [number, number] {
  const forward = (keys.forward ? 1 : 0) - (keys.back ? 1 : 0);
  const angular = (keys.left ? 1 : 0) - (keys.right ? 1 : 0);
  return [forward, angular];
}

/** Two ramped axes sampled at the client command rate. */
export class InputSampler {
  readonly keys = emptyKeys();
  private forwardRamp: AxisRamp;
  private angularRamp: AxisRamp;

  constructor(config: RampConfig = DEFAULT_RAMP) {
    this.forwardRamp = new AxisRamp(config);
    this.angularRamp = new AxisRamp(config);
  }

  sample(dt: number): [number, number] {
    const [f, a] = keyTargets(this.keys);
    return [this.forwardRamp.step(f, dt), this.angularRamp.step(a, dt)];
  }
}
