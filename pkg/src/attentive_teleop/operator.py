"""Deterministic scripted operator: pure-pursuit waypoint driving with
admittance coupling to the rendered feedback force. Stands in for a human
hand on the haptic device."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .haptics import FeedbackForce
from .world import RobotState, wrap_angle


@dataclass(frozen=True)
class OperatorModel:
    k_heading: float = 2.0        # P gain on heading error [axis/rad]
    k_approach: float = 2.0       # forward-axis taper near the waypoint [1/m]
    cruise_speed: float = 0.7     # m/s
    k_admittance: float = 0.05    # axis deflection yielded per newton
    reaction_latency: int = 2     # ticks of delay on the force input
    attention_mode: str = "camera-follows-heading"

    def __post_init__(self):
        if self.k_admittance < 0:
            raise ValueError("k_admittance must be >= 0")
        if self.reaction_latency < 0:
            raise ValueError("reaction_latency must be >= 0")
        if self.attention_mode not in ("camera-follows-heading", "scan-pattern"):
            raise ValueError(f"unknown attention_mode: {self.attention_mode}")


def scripted_operator_step(state: RobotState, waypoint: tuple[float, float],
                           force: FeedbackForce, model: OperatorModel,
                           v_max: float) -> tuple[float, float]:
    """Raw device axes for one tick: pursue the waypoint, yield to force.

    The force argument is expected to already carry the operator's
    reaction latency (the caller buffers it).
    """
    dx = waypoint[0] - state.x
    dy = waypoint[1] - state.y
    dist = math.hypot(dx, dy)
    if dist > 1e-9:
        err = wrap_angle(math.atan2(dy, dx) - state.theta)
    else:
        err = 0.0

    angular = min(max(model.k_heading * err, -1.0), 1.0)
    forward = (model.cruise_speed / v_max) * max(0.0, math.cos(err))
    forward *= min(1.0, model.k_approach * dist)

    # Admittance: the hand gives way along the force direction.
    forward += model.k_admittance * force.vector[0]
    angular += model.k_admittance * force.vector[1]
    return (min(max(forward, -1.0), 1.0), min(max(angular, -1.0), 1.0))
