"""Generalized potential field repulsion with attentiveness modulation,
and synthesis of the two-axis feedback force shown to the operator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .memory import AttentivenessMap
from .world import ObstacleObservation, RobotState


@dataclass(frozen=True)
class FieldParams:
    t_safe: float = 2.0      # safe reserve time [s]
    d_safe: float = 1.5      # safe distance [m]
    alpha: float = 1.0       # temporal/distance risk balance
    gain: float = 2.0        # field sensitivity G
    gamma: float = 0.8       # attentiveness modulation depth, in (0, 1]
    f_max: float = 10.0      # force scale [N]

    def __post_init__(self):
        if self.t_safe <= 0 or self.d_safe <= 0 or self.gain <= 0:
            raise ValueError("t_safe, d_safe and gain must be positive")
        if not 0 < self.gamma <= 1:
            raise ValueError("gamma must be in (0, 1]")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")


@dataclass(frozen=True)
class FeedbackForce:
    magnitude: float = 0.0  # total repulsion in [0, 1]
    vector: tuple[float, float] = (0.0, 0.0)  # (forward, lateral) newtons, robot frame
    per_obstacle: tuple = ()  # (obstacle_id, modulated repulsion) pairs

    @property
    def norm(self) -> float:
        return math.hypot(*self.vector)


def reserve_time(distance: float, closing_speed: float) -> float:
    """Time left to react: d / v. A stationary robot has infinite reserve."""
    if distance <= 0:
        raise ValueError("distance must be positive")
    if closing_speed < 0:
        raise ValueError("closing speed must be >= 0")
    if closing_speed == 0:
        return math.inf
    return distance / closing_speed


def risk(distance: float, closing_speed: float, params: FieldParams) -> float:
    """Combined risk: temporal term plus alpha-weighted distance term,
    each clamped at zero outside the safe envelope."""
    t_res = reserve_time(distance, closing_speed)
    temporal = max(0.0, (0.0 if math.isinf(t_res) else 1.0 / t_res) - 1.0 / params.t_safe)
    spatial = max(0.0, 1.0 / distance - 1.0 / params.d_safe)
    return temporal + params.alpha * spatial


def repulsion(distance: float, closing_speed: float, params: FieldParams) -> float:
    """Gain-scaled risk, saturating at 1 once risk reaches 1/G."""
    r = risk(distance, closing_speed, params)
    if r >= 1.0 / params.gain:
        return 1.0
    return params.gain * r


def attn_repulsion(obs: ObstacleObservation, amap: AttentivenessMap | None,
                   params: FieldParams) -> float:
    """Repulsion scaled down by attentiveness at the obstacle position.

    Even at full attention a (1 - gamma) residual warning survives.
    A None map (or a position off the grid) means zero attentiveness.
    """
    m = amap.at(*obs.position) if amap is not None else 0.0
    return repulsion(obs.distance, obs.closing_speed, params) * (1.0 - params.gamma * m)


def total_repulsion(observations: list[ObstacleObservation],
                    amap: AttentivenessMap | None, params: FieldParams,
                    state: RobotState | None = None) -> FeedbackForce:
    """Magnitude-weighted combination of per-obstacle repulsions.

    The force vector points along the weight-averaged obstacle-to-robot
    bearing, expressed in the robot frame, scaled to f_max at full repulsion.
    """
    if not observations:
        return FeedbackForce()
    contributions = [(obs, attn_repulsion(obs, amap, params)) for obs in observations]
    total_abs = sum(abs(r) for _, r in contributions)
    if total_abs <= 0:
        return FeedbackForce(
            per_obstacle=tuple((obs.obstacle_id, 0.0) for obs, _ in contributions))

    weights = [abs(r) / total_abs for _, r in contributions]
    magnitude = sum(w * r for w, (_, r) in zip(weights, contributions))

    fx = fy = 0.0
    if state is not None:
        for w, (obs, _) in zip(weights, contributions):
            dx = state.x - obs.position[0]
            dy = state.y - obs.position[1]
            norm = math.hypot(dx, dy)
            if norm > 0:
                fx += w * dx / norm
                fy += w * dy / norm
        norm = math.hypot(fx, fy)
        if norm > 0:
            fx, fy = fx / norm, fy / norm
        # World push direction into the robot frame: forward and lateral.
        c, s = math.cos(state.theta), math.sin(state.theta)
        forward = c * fx + s * fy
        lateral = -s * fx + c * fy
    else:
        forward = lateral = 0.0

    scale = params.f_max * magnitude
    return FeedbackForce(
        magnitude=magnitude,
        vector=(scale * forward, scale * lateral),
        per_obstacle=tuple((obs.obstacle_id, r) for obs, r in contributions),
    )


def gpf_baseline(observations: list[ObstacleObservation], params: FieldParams,
                 state: RobotState | None = None) -> FeedbackForce:
    """Classical GPF: identical combination with attentiveness held at zero."""
    return total_repulsion(observations, None, params, state)
