"""Synthetic 2.5-D world: axis-aligned box obstacles on a flat floor,
planar unicycle robot, collision checks, and obstacle observations."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

WORLD_SCHEMA_VERSION = 1

# Keeps inverse-distance risk finite when the footprint touches a box.
D_MIN_CLAMP = 0.01
DEFAULT_SENSING_RADIUS = 5.0
DEFAULT_VELOCITY_GAIN = 5.0  # first-order tracking gain k_v [1/s]


def wrap_angle(theta: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    wrapped = math.fmod(theta + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in world x-y, in meters."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if self.xmax <= self.xmin or self.ymax <= self.ymin:
            raise ValueError(f"rectangle has non-positive extent: {self}")

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))

    def contains(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax

    def contains_rect(self, other: "Rect") -> bool:
        return (self.xmin <= other.xmin and other.xmax <= self.xmax
                and self.ymin <= other.ymin and other.ymax <= self.ymax)


@dataclass(frozen=True)
class Box:
    """Obstacle: axis-aligned box standing on the floor."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float
    height: float
    color: tuple[int, int, int] = (180, 60, 60)

    def __post_init__(self):
        if self.xmax <= self.xmin or self.ymax <= self.ymin or self.height <= 0:
            raise ValueError(f"box has non-positive extent: {self}")

    def closest_point(self, x: float, y: float) -> tuple[float, float]:
        """Closest point on the box *boundary* to (x, y), in the x-y plane."""
        cx = min(max(x, self.xmin), self.xmax)
        cy = min(max(y, self.ymin), self.ymax)
        if self.xmin < x < self.xmax and self.ymin < y < self.ymax:
            # Inside: snap to the nearest face.
            gaps = [
                (x - self.xmin, (self.xmin, y)),
                (self.xmax - x, (self.xmax, y)),
                (y - self.ymin, (x, self.ymin)),
                (self.ymax - y, (x, self.ymax)),
            ]
            return min(gaps)[1]
        return (cx, cy)

    def distance(self, x: float, y: float) -> float:
        """Signed-ish planar distance from (x, y) to the box; 0 inside."""
        dx = max(self.xmin - x, 0.0, x - self.xmax)
        dy = max(self.ymin - y, 0.0, y - self.ymax)
        return math.hypot(dx, dy)


@dataclass(frozen=True)
class RobotState:
    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0
    v: float = 0.0
    omega: float = 0.0
    footprint_radius: float = 0.3
    body_height: float = 1.0

    def __post_init__(self):
        if self.footprint_radius <= 0:
            raise ValueError("footprint_radius must be positive")
        object.__setattr__(self, "theta", wrap_angle(self.theta))


@dataclass(frozen=True)
class VelocityCommand:
    forward: float = 0.0
    angular: float = 0.0


@dataclass(frozen=True)
class WorkingArea:
    rect: Rect
    dwell_time: float = 15.0


@dataclass(frozen=True)
class World:
    obstacles: tuple[Box, ...]
    bounds: Rect
    working_areas: tuple[WorkingArea, ...] = ()
    goal_region: Rect | None = None
    start_pose: RobotState = field(default_factory=RobotState)
    floor_color: tuple[int, int, int] = (120, 120, 120)

    def __post_init__(self):
        for wa in self.working_areas:
            if not self.bounds.contains_rect(wa.rect):
                raise ValueError("working area outside world bounds")
        if self.goal_region is not None and not self.bounds.contains_rect(self.goal_region):
            raise ValueError("goal region outside world bounds")


@dataclass(frozen=True)
class ObstacleObservation:
    obstacle_id: int
    distance: float        # d_i: footprint surface to nearest obstacle point [m]
    closing_speed: float   # v_i >= 0 [m/s]
    position: tuple[float, float]  # nearest obstacle point in world frame


def shape_command(raw_axis: tuple[float, float], deadband: float,
                  v_max: float, omega_max: float) -> VelocityCommand:
    """Map device axes in [-1, 1] to velocity targets with a deadband.

    Inside the deadband the command is zero; outside it ramps linearly
    from zero at the deadband edge to the limit at full deflection.
    """
    if not 0.0 <= deadband < 1.0:
        raise ValueError("deadband must be in [0, 1)")

    def shape(a: float, limit: float) -> float:
        a = min(max(a, -1.0), 1.0)
        if abs(a) <= deadband:
            return 0.0
        scaled = (abs(a) - deadband) / (1.0 - deadband)
        return math.copysign(scaled * limit, a)

    return VelocityCommand(shape(raw_axis[0], v_max), shape(raw_axis[1], omega_max))


def step_robot(state: RobotState, cmd: VelocityCommand, dt: float,
               k_v: float = DEFAULT_VELOCITY_GAIN) -> RobotState:
    """Unicycle step with first-order velocity tracking."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    v = state.v + k_v * (cmd.forward - state.v) * dt
    omega = state.omega + k_v * (cmd.angular - state.omega) * dt
    x = state.x + v * math.cos(state.theta) * dt
    y = state.y + v * math.sin(state.theta) * dt
    theta = wrap_angle(state.theta + omega * dt)
    return replace(state, x=x, y=y, theta=theta, v=v, omega=omega)


def obstacle_distance(world: World, state: RobotState, obstacle_id: int) -> float:
    """Footprint-surface distance to one obstacle, clamped at D_MIN_CLAMP."""
    box = world.obstacles[obstacle_id]
    d = box.distance(state.x, state.y) - state.footprint_radius
    return max(d, D_MIN_CLAMP)


def observe_obstacles(world: World, state: RobotState, prev_state: RobotState,
                      dt: float, sensing_radius: float = DEFAULT_SENSING_RADIUS,
                      ) -> list[ObstacleObservation]:
    """Per-obstacle distance, closing speed, and nearest point within range.

    Closing speed is a backward finite difference of the distance,
    clamped at zero so receding obstacles carry no temporal risk.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    out = []
    for i, box in enumerate(world.obstacles):
        d_center = box.distance(state.x, state.y)
        if d_center - state.footprint_radius > sensing_radius:
            continue
        d_now = max(d_center - state.footprint_radius, D_MIN_CLAMP)
        d_prev = max(box.distance(prev_state.x, prev_state.y)
                     - prev_state.footprint_radius, D_MIN_CLAMP)
        closing = max(0.0, (d_prev - d_now) / dt)
        out.append(ObstacleObservation(
            obstacle_id=i,
            distance=d_now,
            closing_speed=closing,
            position=box.closest_point(state.x, state.y),
        ))
    return out


def check_collision(world: World, state: RobotState) -> bool:
    """True iff the footprint disc touches any obstacle or leaves bounds."""
    b = world.bounds
    r = state.footprint_radius
    if (state.x - r < b.xmin or state.x + r > b.xmax
            or state.y - r < b.ymin or state.y + r > b.ymax):
        return True
    for box in world.obstacles:
        if box.distance(state.x, state.y) <= r:
            return True
    return False


# ---------------------------------------------------------------------------
# World file I/O (JSON, versioned)

def _rect_to_json(r: Rect) -> list[float]:
    return [r.xmin, r.ymin, r.xmax, r.ymax]


def _rect_from_json(v) -> Rect:
    return Rect(*[float(x) for x in v])


def world_to_dict(world: World) -> dict:
    return {
        "schema_version": WORLD_SCHEMA_VERSION,
        "bounds": _rect_to_json(world.bounds),
        "floor_color": list(world.floor_color),
        "obstacles": [
            {
                "min": [b.xmin, b.ymin],
                "max": [b.xmax, b.ymax],
                "height": b.height,
                "color": list(b.color),
            }
            for b in world.obstacles
        ],
        "working_areas": [
            {"rect": _rect_to_json(w.rect), "dwell_time": w.dwell_time}
            for w in world.working_areas
        ],
        "goal": _rect_to_json(world.goal_region) if world.goal_region else None,
        "start_pose": {
            "x": world.start_pose.x,
            "y": world.start_pose.y,
            "theta": world.start_pose.theta,
            "footprint_radius": world.start_pose.footprint_radius,
            "body_height": world.start_pose.body_height,
        },
    }


def world_from_dict(data: dict) -> World:
    version = data.get("schema_version")
    if version != WORLD_SCHEMA_VERSION:
        raise ValueError(f"unsupported world schema_version: {version!r}")
    sp = data.get("start_pose", {})
    return World(
        obstacles=tuple(
            Box(
                xmin=float(o["min"][0]), ymin=float(o["min"][1]),
                xmax=float(o["max"][0]), ymax=float(o["max"][1]),
                height=float(o["height"]),
                color=tuple(int(c) for c in o.get("color", (180, 60, 60))),
            )
            for o in data.get("obstacles", [])
        ),
        bounds=_rect_from_json(data["bounds"]),
        working_areas=tuple(
            WorkingArea(_rect_from_json(w["rect"]), float(w.get("dwell_time", 15.0)))
            for w in data.get("working_areas", [])
        ),
        goal_region=_rect_from_json(data["goal"]) if data.get("goal") else None,
        start_pose=RobotState(
            x=float(sp.get("x", 0.0)), y=float(sp.get("y", 0.0)),
            theta=float(sp.get("theta", 0.0)),
            footprint_radius=float(sp.get("footprint_radius", 0.3)),
            body_height=float(sp.get("body_height", 1.0)),
        ),
        floor_color=tuple(int(c) for c in data.get("floor_color", (120, 120, 120))),
    )


def save_world(world: World, path) -> None:
    with open(path, "w") as f:
        json.dump(world_to_dict(world), f, indent=2)


def load_world(path) -> World:
    with open(path) as f:
        return world_from_dict(json.load(f))


def world_hash(world: World) -> str:
    """Stable content hash used to guard replay against edited worlds."""
    import hashlib
    blob = json.dumps(world_to_dict(world), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
