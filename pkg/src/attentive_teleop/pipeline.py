"""The per-tick perception/feedback/control loop shared by the scripted
experiment harness and the live teleoperation service."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .camera import CameraModel, CameraMount, mounted_camera
from .haptics import FeedbackForce, FieldParams, total_repulsion
from .mapping import DEFAULT_STRIDE, GridSpec, project_visible_cells
from .memory import AttentivenessMap, MemoryParams, update
from .render import render_rgbd
from .saliency import SaliencyParams, depth_saliency, fuse_saliency, image_saliency
from .world import (DEFAULT_SENSING_RADIUS, DEFAULT_VELOCITY_GAIN, RobotState,
                    World, check_collision, observe_obstacles, shape_command,
                    step_robot)

METHOD_AMGPF = "amgpf"
METHOD_GPF = "gpf"


@dataclass(frozen=True)
class ControlParams:
    deadband: float = 0.1
    v_max: float = 1.0        # m/s
    omega_max: float = 1.5    # rad/s
    k_v: float = DEFAULT_VELOCITY_GAIN

    def __post_init__(self):
        if not 0 <= self.deadband < 1:
            raise ValueError("deadband must be in [0, 1)")
        if self.v_max <= 0 or self.omega_max <= 0:
            raise ValueError("velocity limits must be positive")


@dataclass(frozen=True)
class PipelineParams:
    camera: CameraModel = field(default_factory=CameraModel)
    mount: CameraMount = field(default_factory=CameraMount)
    saliency: SaliencyParams = field(default_factory=SaliencyParams)
    memory: MemoryParams = field(default_factory=MemoryParams)
    haptic: FieldParams = field(default_factory=FieldParams)
    control: ControlParams = field(default_factory=ControlParams)
    grid_resolution: float = 0.25
    pixel_stride: int = DEFAULT_STRIDE
    sensing_radius: float = DEFAULT_SENSING_RADIUS
    tick_rate: float = 10.0

    @property
    def dt(self) -> float:
        return 1.0 / self.tick_rate


@dataclass(frozen=True)
class ObstacleTick:
    obstacle_id: int
    distance: float
    closing_speed: float
    repulsion: float
    attentiveness: float
    modulated: float
    weight: float


@dataclass(frozen=True)
class TickRecord:
    tick: int
    x: float
    y: float
    theta: float
    v: float
    omega: float
    axis_forward: float
    axis_angular: float
    cmd_forward: float
    cmd_angular: float
    force_forward: float
    force_lateral: float
    force_norm: float
    total_repulsion: float
    colliding: bool
    visible_cells: int
    map_mean: float
    map_max: float
    obstacles: tuple[ObstacleTick, ...] = ()


class Pipeline:
    """Sequential loop: render -> saliency -> mapping -> memory -> obstacle
    observation -> force -> command shaping -> kinematics -> collision.

    The attentiveness map evolves every tick; when the method is classical
    GPF the force stage reads a frozen zero map instead.
    """

    def __init__(self, world: World, params: PipelineParams,
                 method: str = METHOD_AMGPF):
        if method not in (METHOD_AMGPF, METHOD_GPF):
            raise ValueError(f"unknown method: {method}")
        self.world = world
        self.params = params
        self.method = method
        self.state = world.start_pose
        self.prev_state = world.start_pose
        self.grid = GridSpec.covering(world.bounds, params.grid_resolution)
        self.map = AttentivenessMap.zeros(self.grid)
        self.tick_count = 0
        self.last_force = FeedbackForce()
        self.last_frame = None

    def tick(self, command_fn) -> TickRecord:
        """Advance one tick. command_fn(state, force) returns raw axes;
        it receives this tick's force so callers can apply their own
        reaction latency."""
        p = self.params
        camera = mounted_camera(self.state, p.mount, p.camera)
        frame = render_rgbd(self.world, camera, tick=self.tick_count)
        s_img = image_saliency(frame.rgb, p.saliency, tick=self.tick_count)
        s_dep = depth_saliency(frame.depth, camera.z_near, camera.z_far,
                               tick=self.tick_count)
        fused = fuse_saliency(s_img, s_dep, p.saliency.k_image, p.saliency.k_depth)
        visible = project_visible_cells(frame, fused, self.grid,
                                        self.state.body_height, p.pixel_stride)
        self.map = update(self.map, visible, p.memory)

        observations = observe_obstacles(self.world, self.state, self.prev_state,
                                         p.dt, p.sensing_radius)
        force_map = self.map if self.method == METHOD_AMGPF else None
        force = total_repulsion(observations, force_map, p.haptic, self.state)

        axes = command_fn(self.state, force)
        cmd = shape_command(axes, p.control.deadband, p.control.v_max,
                            p.control.omega_max)
        self.prev_state = self.state
        self.state = step_robot(self.state, cmd, p.dt, p.control.k_v)
        colliding = check_collision(self.world, self.state)

        per_obstacle = _obstacle_rows(observations, force, force_map, p.haptic)
        record = TickRecord(
            tick=self.tick_count,
            x=self.state.x, y=self.state.y, theta=self.state.theta,
            v=self.state.v, omega=self.state.omega,
            axis_forward=axes[0], axis_angular=axes[1],
            cmd_forward=cmd.forward, cmd_angular=cmd.angular,
            force_forward=force.vector[0], force_lateral=force.vector[1],
            force_norm=force.norm, total_repulsion=force.magnitude,
            colliding=colliding,
            visible_cells=len(visible.cells),
            map_mean=float(self.map.values.mean()),
            map_max=float(self.map.values.max()),
            obstacles=per_obstacle,
        )
        self.last_force = force
        self.last_frame = frame
        self.tick_count += 1
        return record

    def reset(self):
        self.state = self.world.start_pose
        self.prev_state = self.world.start_pose
        self.map = AttentivenessMap.zeros(self.grid)
        self.tick_count = 0
        self.last_force = FeedbackForce()
        self.last_frame = None


def _obstacle_rows(observations, force: FeedbackForce, amap, haptic: FieldParams):
    from .haptics import repulsion
    modulated = dict(force.per_obstacle)
    total_abs = sum(abs(r) for r in modulated.values())
    rows = []
    for obs in observations:
        raw = repulsion(obs.distance, obs.closing_speed, haptic)
        m = amap.at(*obs.position) if amap is not None else 0.0
        r_attn = modulated.get(obs.obstacle_id, 0.0)
        w = abs(r_attn) / total_abs if total_abs > 0 else 0.0
        rows.append(ObstacleTick(
            obstacle_id=obs.obstacle_id, distance=obs.distance,
            closing_speed=obs.closing_speed, repulsion=raw,
            attentiveness=m, modulated=r_attn, weight=w,
        ))
    return tuple(rows)
