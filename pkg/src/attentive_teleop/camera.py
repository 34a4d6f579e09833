"""Pinhole camera model and the head-camera mounting transform."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .world import RobotState

DEFAULT_WIDTH = 160
DEFAULT_HEIGHT = 120
DEFAULT_FOCAL = 120.0
DEFAULT_Z_NEAR = 0.3
DEFAULT_Z_FAR = 10.0


@dataclass(frozen=True)
class CameraMount:
    height: float = 1.0   # meters above the floor
    pitch: float = 0.3    # radians, positive pitches the view down


@dataclass(frozen=True)
class CameraModel:
    """Intrinsics plus a world-to-camera transform p_c = R @ p_w + t.

    Camera axes: +z forward, +x right, +y down (image v grows downward).
    Depth images store camera-z distance, not ray length.
    """

    fx: float = DEFAULT_FOCAL
    fy: float = DEFAULT_FOCAL
    cx: float = DEFAULT_WIDTH / 2
    cy: float = DEFAULT_HEIGHT / 2
    width: int = DEFAULT_WIDTH
    height: int = DEFAULT_HEIGHT
    rotation: tuple = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    translation: tuple = (0.0, 0.0, 0.0)
    z_near: float = DEFAULT_Z_NEAR
    z_far: float = DEFAULT_Z_FAR

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        if not 0 < self.z_near < self.z_far:
            raise ValueError("require 0 < z_near < z_far")
        R = self.R
        if not np.allclose(R.T @ R, np.eye(3), atol=1e-9):
            raise ValueError("rotation matrix is not orthonormal")

    @property
    def R(self) -> np.ndarray:
        return np.asarray(self.rotation, dtype=float)

    @property
    def t(self) -> np.ndarray:
        return np.asarray(self.translation, dtype=float)

    def world_to_camera(self, points: np.ndarray) -> np.ndarray:
        return points @ self.R.T + self.t

    def camera_to_world(self, points: np.ndarray) -> np.ndarray:
        return (points - self.t) @ self.R

    def project(self, point_w: np.ndarray) -> tuple[float, float, float]:
        """World point -> (u, v, z). z <= 0 means behind the camera."""
        p = self.world_to_camera(np.asarray(point_w, dtype=float))
        z = p[2]
        if z <= 0:
            return (math.nan, math.nan, z)
        return (self.fx * p[0] / z + self.cx, self.fy * p[1] / z + self.cy, z)


def camera_pose(state: RobotState, mount: CameraMount) -> tuple[np.ndarray, np.ndarray]:
    """World-to-camera [R|t] for a head camera at the robot pose.

    The camera sits at (x, y, mount.height), yawed with the robot heading
    and pitched down by mount.pitch.
    """
    ct, st = math.cos(state.theta), math.sin(state.theta)
    cp, sp = math.cos(mount.pitch), math.sin(mount.pitch)
    forward = np.array([ct * cp, st * cp, -sp])
    right = np.array([st, -ct, 0.0])
    down = np.cross(forward, right)
    R = np.stack([right, down, forward])  # rows are camera axes in world coords
    position = np.array([state.x, state.y, mount.height])
    t = -R @ position
    return R, t


def mounted_camera(state: RobotState, mount: CameraMount,
                   base: CameraModel | None = None) -> CameraModel:
    """CameraModel snapshot for the robot's head camera at this pose."""
    base = base or CameraModel()
    R, t = camera_pose(state, mount)
    return CameraModel(
        fx=base.fx, fy=base.fy, cx=base.cx, cy=base.cy,
        width=base.width, height=base.height,
        rotation=tuple(map(tuple, R)), translation=tuple(t),
        z_near=base.z_near, z_far=base.z_far,
    )
