"""Reproject salient pixels into the world frame and aggregate them onto
a planar grid: the set of visible cells with their top-down saliency."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .camera import CameraModel
from .render import RgbdFrame
from .saliency import SaliencyImage
from .world import Rect

DEFAULT_RESOLUTION = 0.25
GROUND_TOLERANCE = 0.05
DEFAULT_STRIDE = 2


@dataclass(frozen=True)
class GridSpec:
    resolution: float = DEFAULT_RESOLUTION  # meters per cell
    origin: tuple[float, float] = (0.0, 0.0)  # world (x, y) of cell (0, 0) corner
    width: int = 1
    height: int = 1

    def __post_init__(self):
        if self.resolution <= 0:
            raise ValueError("grid resolution must be positive")
        if self.width < 1 or self.height < 1:
            raise ValueError("grid must have at least one cell")

    @classmethod
    def covering(cls, bounds: Rect, resolution: float = DEFAULT_RESOLUTION) -> "GridSpec":
        width = int(np.ceil((bounds.xmax - bounds.xmin) / resolution))
        height = int(np.ceil((bounds.ymax - bounds.ymin) / resolution))
        return cls(resolution=resolution, origin=(bounds.xmin, bounds.ymin),
                   width=width, height=height)

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        i = int(np.floor((x - self.origin[0]) / self.resolution))
        j = int(np.floor((y - self.origin[1]) / self.resolution))
        return i, j

    def in_grid(self, i: int, j: int) -> bool:
        return 0 <= i < self.width and 0 <= j < self.height


@dataclass(frozen=True)
class TopDownSaliency:
    cells: dict  # (i, j) -> saliency in [0, 255]
    tick: int = 0
    dropped_outside: int = 0  # reprojected points that fell off the grid


def reproject_pixel(camera: CameraModel, u: float, v: float, z: float) -> np.ndarray:
    """Pinhole back-projection of pixel (u, v) at depth z to the world frame."""
    if z <= 0:
        raise ValueError("depth must be positive")
    p_cam = np.array([z * (u - camera.cx) / camera.fx,
                      z * (v - camera.cy) / camera.fy,
                      z])
    return camera.camera_to_world(p_cam)


def project_visible_cells(frame: RgbdFrame, saliency: SaliencyImage,
                          grid: GridSpec, robot_height: float,
                          stride: int = DEFAULT_STRIDE) -> TopDownSaliency:
    """Reproject every stride-th pixel and min-aggregate saliency per cell.

    Points above the robot height or below the floor are discarded; the
    minimum keeps feedback conservative when part of an obstacle is bland.
    """
    if frame.depth.shape != saliency.scores.shape:
        raise ValueError("frame and saliency map are not aligned")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    cam = frame.camera
    depth = frame.depth[::stride, ::stride]
    scores = saliency.scores[::stride, ::stride]
    h, w = depth.shape
    uu, vv = np.meshgrid(np.arange(w) * stride, np.arange(h) * stride)

    valid = depth < cam.z_far  # z_far doubles as the no-hit sentinel
    z = depth[valid].astype(float)
    u = uu[valid].astype(float)
    v = vv[valid].astype(float)
    s = scores[valid].astype(float)

    pts_cam = np.stack([z * (u - cam.cx) / cam.fx,
                        z * (v - cam.cy) / cam.fy,
                        z], axis=-1)
    pts_w = cam.camera_to_world(pts_cam)

    keep = (pts_w[:, 2] <= robot_height) & (pts_w[:, 2] >= -GROUND_TOLERANCE)
    pts_w = pts_w[keep]
    s = s[keep]

    ci = np.floor((pts_w[:, 0] - grid.origin[0]) / grid.resolution).astype(np.int64)
    cj = np.floor((pts_w[:, 1] - grid.origin[1]) / grid.resolution).astype(np.int64)
    inside = (ci >= 0) & (ci < grid.width) & (cj >= 0) & (cj < grid.height)
    dropped = int((~inside).sum())
    ci, cj, s = ci[inside], cj[inside], s[inside]

    flat = ci * grid.height + cj
    mins = np.full(grid.width * grid.height, np.inf)
    np.minimum.at(mins, flat, s)
    touched = np.flatnonzero(np.isfinite(mins))
    cells = {(int(k // grid.height), int(k % grid.height)): float(mins[k])
             for k in touched}
    return TopDownSaliency(cells=cells, tick=frame.tick, dropped_outside=dropped)
