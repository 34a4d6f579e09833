"""Software RGB-D renderer: per-pixel raycasts against the floor plane
and axis-aligned box obstacles. Stands in for the robot head camera."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit

from .camera import CameraModel
from .world import World

BACKGROUND_COLOR = (200, 210, 220)


@dataclass(frozen=True)
class RgbdFrame:
    rgb: np.ndarray    # (H, W, 3) uint8
    depth: np.ndarray  # (H, W) float, camera-z meters; z_far is the no-hit sentinel
    camera: CameraModel
    tick: int = 0


@lru_cache(maxsize=8)
def _ray_grid(fx: float, fy: float, cx: float, cy: float,
              width: int, height: int) -> np.ndarray:
    """Camera-frame ray directions with unit z, one per integer pixel coord.

    Rays pass through integer (u, v) so that reprojecting (u, v, depth)
    lands exactly on the rendered surface point.
    """
    u = np.arange(width, dtype=float)
    v = np.arange(height, dtype=float)
    uu, vv = np.meshgrid(u, v)
    dirs = np.stack([(uu - cx) / fx, (vv - cy) / fy, np.ones_like(uu)], axis=-1)
    dirs.setflags(write=False)
    return dirs


@njit(cache=True)
def _raycast(dirs, origin, lo, hi, floor_rect):  # pragma: no cover - compiled
    """Nearest-hit slab tests. Returns per-pixel hit parameter t (camera-z
    depth, since ray directions have unit camera-z) and a hit id:
    -2 floor, -1 nothing, i >= 0 obstacle i."""
    h, w = dirs.shape[:2]
    depth = np.full((h, w), np.inf)
    hit = np.full((h, w), -1, dtype=np.int32)
    n_boxes = lo.shape[0]
    for y in range(h):
        for x in range(w):
            dx, dy, dz = dirs[y, x, 0], dirs[y, x, 1], dirs[y, x, 2]
            best = np.inf
            best_id = -1
            if dz != 0.0:
                t = -origin[2] / dz
                if t > 0.0:
                    px = origin[0] + t * dx
                    py = origin[1] + t * dy
                    if (floor_rect[0] <= px <= floor_rect[2]
                            and floor_rect[1] <= py <= floor_rect[3]):
                        best = t
                        best_id = -2
            for i in range(n_boxes):
                t_near = -np.inf
                t_far = np.inf
                ok = True
                for a in range(3):
                    d = dirs[y, x, a]
                    o = origin[a]
                    if d == 0.0:
                        if o < lo[i, a] or o > hi[i, a]:
                            ok = False
                            break
                    else:
                        t0 = (lo[i, a] - o) / d
                        t1 = (hi[i, a] - o) / d
                        if t0 > t1:
                            t0, t1 = t1, t0
                        if t0 > t_near:
                            t_near = t0
                        if t1 < t_far:
                            t_far = t1
                if ok and t_near <= t_far and t_far > 0.0:
                    t = t_near if t_near > 0.0 else 1e-9
                    if t < best:
                        best = t
                        best_id = i
            depth[y, x] = best
            hit[y, x] = best_id
    return depth, hit


def _box_arrays(world: World) -> tuple[np.ndarray, np.ndarray]:
    n = len(world.obstacles)
    lo = np.empty((n, 3))
    hi = np.empty((n, 3))
    for i, box in enumerate(world.obstacles):
        lo[i] = (box.xmin, box.ymin, 0.0)
        hi[i] = (box.xmax, box.ymax, box.height)
    return lo, hi


def render_rgbd(world: World, camera: CameraModel, tick: int = 0) -> RgbdFrame:
    """Raycast the world into an RGB-D frame.

    Depth is perpendicular camera-z distance clipped to [z_near, z_far];
    pixels that hit nothing carry the z_far sentinel.
    """
    dirs_c = _ray_grid(camera.fx, camera.fy, camera.cx, camera.cy,
                       camera.width, camera.height)
    dirs_w = np.ascontiguousarray(dirs_c @ camera.R)  # R^T applied row-wise
    origin = -camera.R.T @ camera.t  # camera center in world coords

    lo, hi = _box_arrays(world)
    b = world.bounds
    floor_rect = np.array([b.xmin, b.ymin, b.xmax, b.ymax])
    depth, hit_id = _raycast(dirs_w, origin, lo, hi, floor_rect)

    # hit_id -2 -> floor, -1 -> background, i -> obstacle i
    colors = np.array(
        [world.floor_color, BACKGROUND_COLOR] + [box.color for box in world.obstacles],
        dtype=np.uint8,
    )
    rgb = colors[hit_id + 2]

    depth = np.where(np.isfinite(depth),
                     np.clip(depth, camera.z_near, camera.z_far),
                     camera.z_far)
    return RgbdFrame(rgb=rgb, depth=depth, camera=camera, tick=tick)
