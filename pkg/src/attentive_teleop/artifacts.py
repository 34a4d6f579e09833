"""Image artifacts for debugging and the UI: grayscale dumps of saliency
and depth, and grid-aligned heatmaps with a fixed color scale."""

from __future__ import annotations

import numpy as np
from PIL import Image

from .mapping import GridSpec, TopDownSaliency
from .memory import AttentivenessMap

# Fixed heat LUT (black -> red -> yellow -> white), deliberately not
# renormalized per frame so decay is visible over time.
_LUT = np.zeros((256, 3), dtype=np.uint8)
_ramp = np.arange(256)
_LUT[:, 0] = np.clip(_ramp * 3, 0, 255)
_LUT[:, 1] = np.clip(_ramp * 3 - 255, 0, 255)
_LUT[:, 2] = np.clip(_ramp * 3 - 510, 0, 255)


def save_rgb_png(rgb: np.ndarray, path) -> None:
    Image.fromarray(rgb.astype(np.uint8), mode="RGB").save(path)


def save_gray_png(values: np.ndarray, path, lo: float = 0.0,
                  hi: float = 255.0) -> None:
    """8-bit grayscale dump of a scalar map on a fixed [lo, hi] scale."""
    if hi <= lo:
        raise ValueError("need hi > lo")
    scaled = np.clip((values - lo) / (hi - lo) * 255.0, 0, 255)
    Image.fromarray(scaled.astype(np.uint8), mode="L").save(path)


def save_depth_png(depth: np.ndarray, path, z_near: float, z_far: float) -> None:
    """Near = bright, far = dark."""
    save_gray_png(z_far - depth, path, lo=0.0, hi=z_far - z_near)


def _grid_to_image(grid: GridSpec, values: np.ndarray, cell_px: int) -> np.ndarray:
    """(width, height) grid array -> upright image (row 0 = max y)."""
    img = values.T[::-1]  # x right, y up
    return np.repeat(np.repeat(img, cell_px, axis=0), cell_px, axis=1)


def save_heatmap_png(grid: GridSpec, values: np.ndarray, path,
                     vmax: float, cell_px: int = 8) -> None:
    img = _grid_to_image(grid, values, cell_px)
    idx = np.clip(img / vmax * 255.0, 0, 255).astype(np.uint8)
    Image.fromarray(_LUT[idx], mode="RGB").save(path)


def save_topdown_saliency_png(topdown: TopDownSaliency, grid: GridSpec,
                              path, cell_px: int = 8) -> None:
    values = np.zeros((grid.width, grid.height))
    for (i, j), s in topdown.cells.items():
        values[i, j] = s
    save_heatmap_png(grid, values, path, vmax=255.0, cell_px=cell_px)


def save_attentiveness_png(amap: AttentivenessMap, path, cell_px: int = 8) -> None:
    save_heatmap_png(amap.grid, amap.values, path, vmax=1.0, cell_px=cell_px)
