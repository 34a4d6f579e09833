"""Bottom-up saliency: Itti-style image saliency from intensity, color
opponency, and orientation channels, plus nearness-based depth saliency,
fused linearly into one per-pixel map on the [0, 255] scale."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import cv2
import numpy as np

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SaliencyImage:
    scores: np.ndarray  # (H, W) float in [0, 255]
    tick: int = 0


@dataclass(frozen=True)
class SaliencyParams:
    k_image: float = 0.5
    k_depth: float = 0.5
    pyramid_levels: int = 9
    center_scales: tuple[int, ...] = (2, 3, 4)
    surround_deltas: tuple[int, ...] = (3, 4)
    orientation_count: int = 4

    def __post_init__(self):
        if self.k_image < 0 or self.k_depth < 0 or self.k_image + self.k_depth <= 0:
            raise ValueError("fusion weights must be >= 0 with a positive sum")
        needed = max(self.center_scales) + max(self.surround_deltas) + 1
        if self.pyramid_levels < needed:
            raise ValueError(
                f"pyramid_levels must be >= {needed} for the configured scales")


def _downsample(img: np.ndarray) -> np.ndarray:
    """Blur + area-resample to half size (ceil). Mirror-symmetric, unlike
    cv2.pyrDown on odd sizes."""
    blurred = cv2.GaussianBlur(img, (5, 5), 0)
    h, w = img.shape[:2]
    return cv2.resize(blurred, (max(1, (w + 1) // 2), max(1, (h + 1) // 2)),
                      interpolation=cv2.INTER_AREA)


def _pyramid(img: np.ndarray, levels: int) -> list[np.ndarray]:
    out = [img]
    for _ in range(levels - 1):
        if min(out[-1].shape[:2]) <= 1:
            break
        out.append(_downsample(out[-1]))
    return out


def _orientation_maps(intensity: np.ndarray, count: int) -> list[np.ndarray]:
    """Oriented energy via steered second Gaussian derivatives."""
    gxx = cv2.Sobel(intensity, cv2.CV_32F, 2, 0, ksize=3)
    gyy = cv2.Sobel(intensity, cv2.CV_32F, 0, 2, ksize=3)
    gxy = cv2.Sobel(intensity, cv2.CV_32F, 1, 1, ksize=3)
    maps = []
    for k in range(count):
        theta = k * np.pi / count
        c, s = np.cos(theta), np.sin(theta)
        maps.append(np.abs(c * c * gxx + 2 * c * s * gxy + s * s * gyy))
    return maps


def _center_surround(center: np.ndarray, surround: np.ndarray) -> np.ndarray:
    up = cv2.resize(surround, (center.shape[1], center.shape[0]),
                    interpolation=cv2.INTER_LINEAR)
    return np.abs(center - up)


def _normalize_map(m: np.ndarray) -> np.ndarray:
    """Promote maps with few strong peaks: scale to [0, 1], then weight by
    (global max - mean of grid-local maxima)^2."""
    peak = float(m.max())
    # Floor well below any real structure on the 0-255 scale; resampling
    # noise on flat inputs must not get renormalized into fake saliency.
    if peak <= 1e-2:
        return np.zeros_like(m)
    m = m / peak
    h, w = m.shape
    stride = max(1, w // 8)
    if stride == 1:
        mean_max = float(m.mean())
    elif h % stride == 0 and w % stride == 0:
        blocks = m.reshape(h // stride, stride, w // stride, stride)
        mean_max = float(blocks.max(axis=(1, 3)).mean())
    else:
        maxima = [m[y0:y0 + stride, x0:x0 + stride].max()
                  for y0 in range(0, h, stride)
                  for x0 in range(0, w, stride)]
        mean_max = float(np.mean(maxima))
    return m * (1.0 - mean_max) ** 2


def image_saliency(rgb: np.ndarray, params: SaliencyParams = SaliencyParams(),
                   tick: int = 0) -> SaliencyImage:
    """Itti-style bottom-up saliency of an RGB image, scaled to [0, 255]."""
    if rgb.size == 0:
        raise ValueError("empty image")
    img = rgb.astype(np.float32)
    r, g, b = img[..., 0], img[..., 1], img[..., 2]
    intensity = (r + g + b) / 3.0

    # Hue decoupled from brightness; dark pixels carry no color signal.
    peak = float(intensity.max())
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(intensity > 0.1 * peak, 1.0 / intensity, 0.0)
    rn, gn, bn = r * scale, g * scale, b * scale
    red = np.maximum(0.0, rn - (gn + bn) / 2)
    green = np.maximum(0.0, gn - (rn + bn) / 2)
    blue = np.maximum(0.0, bn - (rn + gn) / 2)
    yellow = np.maximum(0.0, (rn + gn) / 2 - np.abs(rn - gn) / 2 - bn)

    levels = params.pyramid_levels
    pyr_i = _pyramid(intensity, levels)
    # Pyramid construction is linear, so opponency differences commute with it.
    pyr_rg = _pyramid(red - green, levels)
    pyr_by = _pyramid(blue - yellow, levels)
    # Orientation maps only matter at levels used as a center or surround.
    coarsest_center = min(params.center_scales)
    pyr_o = [
        _orientation_maps(lvl, params.orientation_count) if k >= coarsest_center else None
        for k, lvl in enumerate(pyr_i)
    ]

    pairs = [(c, c + d) for c in params.center_scales for d in params.surround_deltas]
    n_levels = len(pyr_i)
    pairs = [(c, s) for c, s in pairs if s < n_levels]
    if not pairs:
        raise ValueError("image too small for the configured pyramid scales")

    out_size = (pyr_i[min(params.center_scales)].shape[1],
                pyr_i[min(params.center_scales)].shape[0])

    def accumulate(maps_by_pair):
        total = np.zeros((out_size[1], out_size[0]), dtype=np.float32)
        for m in maps_by_pair:
            m = _normalize_map(m)
            if (m.shape[1], m.shape[0]) != out_size:
                m = cv2.resize(m, out_size, interpolation=cv2.INTER_LINEAR)
            total += m
        return total

    consp_i = accumulate(_center_surround(pyr_i[c], pyr_i[s]) for c, s in pairs)
    consp_c = accumulate(
        [_center_surround(pyr_rg[c], -pyr_rg[s]) for c, s in pairs]
        + [_center_surround(pyr_by[c], -pyr_by[s]) for c, s in pairs])
    consp_o = np.zeros_like(consp_i)
    for k in range(params.orientation_count):
        consp_o += _normalize_map(
            accumulate(_center_surround(pyr_o[c][k], pyr_o[s][k]) for c, s in pairs))

    combined = (_normalize_map(consp_i) + _normalize_map(consp_c)
                + _normalize_map(consp_o)) / 3.0
    full = cv2.resize(combined, (rgb.shape[1], rgb.shape[0]),
                      interpolation=cv2.INTER_LINEAR)
    full = np.maximum(full, 0.0)
    peak = float(full.max())
    if peak > 1e-4:
        full = full * (255.0 / peak)
    else:
        full = np.zeros_like(full)
    return SaliencyImage(scores=full.astype(float), tick=tick)


def depth_saliency(depth: np.ndarray, z_near: float, z_far: float,
                   tick: int = 0) -> SaliencyImage:
    """Nearness saliency: 255 * (z_near/Z) * (z_far - Z)/(z_far - z_near),
    rounded down after adding 0.5. Zero at the far plane, maximal at z_near."""
    if not 0 < z_near < z_far:
        raise ValueError("require 0 < z_near < z_far")
    if np.any(depth < z_near):
        log.debug("depth values below z_near clamped before saliency")
    z = np.clip(depth, z_near, None)
    scores = np.floor(255.0 * (z_near / z) * (z_far - z) / (z_far - z_near) + 0.5)
    return SaliencyImage(scores=np.clip(scores, 0.0, 255.0), tick=tick)


def fuse_saliency(s_image: SaliencyImage, s_depth: SaliencyImage,
                  k_image: float, k_depth: float) -> SaliencyImage:
    """Linear fusion S = k_i * S_i + k_d * S_d, clamped to [0, 255]."""
    if s_image.scores.shape != s_depth.scores.shape:
        raise ValueError("saliency map dimensions do not match")
    fused = k_image * s_image.scores + k_depth * s_depth.scores
    return SaliencyImage(scores=np.clip(fused, 0.0, 255.0), tick=s_image.tick)
