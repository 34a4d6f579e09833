"""Working-memory style attentiveness map: visible cells encode toward 1
in proportion to their attention rate, everything else decays toward 0."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mapping import GridSpec, TopDownSaliency

# Per-tick defaults documented against the 10 Hz pipeline rate. Changing the
# tick rate requires rescaling: D' = 1 - (1 - D)^(dt'/dt).
DEFAULT_ENCODING_RATE = 0.4
DEFAULT_DECAY_RATE = 0.01


@dataclass(frozen=True)
class MemoryParams:
    encoding_rate: float = DEFAULT_ENCODING_RATE  # r in (0, 1]
    decay_rate: float = DEFAULT_DECAY_RATE        # D in [0, 1]

    def __post_init__(self):
        if not 0 < self.encoding_rate <= 1:
            raise ValueError("encoding_rate must be in (0, 1]")
        if not 0 <= self.decay_rate <= 1:
            raise ValueError("decay_rate must be in [0, 1]")


@dataclass(frozen=True)
class AttentivenessMap:
    grid: GridSpec
    values: np.ndarray  # (width, height) float in [0, 1]
    tick: int = 0

    def __post_init__(self):
        if self.values.shape != (self.grid.width, self.grid.height):
            raise ValueError("attentiveness array does not match the grid spec")

    @classmethod
    def zeros(cls, grid: GridSpec) -> "AttentivenessMap":
        return cls(grid=grid, values=np.zeros((grid.width, grid.height)))

    def at(self, x: float, y: float) -> float:
        """Attentiveness at a world position; 0 outside the grid."""
        i, j = self.grid.cell_of(x, y)
        if not self.grid.in_grid(i, j):
            return 0.0
        return float(self.values[i, j])


def attention_rates(visible: TopDownSaliency) -> dict:
    """Normalize visible-cell saliency into rates summing to 1.

    An all-zero view yields all-zero rates: no stimulus, no encoding.
    """
    total = sum(visible.cells.values())
    if total <= 0:
        return {cell: 0.0 for cell in visible.cells}
    return {cell: s / total for cell, s in visible.cells.items()}


def encode(amap: AttentivenessMap, rates: dict, encoding_rate: float) -> AttentivenessMap:
    """Exponential-growth encoding of visible cells toward saturation."""
    values = amap.values.copy()
    for (i, j), c in rates.items():
        values[i, j] += c * encoding_rate * (1.0 - values[i, j])
    return AttentivenessMap(grid=amap.grid, values=values, tick=amap.tick)


def decay(amap: AttentivenessMap, visible_cells, decay_rate: float) -> AttentivenessMap:
    """Exponential decay of every cell not currently visible."""
    mask = np.ones_like(amap.values, dtype=bool)
    for i, j in visible_cells:
        mask[i, j] = False
    values = amap.values.copy()
    values[mask] *= (1.0 - decay_rate)
    return AttentivenessMap(grid=amap.grid, values=values, tick=amap.tick)


def update(amap: AttentivenessMap, visible: TopDownSaliency,
           params: MemoryParams = MemoryParams()) -> AttentivenessMap:
    """One memory tick: encode the visible cells, decay the rest.

    Every cell is touched by exactly one of the two rules.
    """
    for i, j in visible.cells:
        if not amap.grid.in_grid(i, j):
            raise ValueError(f"visible cell {(i, j)} outside the attentiveness grid")
    rates = attention_rates(visible)
    out = encode(amap, rates, params.encoding_rate)
    out = decay(out, visible.cells.keys(), params.decay_rate)
    return AttentivenessMap(grid=out.grid, values=out.values, tick=amap.tick + 1)


def rescale_decay(decay_rate: float, dt_ratio: float) -> float:
    """Convert a per-tick decay rate to a different tick duration."""
    return 1.0 - (1.0 - decay_rate) ** dt_ratio


# ---------------------------------------------------------------------------
# Binary snapshot format: magic, header (grid + tick), row-major float64.

_MAGIC = b"ATTMAP01"


def save_map(amap: AttentivenessMap, path) -> None:
    import struct
    with open(path, "wb") as f:
        f.write(_MAGIC)
        f.write(struct.pack("<ddddqq",
                            amap.grid.resolution, amap.grid.origin[0],
                            amap.grid.origin[1], 0.0,
                            amap.grid.width, amap.grid.height))
        f.write(struct.pack("<q", amap.tick))
        f.write(np.ascontiguousarray(amap.values, dtype="<f8").tobytes())


def load_map(path) -> AttentivenessMap:
    import struct
    with open(path, "rb") as f:
        if f.read(8) != _MAGIC:
            raise ValueError("not an attentiveness map snapshot")
        resolution, ox, oy, _pad, width, height = struct.unpack(
            "<ddddqq", f.read(8 * 6))
        (tick,) = struct.unpack("<q", f.read(8))
        grid = GridSpec(resolution=resolution, origin=(ox, oy),
                        width=int(width), height=int(height))
        values = np.frombuffer(f.read(width * height * 8), dtype="<f8")
    return AttentivenessMap(grid=grid,
                            values=values.reshape(width, height).copy(),
                            tick=int(tick))
