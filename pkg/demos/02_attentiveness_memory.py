"""Drive the robot forward through a corridor and watch the attentiveness
map fill in: cells the camera dwells on are encoded, cells out of view decay.

Saves heatmap snapshots to demos/output/ and prints map statistics.

Run:  python3 demos/02_attentiveness_memory.py
"""
from pathlib import Path

from attentive_teleop.artifacts import save_attentiveness_png
from attentive_teleop.pipeline import Pipeline, PipelineParams
from attentive_teleop.scenarios import build_scenario

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

scenario = build_scenario(1)
pipeline = Pipeline(scenario.world, PipelineParams(), method="amgpf")

SNAPSHOTS = {1, 20, 50, 100}
for i in range(1, 101):
    rec = pipeline.tick(lambda state, force: (0.5, 0.0))
    if i in SNAPSHOTS:
        save_attentiveness_png(pipeline.map, out / f"02_map_tick{i:03d}.png")
        seen = (pipeline.map.values > 0).sum()
        print(f"tick {i:3d}: robot x={rec.x:5.2f} m  "
              f"cells seen={seen:4d}  map max={rec.map_max:.3f}  "
              f"mean={rec.map_mean:.4f}")

# Where did attention concentrate?
import numpy as np
grid = pipeline.grid
i, j = np.unravel_index(pipeline.map.values.argmax(), pipeline.map.values.shape)
wx = grid.origin[0] + (int(i) + 0.5) * grid.resolution
wy = grid.origin[1] + (int(j) + 0.5) * grid.resolution
print(f"most-attended cell: world ({wx:.2f}, {wy:.2f}) m, "
      f"attentiveness {pipeline.map.values.max():.3f}")
print(f"wrote {len(SNAPSHOTS)} heatmaps to {out}")
