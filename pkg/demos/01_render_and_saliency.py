"""Render one RGB-D frame from the robot's head camera and walk it through
the saliency stack, saving each stage as a PNG under demos/output/.

Run:  python3 demos/01_render_and_saliency.py
"""
from pathlib import Path

from attentive_teleop.artifacts import save_depth_png, save_gray_png, save_rgb_png
from attentive_teleop.camera import CameraModel, CameraMount, mounted_camera
from attentive_teleop.render import render_rgbd
from attentive_teleop.saliency import (SaliencyParams, depth_saliency,
                                       fuse_saliency, image_saliency)
from attentive_teleop.scenarios import build_scenario

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

scenario = build_scenario(1)
world = scenario.world
camera = mounted_camera(world.start_pose, CameraMount(), CameraModel())

frame = render_rgbd(world, camera)
save_rgb_png(frame.rgb, out / "01_rgb.png")
save_depth_png(frame.depth, out / "01_depth.png", camera.z_near, camera.z_far)

params = SaliencyParams()
s_img = image_saliency(frame.rgb, params)
s_dep = depth_saliency(frame.depth, camera.z_near, camera.z_far)
fused = fuse_saliency(s_img, s_dep, params.k_image, params.k_depth)
save_gray_png(s_img.scores, out / "01_saliency_image.png", 0, 255)
save_gray_png(s_dep.scores.astype(float), out / "01_saliency_depth.png", 0, 255)
save_gray_png(fused.scores, out / "01_saliency_fused.png", 0, 255)

print(f"world: {scenario.name}  ({len(world.obstacles)} obstacles)")
print(f"frame: {frame.rgb.shape[1]}x{frame.rgb.shape[0]}, "
      f"depth range {frame.depth.min():.2f}..{frame.depth.max():.2f} m")
print(f"image saliency peak {s_img.scores.max():.1f}, "
      f"depth saliency peak {int(s_dep.scores.max())}, "
      f"fused peak {fused.scores.max():.1f}")
print(f"wrote 5 PNGs to {out}")
