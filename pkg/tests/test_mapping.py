import numpy as np
import pytest

from attentive_teleop.camera import CameraMount, mounted_camera
from attentive_teleop.mapping import (GridSpec, project_visible_cells,
                                      reproject_pixel)
from attentive_teleop.render import render_rgbd
from attentive_teleop.saliency import SaliencyImage
from attentive_teleop.world import Rect, RobotState


class TestGridSpec:
    def test_covering_rounds_up(self):
        grid = GridSpec.covering(Rect(0, 0, 1.1, 0.9), resolution=0.25)
        assert (grid.width, grid.height) == (5, 4)
        assert grid.origin == (0.0, 0.0)

    def test_cell_of_floor_semantics(self):
        grid = GridSpec(resolution=0.5, origin=(1.0, 2.0), width=4, height=4)
        assert grid.cell_of(1.0, 2.0) == (0, 0)
        assert grid.cell_of(1.49, 2.99) == (0, 1)
        assert grid.cell_of(0.9, 2.0) == (-1, 0)

    def test_in_grid(self):
        grid = GridSpec(width=3, height=2)
        assert grid.in_grid(0, 0) and grid.in_grid(2, 1)
        assert not grid.in_grid(3, 0) and not grid.in_grid(0, -1)

    def test_rejects_bad_resolution(self):
        with pytest.raises(ValueError):
            GridSpec(resolution=0.0)


class TestReprojectPixel:
    def test_inverse_of_project(self, head_camera):
        rng = np.random.default_rng(10)
        for _ in range(200):
            p_cam = np.array([rng.uniform(-2, 2), rng.uniform(-2, 2),
                              rng.uniform(0.5, 8.0)])
            p_w = head_camera.camera_to_world(p_cam)
            u, v, z = head_camera.project(p_w)
            back = reproject_pixel(head_camera, u, v, z)
            assert np.allclose(back, p_w, atol=1e-9)

    def test_rejects_nonpositive_depth(self, head_camera):
        with pytest.raises(ValueError):
            reproject_pixel(head_camera, 10, 10, 0.0)


class TestProjectVisibleCells:
    def _project(self, world, grid, stride, saliency_value=100.0):
        cam = mounted_camera(world.start_pose, CameraMount())
        frame = render_rgbd(world, cam)
        sal = SaliencyImage(scores=np.full(frame.depth.shape, saliency_value))
        return frame, project_visible_cells(frame, sal, grid,
                                            world.start_pose.body_height, stride)

    def test_matches_per_pixel_oracle(self, simple_world):
        """Stride-1 output equals a plain per-pixel reprojection loop."""
        grid = GridSpec.covering(simple_world.bounds, 0.25)
        cam = mounted_camera(simple_world.start_pose, CameraMount())
        frame = render_rgbd(simple_world, cam)
        rng = np.random.default_rng(11)
        sal = SaliencyImage(scores=rng.uniform(0, 255, frame.depth.shape))
        out = project_visible_cells(frame, sal, grid, 1.0, stride=1)

        expected = {}
        for v in range(cam.height):
            for u in range(cam.width):
                z = frame.depth[v, u]
                if z >= cam.z_far:
                    continue
                p = reproject_pixel(cam, float(u), float(v), float(z))
                if p[2] > 1.0 or p[2] < -0.05:
                    continue
                cell = grid.cell_of(p[0], p[1])
                if not grid.in_grid(*cell):
                    continue
                s = float(sal.scores[v, u])
                expected[cell] = min(expected.get(cell, np.inf), s)
        assert set(out.cells) == set(expected)
        for cell, s in expected.items():
            assert out.cells[cell] == pytest.approx(s, rel=1e-12)

    def test_min_aggregation_is_conservative(self, simple_world):
        grid = GridSpec.covering(simple_world.bounds, 0.25)
        cam = mounted_camera(simple_world.start_pose, CameraMount())
        frame = render_rgbd(simple_world, cam)
        low = SaliencyImage(scores=np.full(frame.depth.shape, 10.0))
        high = SaliencyImage(scores=np.full(frame.depth.shape, 200.0))
        out_low = project_visible_cells(frame, low, grid, 1.0)
        out_high = project_visible_cells(frame, high, grid, 1.0)
        assert set(out_low.cells) == set(out_high.cells)
        assert all(v == 10.0 for v in out_low.cells.values())

    def test_stride_subsets_visible_cells(self, simple_world):
        grid = GridSpec.covering(simple_world.bounds, 0.25)
        _, out1 = self._project(simple_world, grid, stride=1)
        _, out4 = self._project(simple_world, grid, stride=4)
        assert set(out4.cells) <= set(out1.cells)
        assert len(out4.cells) > 0

    def test_obstacle_cells_are_seen(self, simple_world):
        grid = GridSpec.covering(simple_world.bounds, 0.25)
        _, out = self._project(simple_world, grid, stride=2)
        # The facing edge of the box at x=4, y in [2.5, 3.5].
        face_cell = grid.cell_of(4.01, 3.0)
        assert face_cell in out.cells

    def test_cells_behind_robot_not_seen(self, simple_world):
        grid = GridSpec.covering(simple_world.bounds, 0.25)
        _, out = self._project(simple_world, grid, stride=2)
        behind = grid.cell_of(0.5, 3.0)  # robot at x=1.5 facing +x
        assert behind not in out.cells

    def test_height_filter_drops_tall_surfaces(self, simple_world):
        grid = GridSpec.covering(simple_world.bounds, 0.25)
        cam = mounted_camera(simple_world.start_pose, CameraMount())
        frame = render_rgbd(simple_world, cam)
        sal = SaliencyImage(scores=np.full(frame.depth.shape, 50.0))
        # Lowering the height cutoff can only discard reprojected points,
        # so the visible-cell set shrinks monotonically.
        out_tall = project_visible_cells(frame, sal, grid, 1.0, stride=1)
        out_low = project_visible_cells(frame, sal, grid, 0.05, stride=1)
        assert set(out_low.cells) <= set(out_tall.cells)
        assert len(out_low.cells) > 0
        # A cutoff below the ground tolerance rejects even the floor.
        out_none = project_visible_cells(frame, sal, grid, -0.06, stride=1)
        assert len(out_none.cells) == 0

    def test_misaligned_saliency_raises(self, simple_world):
        grid = GridSpec.covering(simple_world.bounds, 0.25)
        cam = mounted_camera(simple_world.start_pose, CameraMount())
        frame = render_rgbd(simple_world, cam)
        sal = SaliencyImage(scores=np.zeros((10, 10)))
        with pytest.raises(ValueError, match="aligned"):
            project_visible_cells(frame, sal, grid, 1.0)

    def test_invalid_stride(self, simple_world):
        grid = GridSpec.covering(simple_world.bounds, 0.25)
        cam = mounted_camera(simple_world.start_pose, CameraMount())
        frame = render_rgbd(simple_world, cam)
        sal = SaliencyImage(scores=np.zeros(frame.depth.shape))
        with pytest.raises(ValueError):
            project_visible_cells(frame, sal, grid, 1.0, stride=0)
