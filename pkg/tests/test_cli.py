import json

import pytest
from click.testing import CliRunner

from attentive_teleop.cli import main
from attentive_teleop.world import (Box, Rect, RobotState, WorkingArea, World,
                                    save_world)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def quick_world(tmp_path):
    """A trivially completable world: goal just ahead, one obstacle off to
    the side, no working areas to dwell in."""
    world = World(
        obstacles=(Box(3.0, 0.2, 3.6, 0.8, 1.0),),
        bounds=Rect(0.0, 0.0, 8.0, 6.0),
        goal_region=Rect(2.6, 2.6, 3.4, 3.4),
        start_pose=RobotState(x=1.0, y=3.0, theta=0.0),
    )
    path = tmp_path / "quick.json"
    save_world(world, path)
    return path


class TestValidate:
    def test_valid_config_echoed(self, runner, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text('{"method": "gpf", "haptic": {"gamma": 0.5}}')
        result = runner.invoke(main, ["validate", str(cfg)])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["method"] == "gpf"
        assert doc["haptic"]["gamma"] == 0.5

    def test_missing_file_is_config_error(self, runner):
        result = runner.invoke(main, ["validate", "/does/not/exist.json"])
        assert result.exit_code == 2
        assert "error[config]" in result.output

    def test_gamma_constraint_message(self, runner, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text('{"haptic": {"gamma": 1.5}}')
        result = runner.invoke(main, ["validate", str(cfg)])
        assert result.exit_code == 2
        assert "gamma must be in (0, 1]" in result.output


class TestRun:
    def test_run_writes_artifacts(self, runner, quick_world, tmp_path):
        out = tmp_path / "out"
        result = runner.invoke(main, [
            "run", "--world", str(quick_world), "--method", "amgpf",
            "--seed", "7", "--out", str(out), "--override", "max_duration=8",
        ])
        assert result.exit_code == 0, result.output
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["method"] == "amgpf"
        assert metrics["dnf"] is False
        header = (out / "ticks.csv").read_text().splitlines()[0]
        assert header.startswith("tick,x,y,theta")

    def test_missing_world_is_config_error(self, runner):
        result = runner.invoke(main, ["run", "--world", "/absent.json"])
        assert result.exit_code == 2
        assert "error[config]" in result.output

    def test_dnf_exit_code(self, runner, quick_world, tmp_path):
        result = runner.invoke(main, [
            "run", "--world", str(quick_world), "--out", str(tmp_path / "o"),
            "--override", "max_duration=0.5",
        ])
        assert result.exit_code == 3
        assert "error[dnf]" in result.output

    def test_paired_methods_share_log_schema(self, runner, quick_world, tmp_path):
        outputs = {}
        for method in ("amgpf", "gpf"):
            out = tmp_path / method
            result = runner.invoke(main, [
                "run", "--world", str(quick_world), "--method", method,
                "--seed", "1", "--out", str(out),
                "--override", "max_duration=8",
            ])
            assert result.exit_code == 0, result.output
            outputs[method] = (out / "ticks.csv").read_text().splitlines()
        assert outputs["amgpf"][0] == outputs["gpf"][0]  # identical header
        assert len(outputs["amgpf"]) > 1 and len(outputs["gpf"]) > 1


class TestExportWorlds:
    def test_exports_seven_worlds(self, runner, tmp_path):
        out = tmp_path / "worlds"
        result = runner.invoke(main, ["export-worlds", "--out", str(out)])
        assert result.exit_code == 0
        files = sorted(out.glob("*.json"))
        assert len(files) == 7
        doc = json.loads(files[0].read_text())
        assert doc["schema_version"] == 1
        assert len(doc["working_areas"]) == 3
        assert doc["goal"] is not None


class TestDebugFrame:
    def test_writes_stage_dumps(self, runner, quick_world, tmp_path):
        out = tmp_path / "dbg"
        result = runner.invoke(main, [
            "debug-frame", "--world", str(quick_world), "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        for name in ("rgb.png", "depth.png", "saliency_image.png",
                     "saliency_depth.png", "saliency_fused.png",
                     "topdown_saliency.png", "attentiveness.png"):
            assert (out / name).exists(), name

    def test_pose_outside_bounds_rejected(self, runner, quick_world, tmp_path):
        result = runner.invoke(main, [
            "debug-frame", "--world", str(quick_world),
            "--out", str(tmp_path / "dbg"), "--pose", "50,50,0",
        ])
        assert result.exit_code == 2
        assert "bounds" in result.output

    def test_malformed_pose_rejected(self, runner, quick_world, tmp_path):
        result = runner.invoke(main, [
            "debug-frame", "--world", str(quick_world),
            "--out", str(tmp_path / "dbg"), "--pose", "1;2;3",
        ])
        assert result.exit_code == 2
