"""Command-line entry point: single trials, A/B comparison suites,
single-frame debug dumps, and config validation.

Exit codes: 0 success, 2 config error, 3 did-not-finish.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click

from . import scenarios as scenario_lib
from .artifacts import (save_attentiveness_png, save_depth_png, save_gray_png,
                        save_rgb_png, save_topdown_saliency_png)
from .config import (ConfigError, RunConfig, apply_overrides, config_to_dict,
                     load_config, parse_config)
from .harness import (compare_methods, run_trial, write_metrics_json,
                      write_report_csv, write_ticks_csv)
from .pipeline import Pipeline
from .scenarios import Scenario
from .world import RobotState, load_world, save_world

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DNF = 3


def _fail(code: int, kind: str, message: str):
    click.echo(f"error[{kind}]: {message}", err=True)
    sys.exit(code)


def _load_run_config(config_path, world, method, seed, out, overrides) -> RunConfig:
    data = {}
    if config_path:
        try:
            with open(config_path) as f:
                data = json.load(f)
        except FileNotFoundError:
            _fail(EXIT_CONFIG, "config", f"config file not found: {config_path}")
        except json.JSONDecodeError as exc:
            _fail(EXIT_CONFIG, "config", f"config is not valid JSON: {exc}")
    if world:
        data["world"] = world
    if method:
        data["method"] = method
    if seed is not None:
        data["seed"] = seed
    if out:
        data["out_dir"] = out
    try:
        data = apply_overrides(data, list(overrides))
        return parse_config(data)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, "config", str(exc))


def _scenario_for(config: RunConfig) -> Scenario:
    if config.world_path is None:
        _fail(EXIT_CONFIG, "config", "no world file given (use --world)")
    path = Path(config.world_path)
    if not path.exists():
        _fail(EXIT_CONFIG, "config", f"world file not found: {path}")
    world = load_world(path)
    if world.goal_region is None:
        _fail(EXIT_CONFIG, "config",
              f"world {path} has no goal region; cannot run a trial")
    route = tuple(w.rect.center for w in world.working_areas)
    staging = tuple(_staging_point(world, w) for w in world.working_areas)
    return Scenario(name=path.stem, world=world,
                    route=route + (world.goal_region.center,),
                    staging=staging, max_duration=config.max_duration,
                    tick_rate=config.pipeline.tick_rate)


def _staging_point(world, area):
    """Corridor-side point fronting a working area: the area center pushed
    away from its nearest obstacle by the area depth."""
    cx, cy = area.rect.center
    nearest = min(world.obstacles, key=lambda b: b.distance(cx, cy),
                  default=None)
    if nearest is None:
        return (cx, cy)
    px, py = nearest.closest_point(cx, cy)
    dx, dy = cx - px, cy - py
    norm = math.hypot(dx, dy)
    if norm == 0:
        return (cx, cy)
    depth = max(area.rect.xmax - area.rect.xmin, area.rect.ymax - area.rect.ymin)
    return (cx + dx / norm * depth, cy + dy / norm * depth)


@click.group()
def main():
    """Attentiveness-modulated haptic teleoperation toolkit."""


_common = [
    click.option("--config", "config_path", type=click.Path(), default=None,
                 help="JSON run config; flags override it."),
    click.option("--world", type=click.Path(), default=None),
    click.option("--method", type=click.Choice(["amgpf", "gpf"]), default=None),
    click.option("--seed", type=int, default=None),
    click.option("--out", type=click.Path(), default=None),
    click.option("--override", "overrides", multiple=True,
                 help="Dotted key=value config override, e.g. haptic.gamma=0.5"),
]


def common_options(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


@main.command()
@common_options
def run(config_path, world, method, seed, out, overrides):
    """Run one scripted-operator trial and write metrics.json + ticks.csv."""
    config = _load_run_config(config_path, world, method, seed, out, overrides)
    scenario = _scenario_for(config)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = run_trial(scenario, config.method, config.operator, config.seed,
                       config.pipeline)
    write_ticks_csv(result.ticks, out_dir / "ticks.csv")
    write_metrics_json(result.metrics, out_dir / "metrics.json",
                       scenario=result.scenario, method=result.method,
                       seed=result.seed)
    click.echo(f"{result.scenario} [{result.method}] "
               f"time={result.metrics.completion_time:.1f}s "
               f"force={result.metrics.average_feedback_force:.2f}N "
               f"collisions={result.metrics.collisions}")
    if result.metrics.dnf:
        _fail(EXIT_DNF, "dnf", "trial hit max_duration before the goal")


@main.command()
@common_options
@click.option("--seeds", default="1,2,3", show_default=True,
              help="Comma-separated seed list for repetitions.")
@click.option("--worlds-dir", type=click.Path(), default=None,
              help="Directory of world JSON files; defaults to the built-in "
                   "seven corridor scenarios.")
def compare(config_path, world, method, seed, out, overrides, seeds, worlds_dir):
    """Paired AMGPF-vs-GPF suite; writes report.csv and per-trial artifacts."""
    config = _load_run_config(config_path, world, method, seed, out, overrides)
    try:
        seed_list = [int(s) for s in seeds.split(",") if s.strip()]
    except ValueError:
        _fail(EXIT_CONFIG, "config", f"bad --seeds list: {seeds!r}")
    if worlds_dir:
        paths = sorted(Path(worlds_dir).glob("*.json"))
        if not paths:
            _fail(EXIT_CONFIG, "config", f"no world files in {worlds_dir}")
        scens = [_scenario_for(
            RunConfig(world_path=str(p), pipeline=config.pipeline,
                      max_duration=config.max_duration)) for p in paths]
    else:
        scens = scenario_lib.all_scenarios()
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def on_trial(result):
        click.echo(f"  {result.scenario} [{result.method}] seed={result.seed} "
                   f"time={result.metrics.completion_time:.1f}s "
                   f"force={result.metrics.average_feedback_force:.2f}N")
        trial_dir = out_dir / f"{result.scenario}_{result.method}_s{result.seed}"
        trial_dir.mkdir(exist_ok=True)
        write_ticks_csv(result.ticks, trial_dir / "ticks.csv")
        write_metrics_json(result.metrics, trial_dir / "metrics.json",
                           scenario=result.scenario, method=result.method,
                           seed=result.seed)

    try:
        report = compare_methods(scens, config.operator, seed_list,
                                 config.pipeline, on_trial=on_trial)
    except KeyboardInterrupt:
        _fail(EXIT_DNF, "interrupted", "comparison interrupted; partial "
              "trial artifacts were flushed")
    write_report_csv(report, out_dir / "report.csv")
    (out_dir / "summary.txt").write_text(report.summary() + "\n")
    click.echo(report.summary())


@main.command("debug-frame")
@common_options
@click.option("--pose", default=None,
              help="x,y,theta robot pose; defaults to the world start pose.")
def debug_frame(config_path, world, method, seed, out, overrides, pose):
    """Dump every pipeline stage for a single tick at a given pose."""
    config = _load_run_config(config_path, world, method, seed, out, overrides)
    if config.world_path is None:
        _fail(EXIT_CONFIG, "config", "no world file given (use --world)")
    if not Path(config.world_path).exists():
        _fail(EXIT_CONFIG, "config", f"world file not found: {config.world_path}")
    w = load_world(config.world_path)
    if pose:
        try:
            x, y, theta = (float(v) for v in pose.split(","))
        except ValueError:
            _fail(EXIT_CONFIG, "config", f"bad --pose (want x,y,theta): {pose!r}")
        start = RobotState(x=x, y=y, theta=theta,
                           footprint_radius=w.start_pose.footprint_radius,
                           body_height=w.start_pose.body_height)
    else:
        start = w.start_pose
    if not w.bounds.contains(start.x, start.y):
        _fail(EXIT_CONFIG, "config", "pose outside world bounds")

    from dataclasses import replace as dc_replace
    w = dc_replace(w, start_pose=start)
    pipeline = Pipeline(w, config.pipeline, config.method)
    pipeline.tick(lambda state, force: (0.0, 0.0))

    from .mapping import project_visible_cells
    from .saliency import depth_saliency, fuse_saliency, image_saliency
    frame = pipeline.last_frame
    p = config.pipeline
    s_img = image_saliency(frame.rgb, p.saliency)
    s_dep = depth_saliency(frame.depth, frame.camera.z_near, frame.camera.z_far)
    fused = fuse_saliency(s_img, s_dep, p.saliency.k_image, p.saliency.k_depth)
    topdown = project_visible_cells(frame, fused, pipeline.grid,
                                    start.body_height, p.pixel_stride)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_rgb_png(frame.rgb, out_dir / "rgb.png")
    save_depth_png(frame.depth, out_dir / "depth.png",
                   frame.camera.z_near, frame.camera.z_far)
    save_gray_png(s_img.scores, out_dir / "saliency_image.png")
    save_gray_png(s_dep.scores, out_dir / "saliency_depth.png")
    save_gray_png(fused.scores, out_dir / "saliency_fused.png")
    save_topdown_saliency_png(topdown, pipeline.grid,
                              out_dir / "topdown_saliency.png")
    save_attentiveness_png(pipeline.map, out_dir / "attentiveness.png")
    click.echo(f"wrote 7 artifacts to {out_dir}")


@main.command()
@click.argument("config_file", type=click.Path())
def validate(config_file):
    """Validate a config file and echo the fully-resolved document."""
    try:
        config = load_config(config_file)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, "config", str(exc))
    click.echo(json.dumps(config_to_dict(config), indent=2, sort_keys=True))


@main.command("export-worlds")
@click.option("--out", type=click.Path(), default="worlds", show_default=True)
def export_worlds(out):
    """Write the seven built-in corridor worlds as JSON files."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for scenario in scenario_lib.all_scenarios():
        save_world(scenario.world, out_dir / f"{scenario.name}.json")
    click.echo(f"wrote {len(scenario_lib.all_scenarios())} worlds to {out_dir}")


if __name__ == "__main__":
    main()
