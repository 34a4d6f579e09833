"""Scripted-operator experiment harness: closed-loop trials, metric
computation, and paired method comparisons with CSV artifacts."""

from __future__ import annotations

import csv
import json
import math
import os
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .haptics import FeedbackForce
from .operator import OperatorModel, scripted_operator_step
from .pipeline import (METHOD_AMGPF, METHOD_GPF, Pipeline, PipelineParams,
                       TickRecord)
from .scenarios import Scenario
from .world import World

COLLISION_DEBOUNCE_S = 1.0
WAYPOINT_JITTER_M = 0.1


@dataclass(frozen=True)
class TrialMetrics:
    completion_time: float
    total_displacement: float
    average_speed: float
    collisions: int
    average_feedback_force: float
    dnf: bool = False

    def to_dict(self) -> dict:
        return {
            "completion_time_s": self.completion_time,
            "total_displacement_m": self.total_displacement,
            "average_speed_mps": self.average_speed,
            "collisions": self.collisions,
            "average_feedback_force_n": self.average_feedback_force,
            "dnf": self.dnf,
        }


@dataclass(frozen=True)
class TrialResult:
    scenario: str
    method: str
    seed: int
    metrics: TrialMetrics
    ticks: tuple[TickRecord, ...]


VIA_RADIUS = 0.35


class RouteTracker:
    """Waypoint progression with continuous-dwell bookkeeping.

    Legs alternate corridor staging points (reached within VIA_RADIUS)
    and working-area centers approached head-on; working-area credit
    accrues only while the footprint center stays in the rectangle and
    resets to zero on exit.
    """

    def __init__(self, scenario: Scenario, seed: int):
        self.scenario = scenario
        self.dwell_required = scenario.dwell_required
        rng = np.random.default_rng(seed)

        def jitter(point):
            jx, jy = rng.uniform(-WAYPOINT_JITTER_M, WAYPOINT_JITTER_M, size=2)
            return (point[0] + jx, point[1] + jy)

        self.legs = []  # (target point, kind, working-area index or None)
        for i, area_center in enumerate(scenario.route[:-1]):
            self.legs.append((jitter(scenario.staging[i]), "via", None))
            self.legs.append((jitter(area_center), "dwell", i))
        self.legs.append((scenario.route[-1], "goal", None))
        self.index = 0
        self.dwell = 0.0

    @property
    def done(self) -> bool:
        return self.index >= len(self.legs)

    @property
    def target(self):
        return self.legs[min(self.index, len(self.legs) - 1)][0]

    @property
    def dwell_progress(self) -> float:
        return self.dwell

    def advance(self, x: float, y: float, dt: float):
        if self.done:
            return
        target, kind, area_idx = self.legs[self.index]
        if kind == "via":
            if math.hypot(x - target[0], y - target[1]) <= VIA_RADIUS:
                self.index += 1
        elif kind == "dwell":
            rect = self.scenario.world.working_areas[area_idx].rect
            if rect.contains(x, y):
                self.dwell += dt
                if self.dwell >= self.dwell_required - 1e-9:
                    self.index += 1
                    self.dwell = 0.0
            else:
                self.dwell = 0.0
        else:
            goal = self.scenario.world.goal_region
            if goal is not None and goal.contains(x, y):
                self.index += 1


def run_trial(scenario: Scenario, method: str, operator: OperatorModel,
              seed: int, params: PipelineParams | None = None) -> TrialResult:
    """One closed-loop trial; deterministic in (scenario, method, operator,
    seed, params). Times out as a DNF at scenario.max_duration."""
    params = params or PipelineParams(tick_rate=scenario.tick_rate)
    pipeline = Pipeline(scenario.world, params, method)
    route = RouteTracker(scenario, seed)
    dt = params.dt
    max_ticks = int(round(scenario.max_duration * scenario.tick_rate))

    latency = deque([FeedbackForce()] * max(1, operator.reaction_latency),
                    maxlen=max(1, operator.reaction_latency))

    def command_fn(state, force):
        delayed = latency[0] if operator.reaction_latency > 0 else force
        latency.append(force)
        return scripted_operator_step(state, route.target, delayed, operator,
                                      params.control.v_max)

    ticks = []
    for _ in range(max_ticks):
        record = pipeline.tick(command_fn)
        ticks.append(record)
        route.advance(pipeline.state.x, pipeline.state.y, dt)
        if route.done:
            break

    metrics = compute_metrics(ticks, dt, dnf=not route.done)
    return TrialResult(scenario=scenario.name, method=method, seed=seed,
                       metrics=metrics, ticks=tuple(ticks))


def compute_metrics(ticks, dt: float, dnf: bool = False) -> TrialMetrics:
    """Trial metrics from a tick log. Collisions are debounced: a new
    event needs at least one second of collision-free ticks before it."""
    if not ticks:
        raise ValueError("empty tick log")
    completion = len(ticks) * dt
    displacement = 0.0
    prev = None
    for rec in ticks:
        if prev is not None:
            displacement += math.hypot(rec.x - prev.x, rec.y - prev.y)
        prev = rec
    collisions = 0
    clear_ticks = math.inf  # start-of-trial contact counts as an event
    debounce = int(round(COLLISION_DEBOUNCE_S / dt))
    for rec in ticks:
        if rec.colliding:
            if clear_ticks >= debounce:
                collisions += 1
            clear_ticks = 0
        else:
            clear_ticks += 1
    avg_force = float(np.mean([rec.force_norm for rec in ticks]))
    return TrialMetrics(
        completion_time=completion,
        total_displacement=displacement,
        average_speed=displacement / completion,
        collisions=collisions,
        average_feedback_force=avg_force,
        dnf=dnf,
    )


# ---------------------------------------------------------------------------
# Scripted command runs (reverse approach, replay)

def run_commands(world: World, commands, method: str,
                 params: PipelineParams | None = None) -> list[TickRecord]:
    """Drive the pipeline with a fixed raw-axis sequence."""
    params = params or PipelineParams()
    pipeline = Pipeline(world, params, method)
    out = []
    for axes in commands:
        out.append(pipeline.tick(lambda state, force, a=axes: a))
    return out


# ---------------------------------------------------------------------------
# CSV artifacts

_TICK_FIELDS = [
    "tick", "x", "y", "theta", "v", "omega",
    "axis_forward", "axis_angular", "cmd_forward", "cmd_angular",
    "force_forward", "force_lateral", "force_norm", "total_repulsion",
    "colliding", "visible_cells", "map_mean", "map_max", "obstacles",
]


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def tick_row(rec: TickRecord) -> list[str]:
    obstacles = ";".join(
        f"{o.obstacle_id}:{_fmt(o.distance)}:{_fmt(o.closing_speed)}:"
        f"{_fmt(o.repulsion)}:{_fmt(o.attentiveness)}:{_fmt(o.modulated)}:"
        f"{_fmt(o.weight)}"
        for o in rec.obstacles
    )
    return [
        _fmt(rec.tick), _fmt(rec.x), _fmt(rec.y), _fmt(rec.theta),
        _fmt(rec.v), _fmt(rec.omega),
        _fmt(rec.axis_forward), _fmt(rec.axis_angular),
        _fmt(rec.cmd_forward), _fmt(rec.cmd_angular),
        _fmt(rec.force_forward), _fmt(rec.force_lateral),
        _fmt(rec.force_norm), _fmt(rec.total_repulsion),
        _fmt(rec.colliding), _fmt(rec.visible_cells),
        _fmt(rec.map_mean), _fmt(rec.map_max), obstacles,
    ]


def write_ticks_csv(ticks, path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(_TICK_FIELDS)
        for rec in ticks:
            writer.writerow(tick_row(rec))


def write_metrics_json(metrics: TrialMetrics, path, **extra) -> None:
    payload = dict(extra)
    payload.update(metrics.to_dict())
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# Method comparison

@dataclass(frozen=True)
class ComparisonReport:
    trials: tuple[TrialResult, ...]
    means: dict          # method -> metric name -> pooled mean
    per_scenario: dict   # (scenario, method) -> metric name -> mean
    deltas: dict         # metric name -> amgpf - gpf and percent

    def summary(self) -> str:
        lines = ["method comparison (paired seeds)"]
        for method in (METHOD_AMGPF, METHOD_GPF):
            m = self.means[method]
            lines.append(
                f"  {method:6s} time={m['completion_time_s']:.1f}s "
                f"dist={m['total_displacement_m']:.1f}m "
                f"speed={m['average_speed_mps']:.3f}m/s "
                f"collisions={m['collisions']:.2f} "
                f"force={m['average_feedback_force_n']:.3f}N")
        for name, (diff, pct) in self.deltas.items():
            lines.append(f"  delta {name}: {diff:+.3f} ({pct:+.1f}%)")
        return "\n".join(lines)


_METRIC_KEYS = ["completion_time_s", "total_displacement_m", "average_speed_mps",
                "collisions", "average_feedback_force_n"]


def compare_methods(scenarios, operator: OperatorModel, seeds,
                    params: PipelineParams | None = None,
                    on_trial=None) -> ComparisonReport:
    """Paired A/B runs over every (scenario, seed): identical seeds and
    operator for both methods."""
    if not scenarios:
        raise ValueError("need at least one scenario")
    trials = []
    for scenario in scenarios:
        for seed in seeds:
            for method in (METHOD_AMGPF, METHOD_GPF):
                result = run_trial(scenario, method, operator, seed, params)
                trials.append(result)
                if on_trial is not None:
                    on_trial(result)

    def mean_of(subset):
        return {
            key: float(np.mean([t.metrics.to_dict()[key] for t in subset]))
            for key in _METRIC_KEYS
        }

    means = {
        method: mean_of([t for t in trials if t.method == method])
        for method in (METHOD_AMGPF, METHOD_GPF)
    }
    per_scenario = {
        (scenario.name, method): mean_of(
            [t for t in trials
             if t.method == method and t.scenario == scenario.name])
        for scenario in scenarios
        for method in (METHOD_AMGPF, METHOD_GPF)
    }
    deltas = {}
    for key in _METRIC_KEYS:
        diff = means[METHOD_AMGPF][key] - means[METHOD_GPF][key]
        base = means[METHOD_GPF][key]
        pct = 100.0 * diff / base if base != 0 else math.nan
        deltas[key] = (diff, pct)
    return ComparisonReport(trials=tuple(trials), means=means,
                            per_scenario=per_scenario, deltas=deltas)


def write_report_csv(report: ComparisonReport, path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["scenario", "method", "seed"] + _METRIC_KEYS + ["dnf"])
        for t in report.trials:
            d = t.metrics.to_dict()
            writer.writerow([t.scenario, t.method, t.seed]
                            + [_fmt(d[k]) for k in _METRIC_KEYS]
                            + [_fmt(t.metrics.dnf)])
        for method, m in report.means.items():
            writer.writerow(["pooled", method, ""]
                            + [_fmt(m[k]) for k in _METRIC_KEYS] + [""])
