"""Built-in desk-scale scenarios: seven corridor worlds with the same
linear structure (three working areas next to obstacles, then a goal) and
permuted obstacle placement, plus a reverse-approach world for testing
feedback when an obstacle is never seen."""

from __future__ import annotations

from dataclasses import dataclass, field

from .world import Box, Rect, RobotState, WorkingArea, World

OBSTACLE_COLORS = [
    (200, 50, 40),
    (40, 90, 200),
    (230, 170, 30),
    (40, 160, 70),
]

DWELL_REQUIRED = 15.0
WORK_W = 0.8   # working area size along the corridor
WORK_D = 1.0   # working area depth away from the obstacle face
CORRIDOR_Y = 3.0


@dataclass(frozen=True)
class Scenario:
    name: str
    world: World
    route: tuple[tuple[float, float], ...]    # working-area centers then goal
    staging: tuple[tuple[float, float], ...]  # corridor points fronting each area
    dwell_required: float = DWELL_REQUIRED
    tick_rate: float = 10.0
    max_duration: float = 240.0


def _station(x: float, side: int, color) -> tuple[Box, WorkingArea, tuple]:
    """One obstacle off the corridor with its working area in front of it.

    The robot turns off the corridor and approaches the obstacle head-on;
    the area center sits 0.5 m from the obstacle face, where the
    unmodulated field saturates. Returns (box, area, staging point).
    """
    face = CORRIDOR_Y + side * 1.6
    if side > 0:
        box = Box(x, face, x + WORK_W, face + 0.8, 1.2, color)
        area = Rect(x, face - WORK_D, x + WORK_W, face)
    else:
        box = Box(x, face - 0.8, x + WORK_W, face, 1.2, color)
        area = Rect(x, face, x + WORK_W, face + WORK_D)
    staging = (x + WORK_W / 2, CORRIDOR_Y)
    return box, WorkingArea(area, DWELL_REQUIRED), staging


# (station x positions, sides, distractor x) per environment; same corridor
# topology throughout, only placement varies.
_LAYOUTS = [
    ((3.0, 6.5, 10.0), (+1, -1, +1), 8.3),
    ((3.0, 6.5, 10.0), (-1, +1, -1), 4.8),
    ((3.5, 6.0, 10.5), (+1, +1, -1), 8.2),
    ((2.8, 7.0, 10.2), (-1, -1, +1), 4.9),
    ((3.2, 6.8, 9.8), (+1, -1, -1), 5.0),
    ((3.4, 6.2, 10.4), (-1, +1, +1), 8.4),
    ((3.0, 7.2, 10.6), (+1, +1, +1), 5.2),
]


def build_scenario(index: int) -> Scenario:
    if not 0 <= index < len(_LAYOUTS):
        raise ValueError(f"scenario index must be in [0, {len(_LAYOUTS)})")
    xs, sides, distractor_x = _LAYOUTS[index]
    boxes = []
    areas = []
    route = []
    staging = []
    for i, (x, side) in enumerate(zip(xs, sides)):
        box, area, stage = _station(x, side, OBSTACLE_COLORS[i % len(OBSTACLE_COLORS)])
        boxes.append(box)
        areas.append(area)
        route.append(area.rect.center)
        staging.append(stage)
    # A distractor obstacle opposite the middle station, off the route.
    d_side = -sides[1]
    boxes.append(Box(distractor_x, CORRIDOR_Y + d_side * 1.7 - 0.3,
                     distractor_x + 0.6, CORRIDOR_Y + d_side * 1.7 + 0.3,
                     1.0, OBSTACLE_COLORS[3]))
    goal = Rect(12.6, CORRIDOR_Y - 0.5, 13.6, CORRIDOR_Y + 0.5)
    route.append(goal.center)
    world = World(
        obstacles=tuple(boxes),
        bounds=Rect(0.0, 0.0, 14.0, 6.0),
        working_areas=tuple(areas),
        goal_region=goal,
        start_pose=RobotState(x=1.0, y=CORRIDOR_Y, theta=0.0),
    )
    return Scenario(name=f"corridor-{index + 1}", world=world,
                    route=tuple(route), staging=tuple(staging))


def all_scenarios() -> list[Scenario]:
    return [build_scenario(i) for i in range(len(_LAYOUTS))]


def reverse_approach_world() -> World:
    """Robot facing +x with an obstacle behind it; backing up approaches
    the obstacle without it ever entering the camera view."""
    return World(
        obstacles=(Box(0.6, 2.6, 1.4, 3.4, 1.2, OBSTACLE_COLORS[0]),),
        bounds=Rect(0.0, 0.0, 14.0, 6.0),
        start_pose=RobotState(x=5.0, y=3.0, theta=0.0),
    )
