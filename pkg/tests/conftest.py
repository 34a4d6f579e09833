import numpy as np
import pytest

from attentive_teleop.camera import CameraModel, CameraMount, mounted_camera
from attentive_teleop.world import Box, Rect, RobotState, World


@pytest.fixture
def simple_world():
    """One box ahead of the robot inside a small arena."""
    return World(
        obstacles=(Box(4.0, 2.5, 5.0, 3.5, 1.2, (200, 50, 40)),),
        bounds=Rect(0.0, 0.0, 10.0, 6.0),
        start_pose=RobotState(x=1.5, y=3.0, theta=0.0),
    )


@pytest.fixture
def tiny_camera():
    return CameraModel(fx=40.0, fy=40.0, cx=20.0, cy=15.0, width=40, height=30)


@pytest.fixture
def head_camera(simple_world):
    return mounted_camera(simple_world.start_pose, CameraMount())


def random_rotation(rng):
    """Uniform-ish random rotation matrix via QR decomposition."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return q
