"""Per-robot sensor frames: four quadrant nearest-neighbor readings + light.

Quadrants are centered on the body axes (front spans bearings [-45, 45)
degrees, then left, back, right, each 90 degrees). A quadrant with no
neighbor within 2 m reads the out-of-range sentinel (2.01, 0). Bearings on
a quadrant boundary go to the counterclockwise quadrant.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from swarmtaxis.fields import G_MAX, ScalarField, sample, sample_many
from swarmtaxis.simulator import WorldState, wrap_angle

SENSOR_RANGE = 2.0
SENSOR_DEFAULT = 2.01  # distance reported for an empty quadrant

# quadrant index by increasing bearing: 0 front, 1 left, 2 back, 3 right;
# frames are ordered front, back, left, right.
_FRAME_ORDER = (0, 2, 1, 3)


class QuadrantReading(NamedTuple):
    distance: float
    heading: float  # bearing of the neighbor in the robot's frame, (-pi, pi]


class SensorFrame(NamedTuple):
    quadrants: tuple  # 4 QuadrantReadings: front, back, left, right
    light: float


def _quadrant_index(bearing):
    """0 front, 1 left, 2 back, 3 right; boundary bearings go counterclockwise."""
    return np.mod(np.floor((bearing + np.pi / 4.0) / (np.pi / 2.0)), 4).astype(np.int64)


def sense(world: WorldState, robot_index: int, field: ScalarField) -> SensorFrame:
    """Sensor frame for one robot (reference implementation, non-vectorized)."""
    pose = world.pose
    n = pose.shape[0]
    xi, yi, hi = pose[robot_index]
    best = [(SENSOR_DEFAULT, 0.0)] * 4  # indexed by _quadrant_index
    for j in range(n):
        if j == robot_index:
            continue
        dx = pose[j, 0] - xi
        dy = pose[j, 1] - yi
        d = float(np.hypot(dx, dy))
        if d > SENSOR_RANGE:
            continue
        bearing = float(wrap_angle(np.arctan2(dy, dx) - hi))
        q = int(_quadrant_index(bearing))
        if d < best[q][0]:
            best[q] = (d, bearing)
    quadrants = tuple(QuadrantReading(*best[q]) for q in _FRAME_ORDER)
    return SensorFrame(quadrants=quadrants, light=sample(field, (xi, yi)))


def sense_all(world: WorldState, field: ScalarField, return_pairwise: bool = False):
    """Vectorized frames for the whole swarm.

    Returns (dist, theta, light): dist and theta are (n, 4) in frame order
    front, back, left, right; light is (n,). With ``return_pairwise`` the
    (n, n) center-distance matrix is appended (shared with the order metric).
    """
    pose = world.pose
    n = pose.shape[0]
    light = sample_many(field, pose[:, 0], pose[:, 1])
    dist = np.full((n, 4), SENSOR_DEFAULT)
    theta = np.zeros((n, 4))
    d = np.zeros((n, n))
    if n > 1:
        dx = pose[:, 0][None, :] - pose[:, 0][:, None]  # [i, j] = j relative to i
        dy = pose[:, 1][None, :] - pose[:, 1][:, None]
        d = np.hypot(dx, dy)
        bearing = wrap_angle(np.arctan2(dy, dx) - pose[:, 2][:, None])
        q = _quadrant_index(bearing)
        in_range = d <= SENSOR_RANGE
        np.fill_diagonal(in_range, False)
        for k, qi in enumerate(_FRAME_ORDER):
            masked = np.where(in_range & (q == qi), d, np.inf)
            j_best = np.argmin(masked, axis=1)
            rows = np.arange(n)
            found = np.isfinite(masked[rows, j_best])
            dist[found, k] = masked[rows, j_best][found]
            theta[found, k] = bearing[rows, j_best][found]
    if return_pairwise:
        return dist, theta, light, d
    return dist, theta, light


def normalize(frame: SensorFrame) -> np.ndarray:
    """Rescale one frame to the controller's 9 inputs in [-1, 1]."""
    out = np.empty(9)
    for k, reading in enumerate(frame.quadrants):
        out[2 * k] = 2.0 * (reading.distance / SENSOR_DEFAULT) - 1.0
        out[2 * k + 1] = reading.heading / np.pi
    out[8] = 2.0 * (frame.light / G_MAX) - 1.0
    return out


def normalize_all(dist: np.ndarray, theta: np.ndarray, light: np.ndarray) -> np.ndarray:
    """Vectorized ``normalize``; returns (n, 9) controller inputs."""
    n = dist.shape[0]
    out = np.empty((n, 9))
    out[:, 0:8:2] = 2.0 * (dist / SENSOR_DEFAULT) - 1.0
    out[:, 1:8:2] = theta / np.pi
    out[:, 8] = 2.0 * (light / G_MAX) - 1.0
    return out
