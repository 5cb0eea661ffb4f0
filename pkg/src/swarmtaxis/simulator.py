"""Differential-drive swarm kinematics at dt = 0.05 s.

The world is the unbounded plane (the field's zero exterior discourages
escape). Robots are rigid discs; overlaps are resolved by a symmetric
positional push-out that never touches headings. Everything is a
deterministic function of the spawn seed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from swarmtaxis.fields import ARENA_SIZE

DT = 0.05
V_MAX = 0.14          # m/s, wheel speed bound (Thymio II class hardware)
TRACK_WIDTH = 0.094   # m, distance between wheels
BODY_RADIUS = 0.06    # m, collision disc
SPAWN_BOX = 3.0       # m, side of the square spawn box


def wrap_angle(a):
    """Wrap angle(s) to (-pi, pi]. Values already in range pass through bit-identically."""
    a = np.asarray(a)
    out = np.where(
        (a > np.pi) | (a <= -np.pi),
        np.pi - np.mod(np.pi - a, 2.0 * np.pi),
        a,
    )
    return out if out.ndim else float(out)


class Pose(NamedTuple):
    x: float
    y: float
    heading: float


class RobotState(NamedTuple):
    pose: Pose
    left_wheel: float
    right_wheel: float
    subgroup: int
    active_reservoir: int


class WheelCommand(NamedTuple):
    v: float  # target speed in [-1, 1]
    w: float  # angular velocity in [-1, 1]


@dataclass
class WorldState:
    """Array-of-robots world snapshot.

    ``pose`` is (n, 3) columns x, y, heading; ``wheels`` is (n, 2) columns
    left, right in m/s. ``tick`` counts physics steps of DT seconds.
    """

    pose: np.ndarray
    wheels: np.ndarray
    subgroup: np.ndarray
    active: np.ndarray
    tick: int
    rng: np.random.Generator

    @property
    def time(self) -> float:
        return self.tick * DT

    @property
    def n_robots(self) -> int:
        return self.pose.shape[0]

    def robot(self, i: int) -> RobotState:
        return RobotState(
            pose=Pose(*self.pose[i]),
            left_wheel=float(self.wheels[i, 0]),
            right_wheel=float(self.wheels[i, 1]),
            subgroup=int(self.subgroup[i]),
            active_reservoir=int(self.active[i]),
        )


def spawn_swarm(
    n: int,
    ratio_first: float,
    distance: float,
    rng: np.random.Generator,
) -> WorldState:
    """Place ``n`` robots in a 3x3 m box at ``distance`` from the arena center.

    One uniform angle picks where on the spawn circle the box sits; robots
    are uniform inside the box with uniform headings. The first
    round(ratio_first * n) robots belong to sub-group 0.
    """
    if n < 1:
        raise ValueError("swarm needs at least one robot")
    if not 0.0 <= ratio_first <= 1.0:
        raise ValueError("ratio_first must lie in [0, 1]")
    alpha = rng.uniform(0.0, 2.0 * np.pi)
    cx = ARENA_SIZE / 2.0 + distance * np.cos(alpha)
    cy = ARENA_SIZE / 2.0 + distance * np.sin(alpha)
    xy = rng.uniform(-SPAWN_BOX / 2.0, SPAWN_BOX / 2.0, size=(n, 2))
    headings = wrap_angle(rng.uniform(-np.pi, np.pi, size=n))
    pose = np.column_stack([xy[:, 0] + cx, xy[:, 1] + cy, headings])

    n_first = int(np.floor(ratio_first * n + 0.5))
    subgroup = np.where(np.arange(n) < n_first, 0, 1)
    return WorldState(
        pose=pose,
        wheels=np.zeros((n, 2)),
        subgroup=subgroup,
        active=subgroup.copy(),
        tick=0,
        rng=rng,
    )


def apply_command(state: RobotState, cmd: WheelCommand) -> RobotState:
    """Arcade-mix a (v, w) command onto the two wheels of one robot."""
    left = float(np.clip(cmd.v - cmd.w, -1.0, 1.0)) * V_MAX
    right = float(np.clip(cmd.v + cmd.w, -1.0, 1.0)) * V_MAX
    return state._replace(left_wheel=left, right_wheel=right)


def mix_commands(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Vectorized wheel mixing; returns (n, 2) left/right speeds in m/s."""
    left = np.clip(v - w, -1.0, 1.0) * V_MAX
    right = np.clip(v + w, -1.0, 1.0) * V_MAX
    return np.column_stack([left, right])


def apply_commands(world: WorldState, v: np.ndarray, w: np.ndarray) -> WorldState:
    return replace(world, wheels=mix_commands(v, w))


def _advance_in_place(pose: np.ndarray, wheels: np.ndarray) -> None:
    """One Euler step of unicycle kinematics plus disc push-out, in place."""
    forward = (wheels[:, 0] + wheels[:, 1]) * 0.5
    yaw_rate = (wheels[:, 1] - wheels[:, 0]) / TRACK_WIDTH
    h = pose[:, 2]
    pose[:, 0] += forward * np.cos(h) * DT
    pose[:, 1] += forward * np.sin(h) * DT
    pose[:, 2] = wrap_angle(h + yaw_rate * DT)
    _resolve_collisions(pose)


@lru_cache(maxsize=16)
def _pair_indices(n: int):
    return np.triu_indices(n, k=1)


def _resolve_collisions(pose: np.ndarray) -> None:
    """Symmetric push-out of overlapping disc pairs (positions only)."""
    n = pose.shape[0]
    if n < 2:
        return
    iu, ju = _pair_indices(n)
    dx = pose[iu, 0] - pose[ju, 0]
    dy = pose[iu, 1] - pose[ju, 1]
    dist = np.hypot(dx, dy)
    min_sep = 2.0 * BODY_RADIUS
    hit = dist < min_sep
    if not hit.any():
        return
    corr = np.zeros((n, 2))
    for k in np.nonzero(hit)[0]:
        i, j = int(iu[k]), int(ju[k])
        d = dist[k]
        if d < 1e-12:
            # coincident centers: deterministic fixed push direction
            ux, uy = 1.0, 0.0
            overlap = min_sep
        else:
            ux, uy = dx[k] / d, dy[k] / d
            overlap = min_sep - d
        half = 0.5 * overlap
        corr[i, 0] += ux * half
        corr[i, 1] += uy * half
        corr[j, 0] -= ux * half
        corr[j, 1] -= uy * half
    pose[:, 0] += corr[:, 0]
    pose[:, 1] += corr[:, 1]


def step(world: WorldState) -> WorldState:
    """Advance the world by one physics step of DT seconds."""
    pose = world.pose.copy()
    _advance_in_place(pose, world.wheels)
    return replace(world, pose=pose, tick=world.tick + 1)
