"""Swarm-level measurements: light fitness, heading order, and the pooled
two-sample t-test used for the validation tables."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

from swarmtaxis.fields import G_MAX, ScalarField, sample_many
from swarmtaxis.simulator import WorldState

NEIGHBOR_RANGE = 2.0  # m; the sensor range bounds "perceived neighbors"


@dataclass
class TrialSeries:
    """Per-controller-tick measurements of one trial."""

    l_t: np.ndarray          # mean light over the swarm, per tick
    phi: np.ndarray          # overall order, per tick
    phi_subgroup: np.ndarray # (ticks, 2) order per sub-group

    @property
    def fitness(self) -> float:
        return trial_fitness(self.l_t)


def instant_light(world: WorldState, field: ScalarField) -> float:
    """Mean light value over all robots at the current tick."""
    return float(np.mean(sample_many(field, world.pose[:, 0], world.pose[:, 1])))


def trial_fitness(l_t) -> float:
    """Normalized time-average of the per-tick mean light; in [0, 1]."""
    l_t = np.asarray(l_t, dtype=float)
    if l_t.size == 0:
        raise ValueError("empty light series")
    return float(np.mean(l_t) / G_MAX)


def order(world: WorldState, neighbor_range: float = NEIGHBOR_RANGE):
    """Heading alignment: overall order and per-sub-group order.

    Each robot's order is the magnitude of the mean heading unit vector over
    itself and all robots within ``neighbor_range``; an isolated robot has
    order 1. Returns (phi, (phi_subgroup0, phi_subgroup1)); a sub-group with
    no members reports nan.
    """
    pose = world.pose
    dx = pose[:, 0][:, None] - pose[:, 0][None, :]
    dy = pose[:, 1][:, None] - pose[:, 1][None, :]
    return order_from_distances(np.hypot(dx, dy), pose[:, 2], world.subgroup, neighbor_range)


def order_from_distances(pairwise: np.ndarray, headings: np.ndarray, subgroup: np.ndarray,
                         neighbor_range: float = NEIGHBOR_RANGE):
    """``order`` given a precomputed center-distance matrix."""
    ux = np.cos(headings)
    uy = np.sin(headings)
    adj = pairwise <= neighbor_range  # includes self on diagonal
    counts = adj.sum(axis=1)
    sx = adj @ ux
    sy = adj @ uy
    phi_n = np.hypot(sx, sy) / counts
    phi = float(phi_n.mean())
    green = subgroup == 0
    phi_green = float(phi_n[green].mean()) if green.any() else float("nan")
    phi_red = float(phi_n[~green].mean()) if not green.all() else float("nan")
    return phi, (phi_green, phi_red)


@dataclass
class StatReport:
    mean_a: float
    std_a: float
    n_a: int
    mean_b: float
    std_b: float
    n_b: int
    t: float
    df: int
    p: float
    degenerate: bool = False
    label: Optional[str] = None

    def significant(self, alpha: float = 0.05, bonferroni: int = 1) -> bool:
        return self.p <= alpha / bonferroni

    @property
    def significance_flags(self) -> dict:
        return {a: self.significant(a) for a in (0.05, 0.01, 0.001)}


def two_sample_t(group_a, group_b, label: Optional[str] = None) -> StatReport:
    """Pooled-variance two-sample t-test, df = n1 + n2 - 2, two-sided p."""
    a = np.asarray(group_a, dtype=float)
    b = np.asarray(group_b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise ValueError("each group needs at least 2 samples")
    na, nb = a.size, b.size
    ma, mb = a.mean(), b.mean()
    va = a.var(ddof=1)
    vb = b.var(ddof=1)
    df = na + nb - 2
    pooled = ((na - 1) * va + (nb - 1) * vb) / df
    denom = np.sqrt(pooled * (1.0 / na + 1.0 / nb))
    degenerate = False
    if denom == 0.0:
        if ma == mb:
            t = 0.0
        else:
            t = np.inf if ma > mb else -np.inf
            degenerate = True
    else:
        t = (ma - mb) / denom
    p = float(2.0 * stats.t.sf(abs(t), df)) if np.isfinite(t) else 0.0
    return StatReport(
        mean_a=float(ma),
        std_a=float(np.sqrt(va)),
        n_a=int(na),
        mean_b=float(mb),
        std_b=float(np.sqrt(vb)),
        n_b=int(nb),
        t=float(t),
        df=int(df),
        p=p,
        degenerate=degenerate,
        label=label,
    )
