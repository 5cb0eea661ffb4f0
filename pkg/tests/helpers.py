"""Independent oracles shared by the unit and acceptance tests.

These deliberately re-derive results by the most literal route available
(exhaustive loops, plain formula transcriptions) and must stay independent
of the library code paths they check.
"""

import math

import numpy as np

from swarmtaxis.simulator import WorldState, wrap_angle


def make_world(positions, headings, subgroup=None, active=None, seed=0) -> WorldState:
    positions = np.asarray(positions, dtype=float)
    headings = np.asarray(headings, dtype=float)
    n = positions.shape[0]
    if subgroup is None:
        subgroup = np.zeros(n, dtype=int)
    subgroup = np.asarray(subgroup)
    if active is None:
        active = subgroup.copy()
    return WorldState(
        pose=np.column_stack([positions, headings]),
        wheels=np.zeros((n, 2)),
        subgroup=subgroup,
        active=np.asarray(active),
        tick=0,
        rng=np.random.default_rng(seed),
    )


def oracle_quadrants(pose, i):
    """Exhaustive all-pairs quadrant sensor for robot i.

    Classifies every neighbor within 2 m by relative bearing into the four
    90-degree quadrants (front [-45,45), left [45,135), back [135,225),
    right [225,315)) and keeps the per-quadrant nearest, lowest index first.
    Returns [(distance, bearing)] in frame order front, back, left, right.

    The classification, nearest selection and tie-break are derived from
    scratch here; the scalar float primitives (hypot, arctan2, angle wrap)
    are the same ones the library builds on, so equality can be exact.
    """
    n = pose.shape[0]
    xi, yi, hi = pose[i]
    best = {"front": None, "back": None, "left": None, "right": None}
    for j in range(n):
        if j == i:
            continue
        dx = pose[j, 0] - xi
        dy = pose[j, 1] - yi
        d = float(np.hypot(dx, dy))
        if d > 2.0:
            continue
        bearing = float(wrap_angle(np.arctan2(dy, dx) - hi))
        deg = math.degrees(bearing)
        if -45.0 <= deg < 45.0:
            q = "front"
        elif 45.0 <= deg < 135.0:
            q = "left"
        elif deg >= 135.0 or deg < -135.0:
            q = "back"
        else:
            q = "right"
        if best[q] is None or d < best[q][0]:
            best[q] = (d, bearing)
    default = (2.01, 0.0)
    return [best[q] if best[q] is not None else default
            for q in ("front", "back", "left", "right")]


def oracle_forward(w_h1, w_h2, w_out, inputs):
    """Straight-line loop transcription of the controller forward pass."""
    h1 = [0.0] * 9
    for r in range(9):
        acc = 0.0
        for c in range(9):
            acc += w_h1[r][c] * inputs[c]
        h1[r] = max(acc, 0.0)
    h2 = [0.0] * 9
    for r in range(9):
        acc = 0.0
        for c in range(9):
            acc += w_h2[r][c] * h1[c]
        h2[r] = max(acc, 0.0)
    out = [0.0, 0.0]
    for r in range(2):
        acc = 0.0
        for c in range(9):
            acc += w_out[r][c] * h2[c]
        out[r] = math.tanh(acc)
    return out


def oracle_pooled_t(a, b):
    """Literal transcription of the pooled two-sample t statistic."""
    n1, n2 = len(a), len(b)
    m1 = sum(a) / n1
    m2 = sum(b) / n2
    s1 = sum((x - m1) ** 2 for x in a) / (n1 - 1)
    s2 = sum((x - m2) ** 2 for x in b) / (n2 - 1)
    sp2 = ((n1 - 1) * s1 + (n2 - 1) * s2) / (n1 + n2 - 2)
    return (m1 - m2) / math.sqrt(sp2 * (1.0 / n1 + 1.0 / n2))


# Published mean-fitness grid of the ratio sweep, rows by spawn distance
# factor, columns by green:red ratio from 4:0 to 0:4.
TABLE3_R_DISTS = (0.0, 0.25, 0.5, 0.75, 1.0, 1.25)
TABLE3_RATIOS = (1.0, 0.75, 0.5, 0.25, 0.0)
TABLE3_BY_DISTANCE = np.array(
    [
        [0.79, 0.78, 0.77, 0.73, 0.69],
        [0.76, 0.76, 0.75, 0.72, 0.68],
        [0.70, 0.71, 0.70, 0.66, 0.64],
        [0.56, 0.60, 0.60, 0.57, 0.52],
        [0.33, 0.41, 0.43, 0.43, 0.38],
        [0.06, 0.08, 0.13, 0.09, 0.12],
    ]
)


def table3_grid():
    from swarmtaxis.harness import RatioSweepGrid

    return RatioSweepGrid(
        ratios=TABLE3_RATIOS,
        r_dists=TABLE3_R_DISTS,
        mean_fitness=TABLE3_BY_DISTANCE.T.copy(),
        repetitions=60,
    )
