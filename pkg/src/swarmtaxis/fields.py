"""Scalar light fields over a 30x30 m arena.

Four built-in gradient maps (radial center, bi-modal, linear ramp, banana
ridge) stored as immutable cell grids. Lookup is piecewise constant per
cell; positions outside the grid read 0, which is what discourages robots
from leaving the arena (there are no walls).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

ARENA_SIZE = 30.0
G_MAX = 255.0
DEFAULT_CELLS_PER_METER = 10

_CENTER = (ARENA_SIZE / 2.0, ARENA_SIZE / 2.0)


class ArenaKind(enum.Enum):
    CENTER = "center"
    BIMODAL = "bimodal"
    LINEAR = "linear"
    BANANA = "banana"


@dataclass(frozen=True)
class ScalarField:
    """Immutable grid of light values in [0, 255].

    ``values`` is indexed ``[iy, ix]``; ``origin`` is the world coordinate
    of the lower-left corner of cell (0, 0).
    """

    width_cells: int
    height_cells: int
    cell_size: float
    origin: tuple[float, float]
    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if v.shape != (self.height_cells, self.width_cells):
            raise ValueError(f"values shape {v.shape} does not match grid")
        if v.min() < 0.0 or v.max() > G_MAX:
            raise ValueError("field values must lie in [0, 255]")
        v.setflags(write=False)


def _cell_centers(cells_per_meter: int):
    n = int(round(ARENA_SIZE * cells_per_meter))
    cell = 1.0 / cells_per_meter
    coords = (np.arange(n) + 0.5) * cell
    return np.meshgrid(coords, coords)  # xx, yy each (n, n), [iy, ix]


def _cone(xx, yy, center, radius):
    d = np.hypot(xx - center[0], yy - center[1])
    return np.maximum(0.0, 1.0 - d / radius)


def build_arena(kind: ArenaKind, cells_per_meter: int = DEFAULT_CELLS_PER_METER) -> ScalarField:
    """Build one of the four built-in 30x30 m arenas.

    Values are evaluated at cell centers and rescaled so the brightest cell
    is exactly 255.
    """
    if cells_per_meter < 1:
        raise ValueError("cells_per_meter must be >= 1")
    xx, yy = _cell_centers(cells_per_meter)

    if kind is ArenaKind.CENTER:
        raw = _cone(xx, yy, _CENTER, 15.0)
    elif kind is ArenaKind.BIMODAL:
        raw = np.maximum(
            _cone(xx, yy, (9.0, 15.0), 9.0),
            _cone(xx, yy, (21.0, 15.0), 9.0),
        )
    elif kind is ArenaKind.LINEAR:
        raw = xx - xx.min()  # ramp anchored at 0 on the dark edge
    elif kind is ArenaKind.BANANA:
        # Map the arena onto the Rosenbrock domain [-2,2]x[-1,3] and turn
        # the valley into a bright curved ridge with its peak at (a,b)=(1,1).
        a = xx / ARENA_SIZE * 4.0 - 2.0
        b = yy / ARENA_SIZE * 4.0 - 1.0
        rosen = (1.0 - a) ** 2 + 100.0 * (b - a ** 2) ** 2
        raw = np.exp(-rosen / 10.0)
    else:
        raise ValueError(f"unknown arena kind: {kind!r}")

    values = raw * (G_MAX / raw.max())
    # brightest cells read exactly 255 despite rounding; the tolerance also
    # catches cells that tie for the peak only up to floating-point noise
    # (e.g. the four cells around a symmetric center)
    values[np.isclose(raw, raw.max(), rtol=1e-12, atol=0.0)] = G_MAX
    values = np.clip(values, 0.0, G_MAX)
    n = int(round(ARENA_SIZE * cells_per_meter))
    return ScalarField(
        width_cells=n,
        height_cells=n,
        cell_size=1.0 / cells_per_meter,
        origin=(0.0, 0.0),
        values=values,
    )


def sample(field: ScalarField, position) -> float:
    """Light value of the cell containing ``position``; 0 outside the grid."""
    x, y = position
    ix = int(np.floor((x - field.origin[0]) / field.cell_size))
    iy = int(np.floor((y - field.origin[1]) / field.cell_size))
    if 0 <= ix < field.width_cells and 0 <= iy < field.height_cells:
        return float(field.values[iy, ix])
    return 0.0


def sample_many(field: ScalarField, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorized ``sample`` for arrays of world coordinates."""
    ix = np.floor((x - field.origin[0]) / field.cell_size).astype(np.int64)
    iy = np.floor((y - field.origin[1]) / field.cell_size).astype(np.int64)
    inside = (ix >= 0) & (ix < field.width_cells) & (iy >= 0) & (iy < field.height_cells)
    out = np.zeros(np.shape(x), dtype=float)
    if inside.any():
        out[inside] = field.values[iy[inside], ix[inside]]
    return out


def save_field(field: ScalarField, path) -> None:
    """Write the text grid format: header line, then one row of values per line."""
    with open(path, "w") as fh:
        fh.write(
            f"{field.width_cells} {field.height_cells} {field.cell_size!r} "
            f"{field.origin[0]!r} {field.origin[1]!r}\n"
        )
        for row in field.values:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_field(path) -> ScalarField:
    with open(path) as fh:
        header = fh.readline().split()
        w, h = int(header[0]), int(header[1])
        cell = float(header[2])
        origin = (float(header[3]), float(header[4]))
        values = np.loadtxt(fh, ndmin=2)
    return ScalarField(width_cells=w, height_cells=h, cell_size=cell, origin=origin, values=values)
