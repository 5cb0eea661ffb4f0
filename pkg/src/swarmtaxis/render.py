"""Figures-as-files: SVG snapshots of robot positions and SVG line plots
from the trial CSVs. Output bytes are a pure function of the inputs."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from swarmtaxis.fields import ARENA_SIZE, G_MAX, ScalarField

SUBGROUP_COLORS = ("#2ca02c", "#d62728")  # green, red
_SVG_SIZE = 600.0
_UNDERLAY_CELLS = 30  # field downsampled to one rect per meter


@dataclass
class SnapshotSpec:
    trajectory_csv: str
    tick: int
    color_by: str = "subgroup"  # or "active_reservoir"
    field_underlay: Optional[ScalarField] = None


def _read_trajectory(path):
    rows = []
    with open(path) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty trajectory CSV")
        for lineno, row in enumerate(reader, start=2):
            try:
                rows.append(
                    (
                        float(row["time"]),
                        int(row["id"]),
                        int(row["subgroup"]),
                        int(row["active_reservoir"]),
                        float(row["x"]),
                        float(row["y"]),
                        float(row["heading"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed trajectory row") from exc
    return rows


def _world_to_svg(x: float, y: float) -> tuple[float, float]:
    s = _SVG_SIZE / ARENA_SIZE
    return x * s, (ARENA_SIZE - y) * s  # flip y so north is up


def render_snapshot(spec: SnapshotSpec) -> str:
    """SVG of robot glyphs (oriented triangles) at one recorded tick."""
    rows = _read_trajectory(spec.trajectory_csv)
    times = sorted({r[0] for r in rows})
    if not 0 <= spec.tick < len(times):
        raise ValueError(f"tick {spec.tick} outside recorded range 0..{len(times) - 1}")
    t = times[spec.tick]
    at_tick = [r for r in rows if r[0] == t]

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_SIZE:.0f}" '
        f'height="{_SVG_SIZE:.0f}" viewBox="0 0 {_SVG_SIZE:.0f} {_SVG_SIZE:.0f}">'
    ]
    if spec.field_underlay is not None:
        parts.append(_underlay_rects(spec.field_underlay))
    else:
        parts.append(f'<rect width="{_SVG_SIZE:.0f}" height="{_SVG_SIZE:.0f}" fill="#ffffff"/>')

    color_idx = 2 if spec.color_by == "subgroup" else 3
    glyph_len = 0.5  # meters, display size
    for row in at_tick:
        x, y, h = row[4], row[5], row[6]
        tip = _world_to_svg(x + glyph_len * np.cos(h), y + glyph_len * np.sin(h))
        left = _world_to_svg(
            x + 0.4 * glyph_len * np.cos(h + 2.5), y + 0.4 * glyph_len * np.sin(h + 2.5)
        )
        right = _world_to_svg(
            x + 0.4 * glyph_len * np.cos(h - 2.5), y + 0.4 * glyph_len * np.sin(h - 2.5)
        )
        color = SUBGROUP_COLORS[row[color_idx] % 2]
        pts = " ".join(f"{px:.2f},{py:.2f}" for px, py in (tip, left, right))
        parts.append(f'<polygon points="{pts}" fill="{color}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _underlay_rects(field: ScalarField) -> str:
    factor_x = max(1, field.width_cells // _UNDERLAY_CELLS)
    factor_y = max(1, field.height_cells // _UNDERLAY_CELLS)
    parts = ["<g>"]
    cell_w = _SVG_SIZE / (field.width_cells / factor_x)
    cell_h = _SVG_SIZE / (field.height_cells / factor_y)
    for iy in range(0, field.height_cells, factor_y):
        for ix in range(0, field.width_cells, factor_x):
            block = field.values[iy : iy + factor_y, ix : ix + factor_x]
            shade = int(round(255 * float(block.mean()) / G_MAX))
            gx = ix / factor_x * cell_w
            gy = _SVG_SIZE - (iy / factor_y + 1) * cell_h
            parts.append(
                f'<rect x="{gx:.2f}" y="{gy:.2f}" width="{cell_w:.2f}" height="{cell_h:.2f}" '
                f'fill="rgb({shade},{shade},{shade})"/>'
            )
    parts.append("</g>")
    return "\n".join(parts)


def render_series(metric_csv: str, columns: Sequence[str]) -> str:
    """SVG line plot: one polyline per requested column, with axes + legend."""
    with open(metric_csv) as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{metric_csv}: empty metric CSV")
        for col in columns:
            if col not in reader.fieldnames:
                raise ValueError(f"missing column: {col}")
        data = {col: [] for col in columns}
        for row in reader:
            for col in columns:
                data[col].append(float(row[col]))

    width, height, margin = 720.0, 400.0, 50.0
    n = max(len(v) for v in data.values())
    lo = min(min(v) for v in data.values())
    hi = max(max(v) for v in data.values())
    if hi == lo:
        hi = lo + 1.0
    palette = ("#000000", "#2ca02c", "#d62728", "#1f77b4", "#ff7f0e")

    def sx(i):
        return margin + (width - 2 * margin) * (i / max(1, n - 1))

    def sy(v):
        return height - margin - (height - 2 * margin) * ((v - lo) / (hi - lo))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="#ffffff"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="#000000"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="#000000"/>',
        f'<text x="{margin}" y="{margin - 10:.0f}" font-size="12">{hi:.3g}</text>',
        f'<text x="{margin}" y="{height - margin + 20:.0f}" font-size="12">{lo:.3g}</text>',
    ]
    for ci, col in enumerate(columns):
        color = palette[ci % len(palette)]
        pts = " ".join(f"{sx(i):.2f},{sy(v):.2f}" for i, v in enumerate(data[col]))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}"/>')
        parts.append(
            f'<text x="{width - margin + 5:.0f}" y="{margin + 15 * ci:.0f}" '
            f'font-size="12" fill="{color}">{col}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
