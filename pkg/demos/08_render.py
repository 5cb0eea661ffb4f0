"""Figures from run artifacts.

Runs one adaptive trial with trajectory recording, then renders an SVG
snapshot (robots as oriented triangles over the light field) and an SVG
line plot of the per-tick light and order series. Output bytes are a pure
function of the input CSVs.
"""

import tempfile
from pathlib import Path

import numpy as np

from swarmtaxis.fields import ArenaKind, build_arena
from swarmtaxis.harness import desk_config, run_trial, write_metric_series, write_trajectory
from swarmtaxis.render import SnapshotSpec, render_series, render_snapshot

config = desk_config(master_seed=0, swarm_size=8, eval_minutes=1.0, adaptive=True)
genotype = np.random.default_rng(3).uniform(-2.0, 2.0, size=36)
outcome = run_trial(config, genotype, (0,), record_trajectory=True)
print(f"trial fitness {outcome.fitness:.3f}, "
      f"{outcome.trajectory.shape[0]} trajectory rows")

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    write_trajectory(outcome, tmp / "trajectory.csv")
    write_metric_series(outcome, tmp / "metrics.csv")

    snapshot = render_snapshot(SnapshotSpec(
        trajectory_csv=str(tmp / "trajectory.csv"),
        tick=0,
        color_by="active_reservoir",
        field_underlay=build_arena(ArenaKind.CENTER),
    ))
    (tmp / "snapshot.svg").write_text(snapshot)
    series = render_series(str(tmp / "metrics.csv"), ["l_t", "phi"])
    (tmp / "series.svg").write_text(series)

    print(f"snapshot.svg: {len(snapshot)} bytes, "
          f"{snapshot.count('<polygon')} robot glyphs, "
          f"{snapshot.count('<rect')} field cells")
    print(f"series.svg:   {len(series)} bytes, "
          f"{series.count('<polyline')} series")
    print(f"deterministic: {render_snapshot(SnapshotSpec(str(tmp / 'trajectory.csv'), 0, 'active_reservoir', build_arena(ArenaKind.CENTER))) == snapshot}")
