"""From a ratio sweep to a regulatory policy.

Measures mean fitness over a grid of (sub-group ratio x spawn distance)
cells, then derives the light-thresholded expression policy from the grid:
whichever ratio wins near / mid / far from the source becomes the
green-expression probability for the corresponding light band.
"""

import numpy as np

from swarmtaxis.harness import derive_policy, desk_config, run_ratio_sweep

config = desk_config(master_seed=0, swarm_size=6, eval_minutes=0.5)
genotype = np.random.default_rng(3).uniform(-2.0, 2.0, size=36)

ratios = (1.0, 0.5, 0.0)
r_dists = (0.0, 0.5, 1.0)
grid = run_ratio_sweep(config, genotype, ratios=ratios, r_dists=r_dists, repetitions=4)

print("mean fitness (rows: green fraction, cols: spawn distance factor)")
print("        " + "  ".join(f"{d:5.2f}" for d in r_dists))
for ratio, row in zip(ratios, grid.mean_fitness):
    print(f"  {ratio:4.2f}  " + "  ".join(f"{v:5.3f}" for v in row))

policy = derive_policy(grid)
print(f"\nderived policy: thresholds {policy.thresholds}, "
      f"probabilities {policy.probabilities}")
print("(bands are ordered dark -> bright; each probability is the green "
      "fraction that won the matching distance region)")
