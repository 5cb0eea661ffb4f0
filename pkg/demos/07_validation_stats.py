"""Fixed versus adaptive sub-group splits, with statistics.

Runs the validation suites (swarm sizes and transfer arenas) comparing the
fixed even split against the regulated adaptive variant, then the pooled
t-test machinery that scores them.
"""

import numpy as np

from swarmtaxis.controller import RegulatoryPolicy
from swarmtaxis.fields import ArenaKind
from swarmtaxis.harness import desk_config, run_validation
from swarmtaxis.metrics import two_sample_t

config = desk_config(master_seed=0, swarm_size=6, eval_minutes=0.5)
genotype = np.random.default_rng(3).uniform(-2.0, 2.0, size=36)

result = run_validation(
    config, genotype, RegulatoryPolicy(),
    swarm_sizes=(6, 10),
    arenas=(ArenaKind.LINEAR,),
    repetitions=5,
)

for cell in result.cells:
    r = cell.report
    print(f"{r.label:12s} fixed {cell.fixed_mean:.3f}  adaptive {cell.adaptive_mean:.3f}"
          f"  t={r.t:+.2f}  p={r.p:.3f}")
agg = result.aggregate
print(f"{'aggregate':12s} fixed {agg.mean_b:.3f}+-{agg.std_b:.3f}  "
      f"adaptive {agg.mean_a:.3f}+-{agg.std_a:.3f}  df={agg.df}  p={agg.p:.3f}")
print(f"significant at 0.01 with Bonferroni divisor {result.bonferroni}: "
      f"{agg.significant(0.01, result.bonferroni)}")

# the t-test is also usable standalone on any two fitness samples
a = np.random.default_rng(1).normal(0.40, 0.18, size=60)
b = np.random.default_rng(2).normal(0.45, 0.22, size=60)
report = two_sample_t(b, a, label="example")
print(f"\nstandalone test on two N=60 samples: t={report.t:.3f}, "
      f"df={report.df}, p={report.p:.4f}")
