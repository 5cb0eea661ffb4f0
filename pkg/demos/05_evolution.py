"""A complete (tiny) evolution run.

Evolves the 36-value genotype with CMA-ES on the center arena. This uses a
deliberately small budget so it finishes in under a minute; the desk and
paper presets in swarmtaxis.harness scale the same call up.
"""

import tempfile
from pathlib import Path

from swarmtaxis.harness import desk_config, run_evolution, scheduled_trials

config = desk_config(
    master_seed=0,
    swarm_size=6,
    eval_minutes=0.5,
    lam=6,
    generations=5,
    fitness_repeats=2,
)
print(f"budget: {scheduled_trials(config)} trials "
      f"({config.lam} individuals x {config.generations} generations "
      f"x {config.fitness_repeats} repeats)\n")

with tempfile.TemporaryDirectory() as tmp:
    result = run_evolution(config, out_dir=Path(tmp) / "run", progress=True)
    print(f"\nbest-ever fitness {result.best_fitness:.4f}")
    print("artifacts:", sorted(p.name for p in (Path(tmp) / "run").iterdir()))

# the run is a pure function of the config: repeating it changes nothing
again = run_evolution(config)
print(f"re-run reproduces the champion exactly: "
      f"{(again.best_genotype == result.best_genotype).all()}")
