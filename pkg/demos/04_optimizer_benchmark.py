"""The optimizer on a classic benchmark.

CMA-ES with explicit ask/tell state, maximizing. Here it drives a 10-D
sphere objective to numerical zero; the harness points the same machinery
at swarm-trial fitness instead.
"""

import numpy as np

from swarmtaxis.cma import EvaluatedIndividual, ask, init_cma, tell

rng = np.random.default_rng(0)
state = init_cma(rng, population_size=10, sigma0=0.5, dim=10, mean=np.full(10, 2.0))

best = np.inf
while best > 1e-10 and state.eval_count < 50_000:
    candidates = ask(state, rng)
    evaluated = [
        EvaluatedIndividual(genotype=x, fitness=-float(np.dot(x, x)))
        for x in candidates
    ]
    best = min(best, min(float(np.dot(x, x)) for x in candidates))
    state = tell(state, evaluated)
    if state.generation % 20 == 0:
        print(f"gen {state.generation:4d}  best |x|^2 so far {best:.3e}  sigma {state.sigma:.3e}")

print(f"\nreached {best:.3e} after {state.eval_count} evaluations "
      f"({state.generation} generations)")
