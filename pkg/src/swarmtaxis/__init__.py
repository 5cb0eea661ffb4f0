"""Deterministic 2-D swarm simulator and evolutionary toolkit.

A heterogeneous swarm of differential-drive robots is evolved (CMA-ES over
the output layers of two fixed random reservoir networks) to climb a light
gradient that no single robot can sense on its own.
"""

from swarmtaxis.fields import ArenaKind, ScalarField, build_arena, sample
from swarmtaxis.simulator import WorldState, WheelCommand, spawn_swarm, step
from swarmtaxis.controller import (
    Genotype,
    RegulatoryPolicy,
    ReservoirSpec,
    build_reservoir,
    decode,
    encode,
    forward,
    regulate,
)
from swarmtaxis.cma import CmaState, EvaluatedIndividual, ask, init_cma, tell
from swarmtaxis.metrics import order, trial_fitness, two_sample_t
from swarmtaxis.harness import (
    ExperimentConfig,
    desk_config,
    paper_config,
    derive_policy,
    run_evolution,
    run_ratio_sweep,
    run_trial,
    run_validation,
)

__version__ = "0.1.0"
