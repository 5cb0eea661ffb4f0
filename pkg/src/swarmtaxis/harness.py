"""Experiment orchestration: trials, evolution runs, ratio sweeps, policy
derivation, and validation suites.

Trials are pure functions of (config, genotype, seed); per-trial seeds are
derived from (master seed, experiment tag, indices) so parallel scheduling
cannot change any result. Run directories hold a manifest (config hash,
seeds, version) next to every artifact.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field, fields, replace
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from swarmtaxis import cma
from swarmtaxis.controller import (
    GENOTYPE_SIZE,
    GenotypeManifest,
    RegulatoryPolicy,
    build_reservoir,
    decode,
    forward_swarm,
    regulate_swarm,
    save_genotype,
)
from swarmtaxis.fields import ARENA_SIZE, G_MAX, ArenaKind, build_arena
from swarmtaxis.metrics import TrialSeries, order_from_distances
from swarmtaxis.sensing import normalize_all, sense_all
from swarmtaxis.simulator import DT, WorldState, mix_commands, _advance_in_place, spawn_swarm

SPAWN_DISTANCE = 12.0  # m, training spawn distance from the arena center
WORKERS_ENV = "SWARMTAXIS_WORKERS"

# experiment tags namespace the per-trial seed derivation
_TAG_EVOLVE = 1
_TAG_SWEEP = 2
_TAG_VALIDATE = 3


@dataclass(frozen=True)
class ExperimentConfig:
    arena: ArenaKind = ArenaKind.CENTER
    swarm_size: int = 20
    ratio: float = 0.5           # green fraction of the swarm
    adaptive: bool = False       # online regulatory mechanism on/off
    r_dist: float = 1.0          # spawn distance as a fraction of 12 m
    eval_minutes: float = 10.0
    control_hz: float = 10.0
    dt: float = DT
    repetitions: int = 60        # trials per validation/sweep cell
    master_seed: int = 0
    reservoir_seed_0: int = 1000
    reservoir_seed_1: int = 2000
    lam: int = 30
    generations: int = 100
    sigma0: float = 1.0
    fitness_repeats: int = 3
    cells_per_meter: int = 10

    def __post_init__(self):
        if self.swarm_size < 1 or self.lam < 2 or self.generations < 1:
            raise ValueError("swarm_size, lam and generations must be positive")
        if not 0.0 <= self.ratio <= 1.0:
            raise ValueError("ratio must lie in [0, 1]")
        if self.eval_minutes <= 0 or self.control_hz <= 0 or self.dt <= 0:
            raise ValueError("timing parameters must be positive")

    @property
    def physics_steps(self) -> int:
        return int(round(self.eval_minutes * 60.0 / self.dt))

    @property
    def control_every(self) -> int:
        return int(round(1.0 / (self.control_hz * self.dt)))

    @property
    def spawn_distance(self) -> float:
        return self.r_dist * SPAWN_DISTANCE

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, ArenaKind):
                v = v.value
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        kinds = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in kinds:
                raise ValueError(f"unknown config key: {key}")
            if key == "arena":
                kwargs[key] = ArenaKind(value)
            elif key == "adaptive":
                kwargs[key] = value.lower() in ("true", "1", "yes")
            elif kinds[key] == "int" or key in (
                "swarm_size", "repetitions", "master_seed", "reservoir_seed_0",
                "reservoir_seed_1", "lam", "generations", "fitness_repeats",
                "cells_per_meter",
            ):
                kwargs[key] = int(value)
            else:
                kwargs[key] = float(value)
        return cls(**kwargs)

    @property
    def config_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def desk_config(master_seed: int = 0, **overrides) -> ExperimentConfig:
    """Small preset for laptop-scale smoke runs.

    The swarm spawns straddling the lit rim of the arena (r_dist 1.2, where
    the light ramp fades to zero). Two-minute trials leave too little time
    for the slow collective drift that full-scale runs select on, so the
    rim start is what keeps selection pressure measurable at this scale:
    the fitness floor sits near zero there and even coarse improvements in
    mobility and light-seeking separate clearly from it.
    """
    base = dict(
        swarm_size=10,
        eval_minutes=2.0,
        r_dist=1.2,
        lam=15,
        generations=20,
        repetitions=20,
        master_seed=master_seed,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def paper_config(master_seed: int = 0, **overrides) -> ExperimentConfig:
    """Full-scale preset: 30 x 100 x 3 = 9000 ten-minute trials per run."""
    base = dict(master_seed=master_seed)
    base.update(overrides)
    return ExperimentConfig(**base)


def scheduled_trials(config: ExperimentConfig) -> int:
    """Swarm trials one evolution run will execute."""
    return config.lam * config.generations * config.fitness_repeats


def trial_seed(master_seed: int, tag: int, *indices: int):
    """Splittable per-trial seed: any reordering of trial execution is safe."""
    return (master_seed, tag, *indices)


@lru_cache(maxsize=8)
def _arena_cache(kind: ArenaKind, cells_per_meter: int):
    return build_arena(kind, cells_per_meter)


@lru_cache(maxsize=8)
def _reservoir_cache(seed: int):
    return build_reservoir(seed)


@dataclass
class TrialOutcome:
    series: TrialSeries
    seed: tuple
    trajectory: Optional[np.ndarray] = None  # rows: time, id, subgroup, active, x, y, heading, light

    @property
    def fitness(self) -> float:
        return self.series.fitness


def run_trial(
    config: ExperimentConfig,
    genotype: np.ndarray,
    seed,
    policy: Optional[RegulatoryPolicy] = None,
    record_trajectory: bool = False,
) -> TrialOutcome:
    """Simulate one swarm trial; deterministic in (config, genotype, seed)."""
    layers = decode(genotype)
    reservoirs = (
        _reservoir_cache(config.reservoir_seed_0),
        _reservoir_cache(config.reservoir_seed_1),
    )
    field_ = _arena_cache(config.arena, config.cells_per_meter)
    if config.adaptive and policy is None:
        policy = RegulatoryPolicy()
    seed = (seed,) if isinstance(seed, int) else tuple(seed)
    rng = np.random.default_rng(np.random.SeedSequence(seed))

    world = spawn_swarm(config.swarm_size, config.ratio, config.spawn_distance, rng)
    pose = world.pose
    n = world.n_robots
    steps = config.physics_steps
    control_every = config.control_every
    regulate_every = int(round((policy.update_period if policy else 5.0) / config.dt))
    ticks = -(-steps // control_every)  # tick fires at k = 0, control_every, ...

    l_t = np.empty(ticks)
    phi = np.empty(ticks)
    phi_sub = np.empty((ticks, 2))
    traj = np.empty((ticks * n, 8)) if record_trajectory else None
    ids = np.arange(n, dtype=float)

    wheels = world.wheels
    tick = 0
    for k in range(steps):
        if k % control_every == 0:
            dist, theta, light, pairwise = sense_all(world, field_, return_pairwise=True)
            if config.adaptive and k % regulate_every == 0:
                world.active = regulate_swarm(policy, light, rng)
            inputs = normalize_all(dist, theta, light)
            out = forward_swarm(reservoirs, layers, inputs, world.active)
            wheels = mix_commands(out[:, 0], out[:, 1])
            world.wheels = wheels

            l_t[tick] = light.mean()
            phi_k, phi_sub_k = order_from_distances(pairwise, pose[:, 2], world.subgroup)
            phi[tick] = phi_k
            phi_sub[tick] = phi_sub_k
            if record_trajectory:
                rows = traj[tick * n : (tick + 1) * n]
                rows[:, 0] = world.tick * config.dt
                rows[:, 1] = ids
                rows[:, 2] = world.subgroup
                rows[:, 3] = world.active
                rows[:, 4:7] = pose
                rows[:, 7] = light
            tick += 1
        _advance_in_place(pose, wheels)
        world.tick += 1

    series = TrialSeries(l_t=l_t, phi=phi, phi_subgroup=phi_sub)
    return TrialOutcome(series=series, seed=seed, trajectory=traj)


TRAJECTORY_COLUMNS = ("time", "id", "subgroup", "active_reservoir", "x", "y", "heading", "light")


def write_trajectory(outcome: TrialOutcome, path) -> None:
    if outcome.trajectory is None:
        raise ValueError("trial was run without record_trajectory")
    with open(path, "w") as fh:
        fh.write(",".join(TRAJECTORY_COLUMNS) + "\n")
        for row in outcome.trajectory:
            fh.write(
                f"{float(row[0])!r},{int(row[1])},{int(row[2])},{int(row[3])},"
                f"{float(row[4])!r},{float(row[5])!r},{float(row[6])!r},{float(row[7])!r}\n"
            )


def write_metric_series(outcome: TrialOutcome, path) -> None:
    """Per-tick metric CSV: tick, l_t, phi, phi_green, phi_red."""
    s = outcome.series
    with open(path, "w") as fh:
        fh.write("tick,l_t,phi,phi_green,phi_red\n")
        for i in range(s.l_t.shape[0]):
            fh.write(
                f"{i},{float(s.l_t[i])!r},{float(s.phi[i])!r},"
                f"{float(s.phi_subgroup[i, 0])!r},{float(s.phi_subgroup[i, 1])!r}\n"
            )


# ---------------------------------------------------------------------------
# parallel trial evaluation

def _n_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _trial_fitness_task(args) -> float:
    config_text, genotype, seed, policy_args = args
    config = ExperimentConfig.from_text(config_text)
    policy = RegulatoryPolicy(*policy_args) if policy_args is not None else None
    return run_trial(config, np.asarray(genotype), seed, policy=policy).fitness


def _run_trials(config: ExperimentConfig, tasks) -> list:
    """Evaluate [(genotype, seed, policy)] -> fitnesses, preserving order."""
    policy_args = lambda p: (p.thresholds, p.probabilities, p.update_period) if p else None
    packed = [(config.to_text(), np.asarray(g), s, policy_args(p)) for g, s, p in tasks]
    workers = _n_workers()
    if workers == 1 or len(packed) == 1:
        return [_trial_fitness_task(t) for t in packed]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_trial_fitness_task, packed, chunksize=4))


# ---------------------------------------------------------------------------
# evolution

@dataclass
class GenerationRecord:
    generation: int
    best_fitness: float
    mean_fitness: float
    sigma: float
    genotype_std_res0: float
    genotype_std_res1: float


@dataclass
class EvolutionResult:
    best_genotype: np.ndarray
    best_fitness: float
    history: list
    config: ExperimentConfig
    state: cma.CmaState


def run_evolution(
    config: ExperimentConfig,
    out_dir=None,
    progress: bool = False,
) -> EvolutionResult:
    """CMA-ES over genotypes, median-of-repeats fitness per individual."""
    rng_cma = np.random.default_rng(np.random.SeedSequence((config.master_seed, 0)))
    state = cma.init_cma(rng_cma, population_size=config.lam, sigma0=config.sigma0,
                         dim=GENOTYPE_SIZE)
    history = []
    best_genotype = None
    best_fitness = -np.inf

    out_dir = Path(out_dir) if out_dir is not None else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "config.txt").write_text(config.to_text())
        _write_run_manifest(out_dir, config)
        gen_csv = open(out_dir / "generations.csv", "w")
        gen_csv.write("generation,best_fitness,mean_fitness,sigma,"
                      "genotype_std_res0,genotype_std_res1\n")
    else:
        gen_csv = None

    try:
        for gen in range(config.generations):
            candidates = cma.ask(state, rng_cma)
            tasks = [
                (candidates[i], trial_seed(config.master_seed, _TAG_EVOLVE, gen, i, rep), None)
                for i in range(config.lam)
                for rep in range(config.fitness_repeats)
            ]
            flat = _run_trials(config, tasks)
            evaluated = []
            for i in range(config.lam):
                trials = flat[i * config.fitness_repeats : (i + 1) * config.fitness_repeats]
                evaluated.append(cma.EvaluatedIndividual.from_trials(candidates[i], trials))
            try:
                state = cma.tell(state, evaluated)
            except (ValueError, FloatingPointError) as exc:
                raise RuntimeError(f"optimizer update failed at generation {gen}") from exc

            fits = np.array([e.fitness for e in evaluated])
            pop = np.array(candidates)
            rec = GenerationRecord(
                generation=gen,
                best_fitness=float(fits.max()),
                mean_fitness=float(fits.mean()),
                sigma=state.sigma,
                genotype_std_res0=float(pop[:, :18].std(axis=0, ddof=0).mean()),
                genotype_std_res1=float(pop[:, 18:].std(axis=0, ddof=0).mean()),
            )
            history.append(rec)
            gen_best = int(np.argmax(fits))
            if fits[gen_best] > best_fitness:
                best_fitness = float(fits[gen_best])
                best_genotype = np.array(candidates[gen_best])
            if gen_csv is not None:
                gen_csv.write(
                    f"{rec.generation},{rec.best_fitness!r},{rec.mean_fitness!r},"
                    f"{rec.sigma!r},{rec.genotype_std_res0!r},{rec.genotype_std_res1!r}\n"
                )
                gen_csv.flush()
            if progress:
                print(f"gen {gen:4d}  best {rec.best_fitness:.4f}  "
                      f"mean {rec.mean_fitness:.4f}  sigma {rec.sigma:.3f}")
    finally:
        if gen_csv is not None:
            gen_csv.close()

    if out_dir is not None:
        manifest = GenotypeManifest(
            reservoir_seeds=(config.reservoir_seed_0, config.reservoir_seed_1),
            arena=config.arena.value,
            config_hash=config.config_hash,
            extra={"best_fitness": best_fitness,
                   "selection_rule": "best-ever individual across the run"},
        )
        save_genotype(out_dir / "best_genotype.txt", best_genotype, manifest)

    return EvolutionResult(
        best_genotype=best_genotype,
        best_fitness=best_fitness,
        history=history,
        config=config,
        state=state,
    )


def _write_run_manifest(out_dir: Path, config: ExperimentConfig) -> None:
    from swarmtaxis import __version__

    manifest = {
        "config_hash": config.config_hash,
        "master_seed": config.master_seed,
        "reservoir_seeds": [config.reservoir_seed_0, config.reservoir_seed_1],
        "version": __version__,
    }
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# ratio sweep and policy derivation

SWEEP_RATIOS = (1.0, 0.75, 0.5, 0.25, 0.0)       # green fraction: 4:0 .. 0:4
SWEEP_R_DISTS = (0.0, 0.25, 0.5, 0.75, 1.0, 1.25)
POLICY_BREAKPOINTS = (0.125, 0.375, 0.625, 0.875)


@dataclass
class RatioSweepGrid:
    ratios: tuple          # green fractions, one per grid row
    r_dists: tuple         # spawn distance factors, one per grid column
    mean_fitness: np.ndarray  # (len(ratios), len(r_dists))
    repetitions: int = 0

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("ratio," + ",".join(str(r) for r in self.r_dists) + "\n")
            for i, ratio in enumerate(self.ratios):
                fh.write(str(ratio) + "," +
                         ",".join(repr(float(v)) for v in self.mean_fitness[i]) + "\n")

    @classmethod
    def from_csv(cls, path) -> "RatioSweepGrid":
        with open(path) as fh:
            header = fh.readline().strip().split(",")
            r_dists = tuple(float(v) for v in header[1:])
            ratios, rows = [], []
            for line in fh:
                parts = line.strip().split(",")
                ratios.append(float(parts[0]))
                rows.append([float(v) for v in parts[1:]])
        return cls(ratios=tuple(ratios), r_dists=r_dists, mean_fitness=np.array(rows))


def run_ratio_sweep(
    config: ExperimentConfig,
    genotype: np.ndarray,
    ratios: Sequence[float] = SWEEP_RATIOS,
    r_dists: Sequence[float] = SWEEP_R_DISTS,
    repetitions: Optional[int] = None,
) -> RatioSweepGrid:
    """Mean fitness per (sub-group ratio, spawn distance) cell."""
    reps = config.repetitions if repetitions is None else repetitions
    grid = np.empty((len(ratios), len(r_dists)))
    for i, ratio in enumerate(ratios):
        for j, r_dist in enumerate(r_dists):
            cell_config = replace(config, ratio=ratio, r_dist=r_dist, adaptive=False)
            tasks = [
                (genotype, trial_seed(config.master_seed, _TAG_SWEEP, i, j, rep), None)
                for rep in range(reps)
            ]
            grid[i, j] = float(np.mean(_run_trials(cell_config, tasks)))
    return RatioSweepGrid(ratios=tuple(ratios), r_dists=tuple(r_dists),
                          mean_fitness=grid, repetitions=reps)


def _light_at_r_dist(r_dist: float) -> float:
    """Analytic Center-arena light at a spawn distance factor."""
    return G_MAX * max(0.0, 1.0 - (r_dist * SPAWN_DISTANCE) / (ARENA_SIZE / 2.0))


def _best_ratio(ratios: np.ndarray, scores: np.ndarray) -> float:
    """Argmax ratio; ties go to the most mixed ratio, then to more green."""
    best = scores.max()
    tied = ratios[scores == best]
    mixedness = -np.abs(tied - 0.5)
    most_mixed = tied[mixedness == mixedness.max()]
    return float(most_mixed.max())


def derive_policy(
    grid: RatioSweepGrid,
    breakpoints: Sequence[float] = POLICY_BREAKPOINTS,
    update_period: float = 5.0,
) -> RegulatoryPolicy:
    """Heuristic policy from a ratio sweep.

    The outermost breakpoints split spawn distances into near / middle / far
    regions (the paper's published case function has exactly three bands;
    the interior breakpoints end up between rows whose optimum does not
    change). Each region's best ratio, by mean fitness over its rows,
    becomes the green-expression probability for the corresponding light
    band; region boundaries map to light values through the Center arena's
    analytic form, truncated to integers.
    """
    ratios = np.asarray(grid.ratios, dtype=float)
    r_dists = np.asarray(grid.r_dists, dtype=float)
    edges = (breakpoints[0], breakpoints[-1])
    regions = [
        r_dists < edges[0],
        (r_dists >= edges[0]) & (r_dists < edges[1]),
        r_dists >= edges[1],
    ]
    probs = []   # ordered near -> far
    bounds = []  # r_dist boundary after each region
    for region, boundary in zip(regions, (*edges, None)):
        if not region.any():
            continue
        scores = grid.mean_fitness[:, region].mean(axis=1)
        probs.append(_best_ratio(ratios, scores))
        if boundary is not None:
            bounds.append(boundary)

    # merge adjacent equal-probability bands; light decreases with distance,
    # so reverse into ascending-light order for the policy
    thresholds, band_probs = [], [probs[0]]
    for k in range(1, len(probs)):
        if probs[k] != band_probs[-1]:
            thresholds.append(float(int(_light_at_r_dist(bounds[k - 1]))))
            band_probs.append(probs[k])
    return RegulatoryPolicy(
        thresholds=tuple(reversed(thresholds)),
        probabilities=tuple(reversed(band_probs)),
        update_period=update_period,
    )


# ---------------------------------------------------------------------------
# validation suite

@dataclass
class ValidationCell:
    kind: str                 # "size" or "arena"
    value: object
    fixed_fitnesses: np.ndarray
    adaptive_fitnesses: np.ndarray
    report: "object"          # StatReport of adaptive vs fixed

    @property
    def fixed_mean(self) -> float:
        return float(self.fixed_fitnesses.mean())

    @property
    def adaptive_mean(self) -> float:
        return float(self.adaptive_fitnesses.mean())


@dataclass
class ValidationResult:
    cells: list
    aggregate: "object"       # StatReport over all trials pooled
    bonferroni: int = 6


def run_validation(
    config: ExperimentConfig,
    genotype: np.ndarray,
    policy: RegulatoryPolicy,
    swarm_sizes: Sequence[int] = (10, 20, 50),
    arenas: Sequence[ArenaKind] = (ArenaKind.BIMODAL, ArenaKind.LINEAR, ArenaKind.BANANA),
    repetitions: Optional[int] = None,
) -> ValidationResult:
    """Scalability and robustness suites, fixed 2:2 vs adaptive variants."""
    from swarmtaxis.metrics import two_sample_t

    reps = config.repetitions if repetitions is None else repetitions
    cells = []
    all_fixed, all_adaptive = [], []
    specs = [("size", s) for s in swarm_sizes] + [("arena", a) for a in arenas]
    for cell_idx, (kind, value) in enumerate(specs):
        cell_config = replace(
            config,
            swarm_size=value if kind == "size" else config.swarm_size,
            arena=value if kind == "arena" else config.arena,
            ratio=0.5,
        )
        results = {}
        for variant_idx, adaptive in enumerate((False, True)):
            variant_config = replace(cell_config, adaptive=adaptive)
            tasks = [
                (
                    genotype,
                    trial_seed(config.master_seed, _TAG_VALIDATE, cell_idx, variant_idx, rep),
                    policy if adaptive else None,
                )
                for rep in range(reps)
            ]
            results[adaptive] = np.array(_run_trials(variant_config, tasks))
        label = f"{kind}={value.value if isinstance(value, ArenaKind) else value}"
        cells.append(
            ValidationCell(
                kind=kind,
                value=value,
                fixed_fitnesses=results[False],
                adaptive_fitnesses=results[True],
                report=two_sample_t(results[True], results[False], label=label),
            )
        )
        all_fixed.append(results[False])
        all_adaptive.append(results[True])

    aggregate = two_sample_t(
        np.concatenate(all_adaptive), np.concatenate(all_fixed), label="aggregate"
    )
    return ValidationResult(cells=cells, aggregate=aggregate, bonferroni=6)
