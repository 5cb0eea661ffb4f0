"""Reservoir network controllers and the online regulatory mechanism.

Each sub-group runs the same architecture: two fixed random 9x9 hidden
ReLU layers (the reservoir, frozen at creation) and an evolvable 2x9 tanh
output layer. The 36-value genotype concatenates both sub-groups' output
layers. The regulatory policy lets a robot re-draw which reservoir it
expresses from its local light value every few seconds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

N_INPUTS = 9
N_OUTPUTS = 2
WEIGHTS_PER_LAYER = N_OUTPUTS * N_INPUTS  # 18
GENOTYPE_SIZE = 2 * WEIGHTS_PER_LAYER     # 36

Genotype = np.ndarray  # shape (36,)


@dataclass(frozen=True)
class ReservoirSpec:
    """Frozen random hidden layers, a deterministic function of ``seed``."""

    w_h1: np.ndarray
    w_h2: np.ndarray
    seed: int

    def __post_init__(self):
        self.w_h1.setflags(write=False)
        self.w_h2.setflags(write=False)


def build_reservoir(seed: int) -> ReservoirSpec:
    rng = np.random.default_rng(seed)
    w_h1 = rng.uniform(-1.0, 1.0, size=(N_INPUTS, N_INPUTS))
    w_h2 = rng.uniform(-1.0, 1.0, size=(N_INPUTS, N_INPUTS))
    return ReservoirSpec(w_h1=w_h1, w_h2=w_h2, seed=seed)


def decode(genotype: Genotype) -> tuple[np.ndarray, np.ndarray]:
    """Split a 36-vector into the two 2x9 output layers (row-major)."""
    genotype = np.asarray(genotype, dtype=float)
    if genotype.shape != (GENOTYPE_SIZE,):
        raise ValueError(f"genotype must have length {GENOTYPE_SIZE}")
    if not np.all(np.isfinite(genotype)):
        raise ValueError("genotype must be finite")
    out0 = genotype[:WEIGHTS_PER_LAYER].reshape(N_OUTPUTS, N_INPUTS)
    out1 = genotype[WEIGHTS_PER_LAYER:].reshape(N_OUTPUTS, N_INPUTS)
    return out0, out1


def encode(out0: np.ndarray, out1: np.ndarray) -> Genotype:
    return np.concatenate([np.ravel(out0), np.ravel(out1)])


def forward(res: ReservoirSpec, w_out: np.ndarray, inputs: np.ndarray) -> tuple[float, float]:
    """(v, w) command for one robot; tanh output, zero biases throughout."""
    h1 = np.maximum(res.w_h1 @ inputs, 0.0)
    h2 = np.maximum(res.w_h2 @ h1, 0.0)
    v, w = np.tanh(w_out @ h2)
    return float(v), float(w)


def forward_swarm(
    reservoirs: tuple[ReservoirSpec, ReservoirSpec],
    layers: tuple[np.ndarray, np.ndarray],
    inputs: np.ndarray,
    active: np.ndarray,
) -> np.ndarray:
    """Batched forward pass; each robot uses its active reservoir.

    ``inputs`` is (n, 9), ``active`` is (n,) in {0, 1}; returns (n, 2).
    """
    out = np.empty((inputs.shape[0], N_OUTPUTS))
    for r in (0, 1):
        sel = active == r
        if not sel.any():
            continue
        s = inputs[sel]
        h1 = np.maximum(s @ reservoirs[r].w_h1.T, 0.0)
        h2 = np.maximum(h1 @ reservoirs[r].w_h2.T, 0.0)
        out[sel] = np.tanh(h2 @ layers[r].T)
    return out


@dataclass(frozen=True)
class RegulatoryPolicy:
    """Probability of expressing reservoir 0 (green) as a function of light.

    ``probabilities`` has one entry per band: at or below ``thresholds[0]``,
    then each (thresholds[k-1], thresholds[k]] band, then above the last
    threshold. Re-drawn every ``update_period`` seconds.
    """

    thresholds: tuple = (76.0, 229.0)
    probabilities: tuple = (0.5, 0.75, 1.0)
    update_period: float = 5.0

    def __post_init__(self):
        if len(self.probabilities) != len(self.thresholds) + 1:
            raise ValueError("need one probability per light band")
        if any(not 0.0 <= p <= 1.0 for p in self.probabilities):
            raise ValueError("probabilities must lie in [0, 1]")
        if any(a >= b for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise ValueError("thresholds must be strictly increasing")

    def p_green(self, light: float) -> float:
        band = int(np.searchsorted(np.asarray(self.thresholds), light, side="left"))
        return self.probabilities[band]


def regulate(policy: RegulatoryPolicy, light: float, rng: np.random.Generator) -> int:
    """Draw the active reservoir: 0 with probability p_green(light), else 1."""
    return 0 if rng.random() < policy.p_green(light) else 1


def regulate_swarm(policy: RegulatoryPolicy, light: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One regulatory draw per robot, in fixed robot order."""
    thresholds = np.asarray(policy.thresholds)
    probs = np.asarray(policy.probabilities)
    p = probs[np.searchsorted(thresholds, light, side="left")]
    return np.where(rng.random(light.shape[0]) < p, 0, 1)


@dataclass
class GenotypeManifest:
    """Provenance recorded next to a saved genotype."""

    reservoir_seeds: tuple
    arena: str
    config_hash: str
    extra: dict = field(default_factory=dict)


def save_genotype(path, genotype: Genotype, manifest: GenotypeManifest) -> None:
    """36 decimal values, one per line, plus a JSON manifest sidecar."""
    path = Path(path)
    genotype = np.asarray(genotype, dtype=float)
    decode(genotype)  # validates
    with open(path, "w") as fh:
        for v in genotype:
            fh.write(f"{float(v)!r}\n")
    meta = {
        "reservoir_seeds": list(manifest.reservoir_seeds),
        "arena": manifest.arena,
        "config_hash": manifest.config_hash,
        **manifest.extra,
    }
    with open(path.with_suffix(path.suffix + ".manifest.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_genotype(path) -> tuple[Genotype, dict]:
    path = Path(path)
    genotype = np.array([float(line) for line in open(path) if line.strip()])
    decode(genotype)  # validates
    manifest_path = path.with_suffix(path.suffix + ".manifest.json")
    manifest = json.load(open(manifest_path)) if manifest_path.exists() else {}
    return genotype, manifest
