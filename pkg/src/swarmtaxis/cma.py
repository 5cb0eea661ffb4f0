"""CMA-ES with rank-mu and rank-one covariance updates and CSA step-size
control (the standard Hansen formulation, maximizing).

The state is an explicit value passed through ask/tell so runs can be
checkpointed per generation; the eigendecomposition is refreshed on every
tell (dimension 36 makes lazy updates pointless).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

EIGEN_FLOOR = 1e-14  # relative eigenvalue clamp for covariance repair


@dataclass(frozen=True)
class EvaluatedIndividual:
    genotype: np.ndarray
    fitness: float
    trial_fitnesses: Optional[tuple] = None

    def __post_init__(self):
        if self.trial_fitnesses is not None:
            med = float(np.median(self.trial_fitnesses))
            if not np.isclose(med, self.fitness, rtol=0.0, atol=1e-12):
                raise ValueError("fitness must be the median of trial_fitnesses")

    @classmethod
    def from_trials(cls, genotype: np.ndarray, trial_fitnesses: Sequence[float]):
        trials = tuple(float(f) for f in trial_fitnesses)
        return cls(genotype=genotype, fitness=float(np.median(trials)), trial_fitnesses=trials)


@dataclass
class CmaState:
    mean: np.ndarray
    sigma: float
    cov: np.ndarray
    path_sigma: np.ndarray
    path_c: np.ndarray
    generation: int
    eval_count: int
    lam: int
    weights: np.ndarray  # mu positive recombination weights, sum 1
    mu_eff: float
    c_sigma: float
    d_sigma: float
    c_c: float
    c_1: float
    c_mu: float
    chi_n: float
    # eigendecomposition of cov, refreshed after each update
    eig_vectors: np.ndarray = field(default=None, repr=False)
    eig_values: np.ndarray = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def mu(self) -> int:
        return self.weights.shape[0]


def _decompose(cov: np.ndarray):
    """Symmetric eigendecomposition with eigenvalue repair."""
    cov = (cov + cov.T) / 2.0
    vals, vecs = np.linalg.eigh(cov)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("covariance decomposition produced non-finite eigenvalues")
    floor = EIGEN_FLOOR * vals.max()
    if floor <= 0.0:
        raise FloatingPointError("covariance lost positive-definiteness beyond repair")
    vals = np.maximum(vals, floor)
    return vals, vecs


def init_cma(
    rng: np.random.Generator,
    population_size: int = 30,
    sigma0: float = 1.0,
    dim: int = 36,
    init_range: tuple = (-5.0, 5.0),
    mean: Optional[np.ndarray] = None,
) -> CmaState:
    """Fresh strategy state: mean ~ U[init_range]^dim, identity covariance."""
    if population_size < 2:
        raise ValueError("population_size must be >= 2")
    lam = population_size
    mu = lam // 2
    raw = np.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
    weights = raw / raw.sum()
    mu_eff = 1.0 / np.sum(weights ** 2)

    n = dim
    c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0)
    d_sigma = 1.0 + 2.0 * max(0.0, np.sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0) + c_sigma
    c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n)
    c_1 = 2.0 / ((n + 1.3) ** 2 + mu_eff)
    c_mu = min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((n + 2.0) ** 2 + mu_eff))
    chi_n = np.sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n ** 2))

    if mean is None:
        mean = rng.uniform(init_range[0], init_range[1], size=n)
    cov = np.eye(n)
    vals, vecs = _decompose(cov)
    return CmaState(
        mean=np.asarray(mean, dtype=float),
        sigma=float(sigma0),
        cov=cov,
        path_sigma=np.zeros(n),
        path_c=np.zeros(n),
        generation=0,
        eval_count=0,
        lam=lam,
        weights=weights,
        mu_eff=mu_eff,
        c_sigma=c_sigma,
        d_sigma=d_sigma,
        c_c=c_c,
        c_1=c_1,
        c_mu=c_mu,
        chi_n=chi_n,
        eig_vectors=vecs,
        eig_values=vals,
    )


def ask(state: CmaState, rng: np.random.Generator) -> list:
    """Sample lambda candidates from N(mean, sigma^2 C)."""
    b = state.eig_vectors
    d = np.sqrt(state.eig_values)
    z = rng.standard_normal(size=(state.lam, state.dim))
    y = z @ (b * d).T  # rows: B D z
    return list(state.mean + state.sigma * y)


def tell(state: CmaState, evaluated: Sequence[EvaluatedIndividual]) -> CmaState:
    """One generation update from lambda evaluated candidates (maximizing)."""
    if len(evaluated) != state.lam:
        raise ValueError(f"expected exactly {state.lam} evaluated individuals")
    fitness = np.array([e.fitness for e in evaluated])
    if not np.all(np.isfinite(fitness)):
        raise ValueError("non-finite fitness")

    # higher fitness ranks first; ties broken by sample index
    order = np.lexsort((np.arange(state.lam), -fitness))
    xs = np.array([np.asarray(evaluated[i].genotype, dtype=float) for i in order[: state.mu]])
    ys = (xs - state.mean) / state.sigma
    y_w = state.weights @ ys
    mean = state.mean + state.sigma * y_w

    b = state.eig_vectors
    d = np.sqrt(state.eig_values)
    cov_inv_sqrt = (b / d) @ b.T
    n = state.dim
    g = state.generation + 1

    p_sigma = (1.0 - state.c_sigma) * state.path_sigma + np.sqrt(
        state.c_sigma * (2.0 - state.c_sigma) * state.mu_eff
    ) * (cov_inv_sqrt @ y_w)
    norm_ps = np.linalg.norm(p_sigma)
    h_sigma = norm_ps / np.sqrt(1.0 - (1.0 - state.c_sigma) ** (2 * g)) < (
        1.4 + 2.0 / (n + 1.0)
    ) * state.chi_n
    p_c = (1.0 - state.c_c) * state.path_c + float(h_sigma) * np.sqrt(
        state.c_c * (2.0 - state.c_c) * state.mu_eff
    ) * y_w

    rank_one = np.outer(p_c, p_c)
    rank_mu = (ys.T * state.weights) @ ys
    stall = (1.0 - float(h_sigma)) * state.c_c * (2.0 - state.c_c)
    cov = (
        (1.0 - state.c_1 - state.c_mu) * state.cov
        + state.c_1 * (rank_one + stall * state.cov)
        + state.c_mu * rank_mu
    )
    cov = (cov + cov.T) / 2.0
    sigma = state.sigma * np.exp((state.c_sigma / state.d_sigma) * (norm_ps / state.chi_n - 1.0))

    vals, vecs = _decompose(cov)
    trials = sum(
        len(e.trial_fitnesses) if e.trial_fitnesses is not None else 1 for e in evaluated
    )
    return replace(
        state,
        mean=mean,
        sigma=float(sigma),
        cov=cov,
        path_sigma=p_sigma,
        path_c=p_c,
        generation=g,
        eval_count=state.eval_count + trials,
        eig_vectors=vecs,
        eig_values=vals,
    )
