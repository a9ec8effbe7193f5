"""Two-step collapse: decohere the joint final state, then sample outcomes.

The coherent final density operator contains off-diagonal terms between
pointer sectors. Butchering deletes them, leaving a mixture of pointer
branches whose statistical weights are the object-side probabilities
<phi|E_k|phi>. The mixture step is realized operationally as seeded
sampling from those weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_EPS, as_complex, frozen, validate_tolerance
from .measurement import MeasurementModel, premeasure
from .spectral import SpectralForm

# identity of the seeded generator backing sample(); recorded in reports
GENERATOR = "pcg64"


@dataclass(frozen=True)
class OutcomeDistribution:
    """Nonnegative outcome weights summing to one."""

    outcomes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "outcomes", frozen(np.asarray(self.outcomes, dtype=np.int64)))
        object.__setattr__(self, "weights", frozen(np.asarray(self.weights, dtype=np.float64)))
        if self.outcomes.size != self.weights.size:
            raise ValueError("outcomes and weights must be coindexed")


@dataclass(frozen=True)
class SampleReport:
    """Counts from seeded sampling, coindexed with the distribution outcomes."""

    counts: np.ndarray
    total: int
    seed: int
    generator: str = GENERATOR

    def __post_init__(self):
        object.__setattr__(self, "counts", frozen(np.asarray(self.counts, dtype=np.int64)))
        if int(np.sum(self.counts)) != self.total:
            raise ValueError("counts do not sum to total")


def weights(phi_a, observable: SpectralForm) -> OutcomeDistribution:
    """Statistical weights w_k = <phi|E_k|phi> of the collapse mixture."""
    phi_a = as_complex(phi_a)
    if phi_a.shape != (observable.dim,):
        raise ValueError(f"state has shape {phi_a.shape}, expected ({observable.dim},)")
    w = np.array(
        [np.vdot(phi_a, p @ phi_a).real for p in observable.projectors], dtype=np.float64
    )
    # rounding can leave values a hair below zero
    w = np.maximum(w, 0.0)
    return OutcomeDistribution(np.arange(observable.outcomes), w)


def final_density(model: MeasurementModel, phi_a) -> np.ndarray:
    """Coherent rank-one density operator |Phi_f><Phi_f| of the joint final state."""
    final = premeasure(model, phi_a)
    return np.outer(final, final.conj())


def butcher(model: MeasurementModel, phi_a, eps: float = DEFAULT_EPS) -> np.ndarray:
    """Decohered mixture sum_k w_k |beta_k><beta_k| of pointer branches.

    beta_k is the normalized pointer branch F_k Phi_f / ||F_k Phi_f|| and
    w_k the object-side weight; branches with amplitude below eps are
    omitted. Equals the pinching sum_k F_k |Phi_f><Phi_f| F_k for exact
    models, with every off-diagonal pointer block removed.
    """
    validate_tolerance(eps)
    final = premeasure(model, phi_a)
    w = weights(phi_a, model.observable).weights
    rho = np.zeros((model.dim, model.dim), dtype=np.complex128)
    for k in range(model.outcomes):
        piece = model.lifted_pointer(k) @ final
        norm = float(np.linalg.norm(piece))
        if norm < eps:
            continue
        beta = piece / norm
        rho += w[k] * np.outer(beta, beta.conj())
    return rho


def sample(dist: OutcomeDistribution, n: int, seed: int) -> SampleReport:
    """Draw n outcomes by inverse CDF over the weight array.

    The generator is numpy's PCG64 seeded with `seed`, so identical seeds
    reproduce identical counts. Weights below DEFAULT_EPS are excluded
    from the support.

    Raises:
        ValueError: n is not a positive integer or no weight is sampleable.
    """
    if n < 1:
        raise ValueError(f"sample size must be positive, got {n}")
    keep = dist.weights >= DEFAULT_EPS
    if not np.any(keep):
        raise ValueError("distribution has no weight above threshold")
    support = np.flatnonzero(keep)
    cdf = np.cumsum(dist.weights[support])
    rng = np.random.default_rng(seed)
    draws = rng.random(n) * cdf[-1]
    picks = np.searchsorted(cdf, draws, side="right")
    counts = np.zeros(dist.outcomes.size, dtype=np.int64)
    for s, c in zip(*np.unique(picks, return_counts=True)):
        counts[support[s]] = c
    return SampleReport(counts=counts, total=n, seed=seed)
