"""Monte Carlo tomography experiments.

This module provides:
- sample_counts: one simulated data set from a true state
- simulate_counts: a block of trials, trial t drawn on stream (seed, t)
- empirical_risk: the sample mean of the squared error over many trials

Because every trial owns its random stream, results do not depend on the
block size or on the number of worker threads.
"""

import logging
from typing import Optional

import numpy as np

from minimax_tomography.core.config import get_settings
from minimax_tomography.core.exceptions import InvalidArgumentError
from minimax_tomography.models.operators import SymmetricPOM
from minimax_tomography.models.simulation import EmpiricalRisk, SimConfig
from minimax_tomography.models.states import CountVector, ProbVector
from minimax_tomography.services.estimators import EstimatorLike, as_batch_estimator
from minimax_tomography.services.parallel import chunk_ranges, parallel_map
from minimax_tomography.services.rng import stream
from minimax_tomography.services.state_space import squared_errors

logger = logging.getLogger(__name__)


def _cdf(probs: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    return cdf


def _draw(cdf: np.ndarray, N: int, seed: int, index: int) -> np.ndarray:
    clicks = np.searchsorted(cdf, stream(seed, index).random(N), side="right")
    return np.bincount(clicks, minlength=cdf.size)


def sample_counts(
    true_p: ProbVector, N: int, seed: int, stream_index: int = 0
) -> CountVector:
    """Multinomial data from N independent categorical clicks.

    Args:
        true_p: Outcome probabilities.
        N: Number of clicks.
        seed: 64-bit seed.
        stream_index: Which stream of the seed to draw from.

    Raises:
        InvalidArgumentError: If N < 1.
    """
    if N < 1:
        raise InvalidArgumentError(f"N must be at least 1, got {N}")
    return CountVector(counts=_draw(_cdf(true_p.array), N, seed, stream_index))


def simulate_counts(true_p: ProbVector, N: int, seed: int, start: int, stop: int) -> np.ndarray:
    """Count matrix for trials start..stop-1."""
    cdf = _cdf(true_p.array)
    return np.stack([_draw(cdf, N, seed, t) for t in range(start, stop)])


def empirical_risk(
    estimator: EstimatorLike,
    true_p: ProbVector,
    pom: SymmetricPOM,
    config: SimConfig,
    threads: Optional[int] = None,
) -> EmpiricalRisk:
    """Mean squared error over independent simulated experiments.

    Each block of trials is estimated once per distinct count vector.

    Raises:
        InvalidArgumentError: If true_p does not match the POM.
    """
    if true_p.num_outcomes != pom.num_outcomes:
        raise InvalidArgumentError(
            f"State has {true_p.num_outcomes} outcomes, POM has {pom.num_outcomes}"
        )
    batch = as_batch_estimator(estimator, pom)
    p = true_p.array

    def run_block(bounds: tuple[int, int]) -> tuple[float, float]:
        counts = simulate_counts(true_p, config.N, config.seed, *bounds)
        unique, inverse = np.unique(counts, axis=0, return_inverse=True)
        estimates = np.asarray(batch(unique), dtype=float)[inverse.reshape(-1)]
        errors = squared_errors(estimates, p, pom)
        return float(errors.sum()), float((errors * errors).sum())

    blocks = chunk_ranges(config.trials, get_settings().MC_CHUNK_SIZE)
    parts = parallel_map(run_block, blocks, threads=threads, desc="trials")
    total = sum(part[0] for part in parts)
    total_sq = sum(part[1] for part in parts)

    n = config.trials
    mean = total / n
    if n > 1:
        variance = max(total_sq / n - mean * mean, 0.0) * n / (n - 1)
        std_err = float(np.sqrt(variance / n))
    else:
        std_err = 0.0
    logger.info(f"Empirical risk over {n} trials at N = {config.N}: {mean:.6g} +/- {std_err:.2g}")
    return EmpiricalRisk(mean=mean, std_err=std_err, trials=n)
