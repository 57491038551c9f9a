"""Point estimators from click counts to outcome probabilities.

This module provides:
- the classical estimators (relative frequencies, add-beta, classical minimax)
- the admixture corrections (purity target for the qubit SIC, spectral for
  any informationally complete measurement)
- the quantum estimators (admixed minimax, admixed ML, constrained ML)
- Monte Carlo and discrete-prior posterior means
- estimate_batch, which evaluates an EstimatorSpec on a whole (M, K) count
  matrix and is what the risk engine and simulator call

Every batch function works on integer count matrices and returns an (M, K)
probability matrix; the single-vector operations wrap them.

Example:
    >>> counts = CountVector(counts=(4, 0, 0, 0))
    >>> result = admix_lambda_qubit(counts, epsilon=0.0)
    >>> round(result.lambda_, 12)
    0.5
"""

import logging
import math
from typing import Callable, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import logsumexp

from minimax_tomography.core.config import get_settings
from minimax_tomography.core.exceptions import (
    DegeneratePosteriorError,
    EmptyDataError,
    InvalidArgumentError,
)
from minimax_tomography.models.estimator_spec import (
    QUBIT_SIC_KINDS,
    EstimatorKind,
    EstimatorSpec,
    MinimaxCoefficients,
)
from minimax_tomography.models.operators import PomKind, SymmetricPOM
from minimax_tomography.models.risk import DiscretePrior
from minimax_tomography.models.simulation import MonteCarloEstimate
from minimax_tomography.models.states import CountVector, ProbVector
from minimax_tomography.services.parallel import chunk_ranges, parallel_map
from minimax_tomography.services.pom_geometry import build_pom
from minimax_tomography.services.rng import row_stream_index, stream
from minimax_tomography.services.state_space import min_eigenvalues, sic_purity_bound

logger = logging.getLogger(__name__)

# (M, K) counts -> (M, K) probabilities
BatchEstimator = Callable[[np.ndarray], np.ndarray]
EstimatorLike = Union[EstimatorSpec, BatchEstimator]

ML_GRADIENT_TOLERANCE = 1e-10
ML_MAX_ITERATIONS = 10_000
_MIN_STEP = 1e-30


class AdmixResult(BaseModel):
    """Admixture weight and the corrected estimate."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lambda_: float = Field(..., alias="lambda", ge=0.0, le=1.0)
    p_hat: ProbVector


class EstimateResult(BaseModel):
    """Output of estimate: the probabilities plus estimator diagnostics.

    Attributes:
        estimator: Label of the estimator used.
        p_hat: Estimated outcome probabilities.
        lambda_: Admixture weight, for the admixing estimators.
        std_err: Monte Carlo standard errors, for MEAN_MC.
        acceptance_rate: Physicality-cut acceptance, for MEAN_MC.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    estimator: str
    p_hat: ProbVector
    lambda_: Optional[float] = Field(default=None, alias="lambda")
    std_err: Optional[tuple[float, ...]] = None
    acceptance_rate: Optional[float] = None

    def to_json_dict(self) -> dict:
        """JSON dict with 'p_hat' as a plain list and unset fields dropped."""
        data = self.model_dump(by_alias=True, exclude_none=True)
        data["p_hat"] = list(self.p_hat.probs)
        return data


# =============================================================================
# Helpers
# =============================================================================


def as_count_matrix(counts: np.ndarray | CountVector) -> np.ndarray:
    """Coerce to a 2-D int64 count matrix."""
    if isinstance(counts, CountVector):
        return counts.array[None, :]
    matrix = np.atleast_2d(np.asarray(counts, dtype=np.int64))
    if np.any(matrix < 0):
        raise InvalidArgumentError("Counts must be non-negative")
    return matrix


def frequencies(counts: np.ndarray) -> np.ndarray:
    """Row-wise relative frequencies nu = n / N.

    Raises:
        EmptyDataError: If any row has no clicks.
    """
    matrix = as_count_matrix(counts)
    totals = matrix.sum(axis=1)
    if np.any(totals == 0):
        raise EmptyDataError()
    return matrix / totals[:, None].astype(float)


def _normalize_rows(probs: np.ndarray) -> np.ndarray:
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum(axis=1, keepdims=True)


def _check_epsilon(epsilon: float) -> float:
    if not 0.0 <= epsilon <= 0.25:
        raise InvalidArgumentError(f"epsilon must lie in [0, 1/4], got {epsilon}")
    return float(epsilon)


def _check_beta(beta: Optional[float]) -> float:
    if beta is None or not beta > 0:
        raise InvalidArgumentError(f"beta must be positive, got {beta}")
    return float(beta)


def _require_four_outcomes(num_outcomes: int) -> None:
    if num_outcomes != 4:
        raise InvalidArgumentError(
            f"Qubit SIC estimators need K = 4 outcomes, got {num_outcomes}"
        )


def _qubit_sic(pom: Optional[SymmetricPOM]) -> SymmetricPOM:
    if pom is None:
        return build_pom(PomKind.TETRAHEDRON)
    if not pom.is_qubit_sic or pom.directions is None:
        raise InvalidArgumentError(f"Qubit SIC estimators need the tetrahedron, got {pom!r}")
    return pom


def minimax_purity_bound(N: int, K: int) -> float:
    """Largest sum of squares of the classical minimax estimate, 1 - (1 - 1/K)(1 - b_N^2).

    Attained exactly for single-detector data.
    """
    b = MinimaxCoefficients.for_sample_size(N).b
    return 1.0 - (1.0 - 1.0 / K) * (1.0 - b * b)


# =============================================================================
# Classical estimators
# =============================================================================


def ml_classical_batch(counts: np.ndarray) -> np.ndarray:
    """Relative frequencies."""
    return frequencies(counts)


def add_beta_batch(counts: np.ndarray, beta: float) -> np.ndarray:
    """(n_k + beta) / (N + K beta)."""
    beta = _check_beta(beta)
    matrix = as_count_matrix(counts)
    totals = matrix.sum(axis=1, keepdims=True)
    K = matrix.shape[1]
    return (matrix + beta) / (totals + K * beta)


def minimax_seed(counts: np.ndarray, b: Optional[float] = None) -> np.ndarray:
    """a/K + b nu with a = 1 - b; b defaults to b_N = sqrt(N) / (1 + sqrt(N))."""
    nu = frequencies(counts)
    K = nu.shape[1]
    if b is None:
        roots = np.sqrt(as_count_matrix(counts).sum(axis=1, keepdims=True).astype(float))
        a_coef = 1.0 / (1.0 + roots)
        b_coef = roots / (1.0 + roots)
    else:
        a_coef, b_coef = 1.0 - b, b
    return a_coef / K + b_coef * nu


def classical_minimax_batch(counts: np.ndarray) -> np.ndarray:
    """The constant-risk estimator a_N/K + b_N nu_k."""
    return minimax_seed(counts)


def estimate_ml_classical(counts: CountVector) -> ProbVector:
    """Relative frequencies nu_k = n_k / N."""
    return ProbVector.from_array(ml_classical_batch(counts)[0])


def estimate_add_beta(counts: CountVector, beta: float) -> ProbVector:
    """The add-beta estimator (n_k + beta) / (N + K beta).

    Raises:
        InvalidArgumentError: If beta <= 0.
    """
    return ProbVector.from_array(add_beta_batch(counts, beta)[0])


def estimate_classical_minimax(counts: CountVector) -> ProbVector:
    """The classical minimax estimator, full rank for every finite N."""
    return ProbVector.from_array(classical_minimax_batch(counts)[0])


# =============================================================================
# Admixture
# =============================================================================


def admix_purity_batch(
    seeds: np.ndarray, epsilon: float
) -> tuple[np.ndarray, np.ndarray]:
    """Admix the uniform distribution until sum p^2 <= (1 - epsilon) / 3.

    For four outcomes, sum p^2 - 1/4 scales with (1 - lambda)^2 under
    admixture, so the smallest sufficient lambda is closed form.

    Args:
        seeds: (M, 4) seed probabilities.
        epsilon: Purity slack in [0, 1/4].

    Returns:
        (lambdas, probabilities).
    """
    epsilon = _check_epsilon(epsilon)
    seeds = np.atleast_2d(np.asarray(seeds, dtype=float))
    _require_four_outcomes(seeds.shape[1])
    target = (1.0 - epsilon) / 3.0
    excess = np.sum((seeds - 0.25) ** 2, axis=1)
    trigger = np.sum(seeds**2, axis=1) > target

    lambdas = np.zeros(seeds.shape[0])
    if np.any(trigger):
        assert np.all(excess[trigger] > 0), "purity above target with a uniform seed"
        allowed = (1.0 - 4.0 * epsilon) / 12.0
        lambdas[trigger] = 1.0 - np.sqrt(allowed / excess[trigger])
    lambdas = np.clip(lambdas, 0.0, 1.0)
    probs = (1.0 - lambdas)[:, None] * seeds + lambdas[:, None] / 4.0
    return lambdas, _normalize_rows(probs)


def admix_spectral_batch(
    seeds: np.ndarray, pom: SymmetricPOM
) -> tuple[np.ndarray, np.ndarray]:
    """Smallest admixture of 1/d making sum_k p_k Lambda_k positive semidefinite.

    With mu the smallest eigenvalue of the reconstructed seed, lambda is 0
    for mu >= 0 and |mu| / (1/d + |mu|) otherwise; probabilities mix toward
    the uniform distribution over the K outcomes.

    Raises:
        NotInformationallyCompleteError: If the POM is not IC.
    """
    seeds = np.atleast_2d(np.asarray(seeds, dtype=float))
    if seeds.shape[1] != pom.num_outcomes:
        raise InvalidArgumentError(
            f"Expected {pom.num_outcomes} probabilities, got {seeds.shape[1]}"
        )
    mu = min_eigenvalues(seeds, pom)
    deficit = np.where(mu < 0.0, -mu, 0.0)
    lambdas = deficit / (1.0 / pom.dim + deficit)
    probs = (1.0 - lambdas)[:, None] * seeds + lambdas[:, None] / pom.num_outcomes
    return lambdas, _normalize_rows(probs)


def _variant_b(counts: np.ndarray | CountVector, epsilon: float) -> float:
    N = max(int(as_count_matrix(counts).sum(axis=1).max()), 1)
    return MinimaxCoefficients.from_epsilon(N, epsilon).b


def admix_lambda_qubit(
    counts: CountVector, epsilon: float, variant_bn: bool = False
) -> AdmixResult:
    """Admix the classical minimax seed down to the purity target (1 - epsilon) / 3.

    Args:
        counts: Tetrahedron click counts (K = 4).
        epsilon: Purity slack in [0, 1/4].
        variant_bn: Seed with b = sqrt(1 - 4 epsilon) instead of b_N.

    Raises:
        InvalidArgumentError: For epsilon outside [0, 1/4] or K != 4.
    """
    epsilon = _check_epsilon(epsilon)
    _require_four_outcomes(counts.num_outcomes)
    b = _variant_b(counts, epsilon) if variant_bn else None
    lambdas, probs = admix_purity_batch(minimax_seed(counts, b), epsilon)
    return AdmixResult(lambda_=float(lambdas[0]), p_hat=ProbVector.from_array(probs[0]))


def admix_physical_general(p0: ProbVector, pom: SymmetricPOM) -> AdmixResult:
    """Smallest admixture of the maximally mixed state that restores positivity.

    Raises:
        NotInformationallyCompleteError: If the POM is not IC.
    """
    lambdas, probs = admix_spectral_batch(p0.array, pom)
    return AdmixResult(lambda_=float(lambdas[0]), p_hat=ProbVector.from_array(probs[0]))


def quantum_minimax_batch(
    counts: np.ndarray, epsilon: float, variant_bn: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """Admixed classical minimax estimates with their lambdas."""
    epsilon = _check_epsilon(epsilon)
    b = _variant_b(counts, epsilon) if variant_bn else None
    return admix_purity_batch(minimax_seed(counts, b), epsilon)


def ml_admix_batch(counts: np.ndarray, epsilon: float) -> tuple[np.ndarray, np.ndarray]:
    """Admixed relative frequencies with their lambdas."""
    return admix_purity_batch(frequencies(counts), epsilon)


def estimate_quantum_minimax(
    counts: CountVector, epsilon: float, variant_bn: bool = False
) -> ProbVector:
    """Classical minimax seed admixed to the purity target (1 - epsilon) / 3.

    Raises:
        InvalidArgumentError: For epsilon outside [0, 1/4] or K != 4.
    """
    return admix_lambda_qubit(counts, epsilon, variant_bn).p_hat


def estimate_ml_admix(counts: CountVector, epsilon: float) -> ProbVector:
    """Relative frequencies admixed to the purity target (1 - epsilon) / 3."""
    _require_four_outcomes(counts.num_outcomes)
    _, probs = ml_admix_batch(counts, epsilon)
    return ProbVector.from_array(probs[0])


# =============================================================================
# Constrained maximum likelihood
# =============================================================================


def _log_likelihood(nu: np.ndarray, args: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(args > 0.0, np.log(np.where(args > 0.0, args, 1.0)), -np.inf)
        terms = np.where(nu > 0.0, nu * logs, 0.0)
    return terms.sum(axis=1)


def _project(s: np.ndarray, radius: float) -> np.ndarray:
    norms = np.linalg.norm(s, axis=1, keepdims=True)
    scale = np.where(norms > radius, radius / np.maximum(norms, 1e-300), 1.0)
    return s * scale


def _tangential_norm(s: np.ndarray, grad: np.ndarray, radius: float) -> np.ndarray:
    norms = np.linalg.norm(s, axis=1)
    unit = s / np.maximum(norms, 1e-300)[:, None]
    radial = np.sum(grad * unit, axis=1)
    on_boundary = (norms >= radius * (1.0 - 1e-12)) & (radial > 0.0)
    tangential = grad - np.where(on_boundary, radial, 0.0)[:, None] * unit
    return np.linalg.norm(tangential, axis=1)


def _ascend(nu: np.ndarray, directions: np.ndarray, radius: float) -> np.ndarray:
    """Projected gradient ascent of sum nu_k log(1 + e_k . s) on |s| <= radius."""
    rows = nu.shape[0]
    s = np.zeros((rows, 3))
    value = _log_likelihood(nu, 1.0 + s @ directions.T)
    step = np.ones(rows)
    active = np.ones(rows, dtype=bool)

    iteration = 0
    for iteration in range(ML_MAX_ITERATIONS):
        args = 1.0 + s[active] @ directions.T
        grad = (nu[active] / np.where(args > 0.0, args, np.inf)) @ directions
        converged = _tangential_norm(s[active], grad, radius) < ML_GRADIENT_TOLERANCE
        converged |= step[active] < _MIN_STEP
        index = np.flatnonzero(active)
        active[index[converged]] = False
        if not active.any():
            break
        grad = grad[~converged]
        index = index[~converged]

        trial = _project(s[index] + step[index, None] * grad, radius)
        trial_value = _log_likelihood(nu[index], 1.0 + trial @ directions.T)
        accept = trial_value > value[index]
        s[index[accept]] = trial[accept]
        value[index[accept]] = trial_value[accept]
        step[index] = np.where(accept, step[index] * 2.0, step[index] * 0.5)
    else:
        logger.warning(
            f"ML ascent hit the {ML_MAX_ITERATIONS}-iteration cap on "
            f"{int(active.sum())} of {rows} count vectors"
        )
    logger.debug(f"ML ascent on {rows} count vectors finished after {iteration + 1} iterations")
    return s


def ml_quantum_batch(
    counts: np.ndarray, epsilon: float, pom: Optional[SymmetricPOM] = None
) -> np.ndarray:
    """Maximum likelihood over Bloch vectors with |s| <= sqrt(1 - 4 epsilon).

    Rows whose relative frequencies already satisfy the constraint are
    returned unchanged; the others are maximized on the ball.
    """
    epsilon = _check_epsilon(epsilon)
    pom = _qubit_sic(pom)
    directions = pom.directions
    assert directions is not None
    nu = frequencies(counts)
    _require_four_outcomes(nu.shape[1])
    radius = math.sqrt(max(0.0, 1.0 - 4.0 * epsilon))

    result = nu.copy()
    s_nu = 3.0 * nu @ directions
    slack = 12.0 * get_settings().PHYSICALITY_TOLERANCE
    infeasible = np.sum(s_nu**2, axis=1) > radius**2 + slack
    if not np.any(infeasible):
        return result
    if radius == 0.0:
        result[infeasible] = 0.25
        return result

    s = _ascend(nu[infeasible], directions, radius)
    result[infeasible] = _normalize_rows((1.0 + s @ directions.T) / 4.0)
    return result


def estimate_ml_quantum(
    counts: CountVector, epsilon: float = 0.0, pom: Optional[SymmetricPOM] = None
) -> ProbVector:
    """Maximum likelihood under the purity constraint sum p^2 <= (1 - epsilon) / 3.

    Raises:
        InvalidArgumentError: For epsilon outside [0, 1/4] or K != 4.
    """
    _require_four_outcomes(counts.num_outcomes)
    return ProbVector.from_array(ml_quantum_batch(counts, epsilon, pom)[0])


# =============================================================================
# Posterior means
# =============================================================================


def _posterior_moments(
    alpha: np.ndarray, samples: int, seed: int, indicator: bool, row: int
) -> tuple[int, np.ndarray, np.ndarray]:
    settings = get_settings()
    bound = sic_purity_bound(2) + settings.PHYSICALITY_TOLERANCE

    def draw(item: tuple[int, tuple[int, int]]) -> tuple[int, np.ndarray, np.ndarray]:
        chunk, (start, stop) = item
        rng = stream(seed, row_stream_index(row, chunk))
        draws = rng.dirichlet(alpha, size=stop - start)
        if indicator:
            draws = draws[np.sum(draws**2, axis=1) <= bound]
        return draws.shape[0], draws.sum(axis=0), (draws**2).sum(axis=0)

    ranges = list(enumerate(chunk_ranges(samples, settings.MC_CHUNK_SIZE)))
    parts = parallel_map(draw, ranges)
    accepted = sum(part[0] for part in parts)
    first = np.zeros_like(alpha)
    second = np.zeros_like(alpha)
    for _, s1, s2 in parts:
        first += s1
        second += s2
    return accepted, first, second


def mean_mc_batch(
    counts: np.ndarray,
    beta: float,
    samples: int,
    seed: Optional[int] = None,
    indicator: bool = False,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Monte Carlo posterior means for every row of a count matrix.

    Row i draws from Dirichlet(n + beta) on the streams (seed, i << 32 | chunk).

    Returns:
        (means, standard errors, acceptance rates).

    Raises:
        DegeneratePosteriorError: If the physicality cut rejects every draw.
    """
    beta = _check_beta(beta)
    if samples < 1000:
        raise InvalidArgumentError(f"samples must be at least 1000, got {samples}")
    matrix = as_count_matrix(counts)
    frequencies(matrix)
    if indicator:
        _require_four_outcomes(matrix.shape[1])
    seed = get_settings().DEFAULT_SEED if seed is None else seed

    means = np.empty(matrix.shape, dtype=float)
    errors = np.empty(matrix.shape, dtype=float)
    rates = np.empty(matrix.shape[0], dtype=float)
    for row, n in enumerate(matrix):
        accepted, first, second = _posterior_moments(
            n + beta, samples, seed, indicator, row
        )
        rate = accepted / samples
        if accepted == 0:
            raise DegeneratePosteriorError(
                f"Physicality cut rejected all {samples} draws for counts {n.tolist()}",
                acceptance_rate=rate,
            )
        if rate < 0.01:
            logger.warning(f"Low acceptance rate {rate:.3g} for counts {n.tolist()}")
        mean = first / accepted
        if accepted > 1:
            variance = np.maximum(second / accepted - mean**2, 0.0) * accepted / (accepted - 1)
            errors[row] = np.sqrt(variance / accepted)
        else:
            errors[row] = 0.0
        means[row] = mean / mean.sum()
        rates[row] = rate
    return means, errors, rates


def estimate_mean_mc(
    counts: CountVector,
    beta: float,
    samples: int,
    seed: Optional[int] = None,
    indicator: bool = False,
) -> MonteCarloEstimate:
    """Monte Carlo posterior mean for the power prior, optionally cut to physical states.

    Without the indicator this converges to the add-beta estimate; with it,
    draws violating sum p^2 <= 1/3 get weight zero (self-normalized).

    Raises:
        InvalidArgumentError: If beta <= 0 or samples < 1000.
        DegeneratePosteriorError: If every draw is rejected.
    """
    means, errors, rates = mean_mc_batch(counts, beta, samples, seed, indicator)
    logger.info(f"Posterior mean from {samples} draws, acceptance rate {rates[0]:.3g}")
    return MonteCarloEstimate(
        p_hat=ProbVector.from_array(means[0]),
        std_err=tuple(float(x) for x in errors[0]),
        acceptance_rate=float(rates[0]),
        samples=samples,
    )


def posterior_mean_batch(counts: np.ndarray, prior: DiscretePrior) -> np.ndarray:
    """Exact posterior means sum_i w_i L(D|p_i) p_i / sum_i w_i L(D|p_i)."""
    matrix = as_count_matrix(counts)
    if matrix.shape[1] != prior.num_outcomes:
        raise InvalidArgumentError(
            f"Prior has {prior.num_outcomes} outcomes, counts have {matrix.shape[1]}"
        )
    frequencies(matrix)
    weights = prior.weight_array
    keep = weights > 0
    support = prior.prob_matrix[keep]
    tiny = np.finfo(float).tiny
    log_post = np.log(weights[keep])[None, :] + matrix @ np.log(np.maximum(support, tiny)).T
    log_post -= logsumexp(log_post, axis=1, keepdims=True)
    return np.exp(log_post) @ support


def estimate_posterior_mean(counts: CountVector, prior: DiscretePrior) -> ProbVector:
    """The Bayes estimator for a discrete prior under squared error."""
    return ProbVector.from_array(posterior_mean_batch(counts, prior)[0])


def posterior_mean_estimator(prior: DiscretePrior) -> BatchEstimator:
    """Batch estimator closing over a discrete prior."""
    return lambda counts: posterior_mean_batch(counts, prior)


# =============================================================================
# Dispatch
# =============================================================================


def _check_pom_for(spec: EstimatorSpec, pom: Optional[SymmetricPOM], K: int) -> None:
    if spec.kind in QUBIT_SIC_KINDS:
        _require_four_outcomes(K)
        _qubit_sic(pom)
    elif pom is not None and pom.num_outcomes != K:
        raise InvalidArgumentError(
            f"Counts have {K} outcomes but the POM has {pom.num_outcomes}"
        )


def estimate_batch_with_lambda(
    spec: EstimatorSpec, counts: np.ndarray, pom: Optional[SymmetricPOM] = None
) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Evaluate a spec on a count matrix, also returning lambdas where defined."""
    matrix = as_count_matrix(counts)
    _check_pom_for(spec, pom, matrix.shape[1])
    kind = spec.kind

    if kind == EstimatorKind.ML_CLASSICAL:
        return ml_classical_batch(matrix), None
    if kind == EstimatorKind.ADD_BETA:
        return add_beta_batch(matrix, _check_beta(spec.beta)), None
    if kind == EstimatorKind.CLASSICAL_MINIMAX:
        return classical_minimax_batch(matrix), None
    if kind == EstimatorKind.QUANTUM_MINIMAX:
        lambdas, probs = quantum_minimax_batch(matrix, spec.epsilon, spec.variant_bn)
        return probs, lambdas
    if kind == EstimatorKind.ML_ADMIX:
        lambdas, probs = ml_admix_batch(matrix, spec.epsilon)
        return probs, lambdas
    if kind == EstimatorKind.ML_QUANTUM:
        return ml_quantum_batch(matrix, 0.0, pom), None
    if kind == EstimatorKind.ML_QUANTUM_EPSILON:
        return ml_quantum_batch(matrix, spec.epsilon, pom), None
    if kind == EstimatorKind.MEAN_MC:
        means, _, _ = mean_mc_batch(
            matrix, _check_beta(spec.beta), spec.samples, spec.seed, spec.indicator
        )
        return means, None
    raise InvalidArgumentError(f"Unknown estimator kind {kind!r}")


def estimate_batch(
    spec: EstimatorSpec, counts: np.ndarray, pom: Optional[SymmetricPOM] = None
) -> np.ndarray:
    """Evaluate a spec on every row of an (M, K) count matrix."""
    probs, _ = estimate_batch_with_lambda(spec, counts, pom)
    return probs


def as_batch_estimator(
    estimator: EstimatorLike, pom: Optional[SymmetricPOM] = None
) -> BatchEstimator:
    """Turn a spec into a batch callable; callables pass through."""
    if isinstance(estimator, EstimatorSpec):
        return lambda counts: estimate_batch(estimator, counts, pom)
    return estimator


def estimate(
    spec: EstimatorSpec, counts: CountVector, pom: Optional[SymmetricPOM] = None
) -> EstimateResult:
    """Evaluate a spec on one count vector, with diagnostics."""
    if spec.kind == EstimatorKind.MEAN_MC:
        mc = estimate_mean_mc(
            counts, _check_beta(spec.beta), spec.samples, spec.seed, spec.indicator
        )
        return EstimateResult(
            estimator=spec.label,
            p_hat=mc.p_hat,
            std_err=mc.std_err,
            acceptance_rate=mc.acceptance_rate,
        )
    probs, lambdas = estimate_batch_with_lambda(spec, counts, pom)
    return EstimateResult(
        estimator=spec.label,
        p_hat=ProbVector.from_array(probs[0]),
        lambda_=None if lambdas is None else float(lambdas[0]),
    )
