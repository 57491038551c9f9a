"""Exact risk by enumeration of all data sets.

This module provides:
- enumerate_outcomes: every count vector of N clicks on K detectors
- RiskEngine: cached estimate tables and blocked, data-parallel risk sums
  for one (POM, N) pair
- risk_exact, average_risk, risk_extrema: the user-facing operations
- add_beta_risk_closed_form: the exact mean squared error of add-beta

The risk at state p is sum_D L(D|p) * err(p_hat(D), p). Likelihoods are kept
in log space and exponentiated after subtracting the per-state maximum;
the weights are then self-normalized.

Example:
    >>> pom = build_pom(PomKind.CLASSICAL_DIE, num_outcomes=2)
    >>> spec = EstimatorSpec(kind=EstimatorKind.CLASSICAL_MINIMAX)
    >>> risk_exact(spec, ProbVector(probs=(0.3, 0.7)), pom, N=1)
    0.125
"""

import itertools
import logging
import math
import threading
import weakref
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize
from scipy.special import gammaln

from minimax_tomography.core.config import get_settings
from minimax_tomography.core.exceptions import EnumerationTooLargeError, InvalidArgumentError
from minimax_tomography.models.estimator_spec import EstimatorSpec
from minimax_tomography.models.operators import PomKind, SymmetricPOM
from minimax_tomography.models.risk import (
    BLOCH_COLUMNS,
    DiscretePrior,
    GridSpec,
    OutcomeEnumeration,
    RiskSurface,
)
from minimax_tomography.models.states import ProbVector
from minimax_tomography.services.estimators import EstimatorLike, as_batch_estimator
from minimax_tomography.services.parallel import chunk_ranges, parallel_map
from minimax_tomography.services.state_space import born_probs_bloch, error_prefactor

logger = logging.getLogger(__name__)

_ENGINE_CACHE_SIZE = 16
# Estimate tables kept per engine; an epsilon search needs only the latest few.
_TABLE_CACHE_SIZE = 8


# =============================================================================
# Enumeration
# =============================================================================


def compositions(total: int, parts: int) -> np.ndarray:
    """All ways to write ``total`` as ``parts`` non-negative integers.

    Rows are ordered from (total, 0, ..., 0) to (0, ..., 0, total).
    """
    slots = total + parts - 1
    bars = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(slots), parts - 1)),
        dtype=np.int64,
    ).reshape(-1, parts - 1)
    bars = bars[::-1]
    edges = np.hstack(
        [
            np.full((bars.shape[0], 1), -1, dtype=np.int64),
            bars,
            np.full((bars.shape[0], 1), slots, dtype=np.int64),
        ]
    )
    return np.diff(edges, axis=1) - 1


@lru_cache(maxsize=32)
def _enumeration(N: int, K: int) -> OutcomeEnumeration:
    counts = compositions(N, K)
    counts.setflags(write=False)
    log_mult = gammaln(N + 1) - gammaln(counts + 1).sum(axis=1)
    log_mult.setflags(write=False)
    return OutcomeEnumeration(N=N, K=K, count_vectors=counts, log_multinomials=log_mult)


def enumeration_size(N: int, K: int) -> int:
    """C(N + K - 1, K - 1)."""
    return math.comb(N + K - 1, K - 1)


def enumerate_outcomes(N: int, K: int) -> OutcomeEnumeration:
    """Every count vector of N clicks on K detectors, with log-multinomials.

    Raises:
        InvalidArgumentError: If N < 1 or K < 2.
        EnumerationTooLargeError: If N exceeds MAX_SAMPLE_SIZE or the number
            of count vectors exceeds ENUMERATION_LIMIT.
    """
    if N < 1:
        raise InvalidArgumentError(f"N must be at least 1, got {N}")
    if K < 2:
        raise InvalidArgumentError(f"K must be at least 2, got {K}")
    settings = get_settings()
    size = enumeration_size(N, K)
    if N > settings.MAX_SAMPLE_SIZE:
        raise EnumerationTooLargeError(
            f"N = {N} exceeds MAX_SAMPLE_SIZE = {settings.MAX_SAMPLE_SIZE}", size
        )
    if size > settings.ENUMERATION_LIMIT:
        raise EnumerationTooLargeError(
            f"Enumeration for N = {N}, K = {K} exceeds {settings.ENUMERATION_LIMIT}", size
        )
    enumeration = _enumeration(N, K)
    logger.debug(f"Enumerated {enumeration.size} count vectors for N = {N}, K = {K}")
    return enumeration


# =============================================================================
# Engine
# =============================================================================


class RiskEngine:
    """Exact risks for one measurement and sample size.

    The enumeration is built once; estimate tables are cached per
    EstimatorSpec (and per batch callable, weakly). Risks for many states are
    computed in blocks of at most RISK_CHUNK_ELEMENTS (state x data set)
    entries, run on THREADS workers and concatenated in order.

    Attributes:
        pom: The measurement.
        N: Sample size.
        enumeration: All count vectors with their log-multinomials.

    Example:
        >>> engine = RiskEngine(build_pom(PomKind.TETRAHEDRON), N=4)
        >>> engine.risk(EstimatorSpec(kind=EstimatorKind.ML_QUANTUM), ProbVector.uniform(4))
    """

    def __init__(self, pom: SymmetricPOM, N: int):
        """Initialize the engine.

        Raises:
            InvalidArgumentError / EnumerationTooLargeError: From enumerate_outcomes.
        """
        self.pom = pom
        self.N = N
        self.enumeration = enumerate_outcomes(N, pom.num_outcomes)
        self._prefactor = error_prefactor(pom)
        self._spec_tables: dict[EstimatorSpec, np.ndarray] = {}
        self._callable_tables: "weakref.WeakKeyDictionary[Callable, np.ndarray]" = (
            weakref.WeakKeyDictionary()
        )
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        """Return a short string representation."""
        return f"RiskEngine(pom={self.pom!r}, N={self.N}, V={self.enumeration.size})"

    def estimates(self, estimator: EstimatorLike) -> np.ndarray:
        """(V, K) estimates for every count vector, computed once per estimator."""
        with self._lock:
            if isinstance(estimator, EstimatorSpec):
                cached = self._spec_tables.get(estimator)
            else:
                cached = self._callable_tables.get(estimator)
        if cached is not None:
            return cached

        label = estimator.label if isinstance(estimator, EstimatorSpec) else "callable"
        logger.debug(f"Tabulating {label} on {self.enumeration.size} count vectors")
        table = np.asarray(
            as_batch_estimator(estimator, self.pom)(self.enumeration.count_vectors),
            dtype=float,
        )
        if table.shape != self.enumeration.count_vectors.shape:
            raise InvalidArgumentError(
                f"Estimator returned shape {table.shape}, "
                f"expected {self.enumeration.count_vectors.shape}"
            )
        table.setflags(write=False)
        with self._lock:
            if isinstance(estimator, EstimatorSpec):
                if len(self._spec_tables) >= _TABLE_CACHE_SIZE:
                    self._spec_tables.pop(next(iter(self._spec_tables)))
                self._spec_tables[estimator] = table
            else:
                self._callable_tables[estimator] = table
        return table

    def _block_risks(self, table: np.ndarray, probs: np.ndarray) -> np.ndarray:
        log_l = self.enumeration.log_likelihoods(probs)
        weights = np.exp(log_l - log_l.max(axis=1, keepdims=True))
        errors = self._prefactor * (
            np.sum(table * table, axis=1)[None, :]
            - 2.0 * probs @ table.T
            + np.sum(probs * probs, axis=1)[:, None]
        )
        errors = np.maximum(errors, 0.0)
        return np.sum(weights * errors, axis=1) / np.sum(weights, axis=1)

    def risks_for_table(self, table: np.ndarray, probs: np.ndarray) -> np.ndarray:
        """Risks at each row of ``probs`` for a precomputed estimate table."""
        probs = np.atleast_2d(np.asarray(probs, dtype=float))
        if probs.shape[1] != self.pom.num_outcomes:
            raise InvalidArgumentError(
                f"Expected {self.pom.num_outcomes} probabilities, got {probs.shape[1]}"
            )
        block = max(1, get_settings().RISK_CHUNK_ELEMENTS // self.enumeration.size)
        ranges = chunk_ranges(probs.shape[0], block)
        parts = parallel_map(
            lambda r: self._block_risks(table, probs[r[0] : r[1]]),
            ranges,
            desc=f"risk N={self.N}",
        )
        return np.concatenate(parts)

    def risks(self, estimator: EstimatorLike, probs: np.ndarray) -> np.ndarray:
        """Risks at each row of an (G, K) probability matrix."""
        return self.risks_for_table(self.estimates(estimator), probs)

    def risk(self, estimator: EstimatorLike, true_p: ProbVector) -> float:
        """Risk at a single state."""
        return float(self.risks(estimator, true_p.array)[0])


_engines: dict[tuple, RiskEngine] = {}
_engines_lock = threading.Lock()


def _pom_key(pom: SymmetricPOM) -> tuple:
    return (pom.kind, pom.dim, pom.num_outcomes, pom.symmetry, pom.outcomes.tobytes())


def get_engine(pom: SymmetricPOM, N: int) -> RiskEngine:
    """Shared engine for (pom, N), so estimate tables are reused across calls."""
    key = (_pom_key(pom), N)
    with _engines_lock:
        engine = _engines.get(key)
    if engine is not None:
        return engine
    engine = RiskEngine(pom, N)
    with _engines_lock:
        if len(_engines) >= _ENGINE_CACHE_SIZE:
            _engines.pop(next(iter(_engines)))
        return _engines.setdefault(key, engine)


def clear_engine_cache() -> None:
    """Drop all cached engines and enumerations."""
    with _engines_lock:
        _engines.clear()
    _enumeration.cache_clear()


# =============================================================================
# Operations
# =============================================================================


def risk_exact(
    estimator: EstimatorLike, true_p: ProbVector, pom: SymmetricPOM, N: int
) -> float:
    """Mean squared error of an estimator at a true state, summed over all data.

    Raises:
        InvalidArgumentError: If the state length differs from K.
        EnumerationTooLargeError: If the enumeration exceeds the size guard.
    """
    return get_engine(pom, N).risk(estimator, true_p)


def average_risk(
    estimator: EstimatorLike, prior: DiscretePrior, pom: SymmetricPOM, N: int
) -> float:
    """Prior-weighted risk sum_i w_i R(p_i)."""
    risks = get_engine(pom, N).risks(estimator, prior.prob_matrix)
    return float(np.dot(prior.weight_array, risks))


def add_beta_risk_closed_form(beta: float, p: ProbVector, N: int) -> float:
    """Exact mean squared error of add-beta on the K-sided die.

    [N(1 - S) + beta^2 (K^2 S - K)] / (N + K beta)^2 with S = sum p^2; at
    beta = sqrt(N)/K it is the constant (K-1) / (K (1 + sqrt N)^2).
    """
    if not beta > 0:
        raise InvalidArgumentError(f"beta must be positive, got {beta}")
    K = p.num_outcomes
    S = p.sum_of_squares
    return (N * (1.0 - S) + beta**2 * (K * K * S - K)) / (N + K * beta) ** 2


def fibonacci_directions(count: int) -> np.ndarray:
    """``count`` near-uniform unit vectors on the sphere."""
    index = np.arange(count) + 0.5
    z = 1.0 - 2.0 * index / count
    radius = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = np.pi * (3.0 - np.sqrt(5.0)) * index
    return np.column_stack([radius * np.cos(phi), radius * np.sin(phi), z])


def bloch_ball_grid(grid: GridSpec) -> np.ndarray:
    """Center plus shells i / radii (i = 1..radii) of Fibonacci directions."""
    directions = fibonacci_directions(grid.directions)
    shells = [directions * (i / grid.radii) for i in range(1, grid.radii + 1)]
    return np.vstack([np.zeros((1, 3))] + shells)


def simplex_grid(K: int, resolution: int) -> np.ndarray:
    """All probability vectors with entries in multiples of 1 / resolution."""
    return compositions(resolution, K) / float(resolution)


def project_to_ball(s: np.ndarray) -> np.ndarray:
    """s / max(1, |s|)."""
    return s / max(1.0, float(np.linalg.norm(s)))


def project_to_simplex(x: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(x)[::-1]
    cumulative = np.cumsum(u) - 1.0
    ks = np.arange(1, x.size + 1)
    rho = np.nonzero(u - cumulative / ks > 0)[0][-1]
    theta = cumulative[rho] / (rho + 1.0)
    return np.maximum(x - theta, 0.0)


def risk_extrema(
    estimator: EstimatorLike,
    pom: SymmetricPOM,
    N: int,
    grid_spec: Optional[GridSpec] = None,
) -> RiskSurface:
    """Largest and smallest risk over all states.

    The qubit SIC is scanned on a Bloch-ball grid and a classical die on a
    simplex grid; Nelder-Mead then refines from the best and worst grid
    points, and the refined points are appended to the surface.

    Raises:
        InvalidArgumentError: For measurements other than the qubit SIC and
            classical dice.
        EnumerationTooLargeError: If the enumeration exceeds the size guard.
    """
    grid_spec = grid_spec or GridSpec()
    engine = get_engine(pom, N)
    table = engine.estimates(estimator)

    if pom.is_qubit_sic and pom.directions is not None:
        columns: tuple[str, ...] = BLOCH_COLUMNS
        points = bloch_ball_grid(grid_spec)
        to_probs: Callable[[np.ndarray], np.ndarray] = lambda s: born_probs_bloch(s, pom)
        project = project_to_ball
    elif pom.kind == PomKind.CLASSICAL_DIE:
        K = pom.num_outcomes
        columns = tuple(f"p{k + 1}" for k in range(K))
        points = simplex_grid(K, grid_spec.simplex_resolution)
        to_probs = np.atleast_2d
        project = project_to_simplex
    else:
        raise InvalidArgumentError(f"Risk extrema need the qubit SIC or a classical die, got {pom!r}")

    risks = engine.risks_for_table(table, to_probs(points))
    logger.info(
        f"Scanned {points.shape[0]} states at N = {N}: "
        f"risk in [{risks.min():.6g}, {risks.max():.6g}]"
    )

    if grid_spec.refine and grid_spec.refine_iterations > 0:
        refined_points = []
        refined_risks = []
        for sign, start in ((-1.0, int(np.argmax(risks))), (1.0, int(np.argmin(risks)))):

            def objective(x: np.ndarray, sign: float = sign) -> float:
                point = project(x)
                return sign * float(engine.risks_for_table(table, to_probs(point))[0])

            result = minimize(
                objective,
                points[start],
                method="Nelder-Mead",
                options={
                    "maxiter": grid_spec.refine_iterations,
                    "xatol": grid_spec.refine_tolerance,
                    "fatol": grid_spec.refine_tolerance,
                },
            )
            refined_points.append(project(result.x))
            refined_risks.append(sign * result.fun)
        points = np.vstack([points] + refined_points)
        risks = np.concatenate([risks, np.asarray(refined_risks)])
        logger.debug(f"Refined extrema: max {risks.max():.6g}, min {risks.min():.6g}")

    return RiskSurface(columns=columns, points=points, risks=risks)
