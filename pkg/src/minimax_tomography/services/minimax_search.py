"""Outer minimax searches.

This module provides:
- optimize_epsilon: the epsilon minimizing the worst-case risk of an
  epsilon-parametrized quantum estimator at one sample size
- worst_case_beta_classical: worst-case risk of add-beta over a beta grid
- golden_section_search: the bracket-shrinking line search used above

The epsilon objective is evaluated through risk_extrema on one shared
RiskEngine per N, so the outcome enumeration is built once per sample size.
"""

import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np
from tqdm import tqdm

from minimax_tomography.core.config import get_settings
from minimax_tomography.core.exceptions import InvalidArgumentError
from minimax_tomography.models.estimator_spec import EstimatorKind, EstimatorSpec
from minimax_tomography.models.operators import PomKind, SymmetricPOM
from minimax_tomography.models.risk import BetaSearchResult, EpsilonResult, SearchSpec
from minimax_tomography.services.pom_geometry import build_pom
from minimax_tomography.models.states import ProbVector
from minimax_tomography.services.risk_engine import (
    add_beta_risk_closed_form,
    get_engine,
    risk_extrema,
)
from minimax_tomography.services.rng import stream

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

EPSILON_MAX = 0.25
BETA_PROBE_SAMPLES = 2000


def golden_section_search(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-5
) -> tuple[float, float]:
    """Golden-section search.

    Given a function f with a single local minimum in [a, b], return a
    sub-interval [c, d] containing the minimum with d - c <= tol.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return a, b

    # Required steps to achieve tolerance
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    if yc < yd:
        return a, d
    return c, b


def optimize_epsilon(
    family: EstimatorKind | str,
    N: int,
    search_spec: Optional[SearchSpec] = None,
    pom: Optional[SymmetricPOM] = None,
) -> EpsilonResult:
    """Minimize the worst-case risk over epsilon in [0, 1/4].

    A coarse scan (endpoints included) picks the best point; golden-section
    search then narrows the bracket formed by its scan neighbours. The
    result is the best of all probes, so it is never worse than either
    endpoint.

    Args:
        family: QUANTUM_MINIMAX, ML_QUANTUM_EPSILON or ML_ADMIX.
        N: Sample size.
        search_spec: Scan and inner-grid settings; family here overrides it.
        pom: Qubit SIC measurement; the standard tetrahedron when None.

    Raises:
        InvalidArgumentError: If N < 1.
        EnumerationTooLargeError: If the enumeration exceeds the size guard.
    """
    family = EstimatorKind(family)
    if N < 1:
        raise InvalidArgumentError(f"N must be at least 1, got {N}")
    spec = search_spec or SearchSpec(family=family)
    if spec.family != family:
        spec = SearchSpec(**{**spec.model_dump(), "family": family})
    pom = pom or build_pom(PomKind.TETRAHEDRON)

    probes: dict[float, float] = {}
    trace: list[tuple[float, float]] = []

    def worst_case(epsilon: float) -> float:
        epsilon = float(min(max(epsilon, 0.0), EPSILON_MAX))
        if epsilon in probes:
            return probes[epsilon]
        estimator = EstimatorSpec(kind=family, epsilon=epsilon, variant_bn=spec.variant_bn)
        value = risk_extrema(estimator, pom, N, spec.grid).max_risk
        probes[epsilon] = value
        trace.append((epsilon, value))
        logger.debug(f"N = {N}, epsilon = {epsilon:.6f}: max risk {value:.8g}")
        return value

    scan = np.linspace(0.0, EPSILON_MAX, spec.scan_points)
    iterator = scan
    if get_settings().SHOW_PROGRESS:
        iterator = tqdm(scan, desc=f"epsilon scan N={N}", unit="probe", leave=False)
    values = [worst_case(float(e)) for e in iterator]

    best = int(np.argmin(values))
    low = float(scan[max(best - 1, 0)])
    high = float(scan[min(best + 1, len(scan) - 1)])
    golden_section_search(worst_case, low, high, spec.tolerance)

    epsilon_star = min(probes, key=lambda e: (probes[e], e))
    result = EpsilonResult(
        N=N,
        family=family,
        epsilon_star=epsilon_star,
        max_risk_at_star=probes[epsilon_star],
        max_risk_at_zero=probes[0.0],
        max_risk_at_quarter=probes[EPSILON_MAX],
        trace=trace,
    )
    logger.info(
        f"{family.value} N = {N}: epsilon* = {epsilon_star:.5f}, "
        f"max risk {result.max_risk_at_star:.6g} (epsilon = 0: {result.max_risk_at_zero:.6g}) "
        f"after {len(trace)} probes"
    )
    return result


def beta_probe_states(K: int, seed: Optional[int] = None) -> np.ndarray:
    """Vertices, the uniform state and 2000 flat-Dirichlet states of the K-simplex."""
    seed = get_settings().DEFAULT_SEED if seed is None else seed
    random_states = stream(seed).dirichlet(np.ones(K), size=BETA_PROBE_SAMPLES)
    return np.vstack([np.eye(K), np.full((1, K), 1.0 / K), random_states])


def worst_case_beta_classical(
    K: int, N: int, beta_grid: Sequence[float], seed: Optional[int] = None
) -> BetaSearchResult:
    """Worst-case risk of add-beta on the K-sided die for each beta in a grid.

    Raises:
        InvalidArgumentError: For an empty grid or a non-positive beta.
    """
    betas = [float(b) for b in beta_grid]
    if not betas:
        raise InvalidArgumentError("beta grid is empty")
    if any(b <= 0 for b in betas):
        raise InvalidArgumentError("every beta must be positive")

    engine = get_engine(build_pom(PomKind.CLASSICAL_DIE, num_outcomes=K), N)
    probes = beta_probe_states(K, seed)
    worst = [
        float(engine.risks(EstimatorSpec(kind=EstimatorKind.ADD_BETA, beta=b), probes).max())
        for b in betas
    ]
    vertex = ProbVector.from_array(np.eye(K)[0])
    uniform = ProbVector.uniform(K)
    closed_form = [
        max(add_beta_risk_closed_form(b, vertex, N), add_beta_risk_closed_form(b, uniform, N))
        for b in betas
    ]
    best = int(np.argmin(worst))
    logger.info(
        f"K = {K}, N = {N}: beta* = {betas[best]:g} with worst-case risk {worst[best]:.8g}"
    )
    return BetaSearchResult(
        K=K,
        N=N,
        betas=betas,
        worst_risks=worst,
        beta_star=betas[best],
        worst_risk_star=worst[best],
        closed_form_worst_risks=closed_form,
    )
