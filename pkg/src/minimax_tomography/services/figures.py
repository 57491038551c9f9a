"""Figure data emission.

Tables only; plotting is left to the reader's tool of choice.

- fig1: coin likelihoods p^N for data {N, 0}, peak-normalized
- fig2: minimum and maximum risk against N for constrained ML, the
  admixed minimax estimator at epsilon = 0 and at its optimized epsilon, and
  epsilon-restricted ML at its optimized epsilon
- fig3: optimized epsilon against N for both epsilon families
"""

import logging
from typing import Optional

import numpy as np

from minimax_tomography.models.estimator_spec import EstimatorKind, EstimatorSpec
from minimax_tomography.models.figures import FigureId, FigureParams, FigureTable
from minimax_tomography.models.operators import PomKind
from minimax_tomography.models.risk import EpsilonResult, SearchSpec
from minimax_tomography.services.minimax_search import optimize_epsilon
from minimax_tomography.services.pom_geometry import build_pom
from minimax_tomography.services.risk_engine import enumerate_outcomes, risk_extrema

logger = logging.getLogger(__name__)

QUBIT_SIC_OUTCOMES = 4


def likelihood_table(params: FigureParams) -> FigureTable:
    """Columns p and L_N = p^N for each N."""
    p = np.linspace(0.0, 1.0, params.p_points)
    columns = {"p": p.tolist()}
    for N in params.likelihood_sizes:
        curve = p**N
        columns[f"L_{N}"] = (curve / curve.max()).tolist()
    return FigureTable(figure_id=FigureId.FIG1, columns=columns)


def _search(params: FigureParams, family: EstimatorKind) -> SearchSpec:
    return SearchSpec(**{**params.search.model_dump(), "family": family})


def _epsilon_results(
    params: FigureParams, N: int
) -> tuple[EpsilonResult, EpsilonResult]:
    minimax = optimize_epsilon(
        EstimatorKind.QUANTUM_MINIMAX, N, _search(params, EstimatorKind.QUANTUM_MINIMAX)
    )
    ml = optimize_epsilon(
        EstimatorKind.ML_QUANTUM_EPSILON, N, _search(params, EstimatorKind.ML_QUANTUM_EPSILON)
    )
    return minimax, ml


def risk_table(params: FigureParams) -> FigureTable:
    """Minimum and maximum risks of the four quantum estimators against N."""
    pom = build_pom(PomKind.TETRAHEDRON)
    grid = params.search.grid
    columns: dict[str, list[float]] = {"N": []}

    def record(name: str, estimator: EstimatorSpec, N: int) -> None:
        surface = risk_extrema(estimator, pom, N, grid)
        columns.setdefault(f"{name}_min", []).append(surface.min_risk)
        columns.setdefault(f"{name}_max", []).append(surface.max_risk)

    for N in params.sample_sizes:
        logger.info(f"fig2: N = {N}")
        minimax, ml = _epsilon_results(params, N)
        columns["N"].append(float(N))
        record("ml_quantum", EstimatorSpec(kind=EstimatorKind.ML_QUANTUM), N)
        record(
            "quantum_minimax_zero",
            EstimatorSpec(kind=EstimatorKind.QUANTUM_MINIMAX, epsilon=0.0),
            N,
        )
        record(
            "quantum_minimax_star",
            EstimatorSpec(kind=EstimatorKind.QUANTUM_MINIMAX, epsilon=minimax.epsilon_star),
            N,
        )
        record(
            "ml_quantum_epsilon_star",
            EstimatorSpec(kind=EstimatorKind.ML_QUANTUM_EPSILON, epsilon=ml.epsilon_star),
            N,
        )
    return FigureTable(figure_id=FigureId.FIG2, columns=columns)


def epsilon_table(params: FigureParams) -> FigureTable:
    """Optimized epsilon of both families against N."""
    columns: dict[str, list[float]] = {
        "N": [],
        "epsilon_quantum_minimax": [],
        "epsilon_ml_quantum_epsilon": [],
    }
    for N in params.sample_sizes:
        logger.info(f"fig3: N = {N}")
        minimax, ml = _epsilon_results(params, N)
        columns["N"].append(float(N))
        columns["epsilon_quantum_minimax"].append(minimax.epsilon_star)
        columns["epsilon_ml_quantum_epsilon"].append(ml.epsilon_star)
    return FigureTable(figure_id=FigureId.FIG3, columns=columns)


def emit_figure_data(
    figure_id: FigureId | str, params: Optional[FigureParams] = None
) -> FigureTable:
    """Data table of one figure.

    Raises:
        EnumerationTooLargeError: If an N of fig2/fig3 exceeds the size guard
            (checked before any risk is computed).
    """
    figure_id = FigureId(figure_id)
    params = params or FigureParams()
    if figure_id == FigureId.FIG1:
        return likelihood_table(params)

    for N in params.sample_sizes:
        enumerate_outcomes(N, QUBIT_SIC_OUTCOMES)
    if figure_id == FigureId.FIG2:
        return risk_table(params)
    return epsilon_table(params)
