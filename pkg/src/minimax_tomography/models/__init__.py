"""Data models for minimax tomography."""

from minimax_tomography.models.estimator_spec import (
    EstimatorKind,
    EstimatorSpec,
    MinimaxCoefficients,
)
from minimax_tomography.models.figures import FigureId, FigureParams, FigureTable
from minimax_tomography.models.operators import (
    PAULI,
    HermitianOperator,
    PomKind,
    SymmetricPOM,
    ValidationCheck,
    ValidationReport,
)
from minimax_tomography.models.risk import (
    BetaSearchResult,
    DiscretePrior,
    EpsilonResult,
    GridSpec,
    OutcomeEnumeration,
    RiskSurface,
    SearchSpec,
)
from minimax_tomography.models.simulation import (
    EmpiricalRisk,
    MonteCarloEstimate,
    SimConfig,
)
from minimax_tomography.models.states import (
    BlochVector,
    CountVector,
    DensityOperator,
    ProbVector,
)

__all__ = [
    # Operators
    "PAULI",
    "HermitianOperator",
    "PomKind",
    "SymmetricPOM",
    "ValidationCheck",
    "ValidationReport",
    # States
    "ProbVector",
    "CountVector",
    "BlochVector",
    "DensityOperator",
    # Estimators
    "EstimatorKind",
    "EstimatorSpec",
    "MinimaxCoefficients",
    # Risk
    "OutcomeEnumeration",
    "DiscretePrior",
    "GridSpec",
    "RiskSurface",
    "SearchSpec",
    "EpsilonResult",
    "BetaSearchResult",
    # Simulation
    "SimConfig",
    "EmpiricalRisk",
    "MonteCarloEstimate",
    # Figures
    "FigureId",
    "FigureParams",
    "FigureTable",
]
