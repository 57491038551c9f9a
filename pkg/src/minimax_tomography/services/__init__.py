"""Services for minimax tomography."""

from minimax_tomography.services.estimators import (
    AdmixResult,
    EstimateResult,
    admix_lambda_qubit,
    admix_physical_general,
    estimate,
    estimate_add_beta,
    estimate_batch,
    estimate_classical_minimax,
    estimate_mean_mc,
    estimate_ml_admix,
    estimate_ml_classical,
    estimate_ml_quantum,
    estimate_posterior_mean,
    estimate_quantum_minimax,
    minimax_purity_bound,
)
from minimax_tomography.services.figures import emit_figure_data
from minimax_tomography.services.minimax_search import (
    golden_section_search,
    optimize_epsilon,
    worst_case_beta_classical,
)
from minimax_tomography.services.pom_geometry import build_pom, dual_frame, validate_spom
from minimax_tomography.services.risk_engine import (
    RiskEngine,
    add_beta_risk_closed_form,
    average_risk,
    enumerate_outcomes,
    risk_exact,
    risk_extrema,
)
from minimax_tomography.services.simulator import empirical_risk, sample_counts
from minimax_tomography.services.state_space import (
    PhysicalityCheck,
    born_probs,
    check_physical,
    reconstruct_state,
    sic_purity_bound,
    squared_error,
)

__all__ = [
    # Geometry
    "build_pom",
    "dual_frame",
    "validate_spom",
    # States
    "PhysicalityCheck",
    "born_probs",
    "reconstruct_state",
    "check_physical",
    "squared_error",
    "sic_purity_bound",
    # Estimators
    "AdmixResult",
    "EstimateResult",
    "estimate",
    "estimate_batch",
    "estimate_ml_classical",
    "estimate_add_beta",
    "estimate_classical_minimax",
    "admix_lambda_qubit",
    "admix_physical_general",
    "estimate_quantum_minimax",
    "estimate_ml_admix",
    "estimate_ml_quantum",
    "estimate_mean_mc",
    "estimate_posterior_mean",
    "minimax_purity_bound",
    # Risk
    "RiskEngine",
    "enumerate_outcomes",
    "risk_exact",
    "risk_extrema",
    "average_risk",
    "add_beta_risk_closed_form",
    # Search
    "golden_section_search",
    "optimize_epsilon",
    "worst_case_beta_classical",
    # Simulation
    "sample_counts",
    "empirical_risk",
    # Figures
    "emit_figure_data",
]
