"""Conversions between density operators and outcome probabilities.

This module provides:
- born_probs: p_k = tr{Pi_k rho}
- reconstruct_state: rho = sum_k p_k Lambda_k
- check_physical: the physicality test appropriate to the measurement
- squared_error: the Hilbert-Schmidt squared error in probability form

Batched variants operate on (M, K) probability matrices and are what the
estimators and the risk engine use internally.
"""

import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from minimax_tomography.core.config import get_settings
from minimax_tomography.core.exceptions import (
    InvalidArgumentError,
    NotInformationallyCompleteError,
)
from minimax_tomography.models.operators import PomKind, SymmetricPOM
from minimax_tomography.models.states import DensityOperator, ProbVector

logger = logging.getLogger(__name__)


class PhysicalityCheck(BaseModel):
    """Result of check_physical.

    Attributes:
        physical: Whether p belongs to a quantum state.
        sum_sq: Sum of p_k^2.
        min_eig: Smallest eigenvalue of the reconstructed operator.
        bound: Purity bound used by the sum-of-squares test, if any.
    """

    model_config = ConfigDict(frozen=True)

    physical: bool
    sum_sq: float
    min_eig: float
    bound: Optional[float] = None


def sic_purity_bound(dim: int) -> float:
    """Largest sum of p_k^2 for a SIC measurement in dimension d: 2/(d(d+1))."""
    if dim < 1:
        raise InvalidArgumentError(f"Dimension must be positive, got {dim}")
    return 2.0 / (dim * (dim + 1))


def error_prefactor(pom: SymmetricPOM) -> float:
    """(K-1)K / ((d-1)d), the factor turning sum (dp)^2 into tr{(drho)^2}.

    For d = 1 there is nothing to estimate and the factor is taken as 1.
    """
    K, d = pom.num_outcomes, pom.dim
    if d == 1:
        return 1.0
    return (K - 1) * K / ((d - 1) * d)


def _require_ic(pom: SymmetricPOM) -> np.ndarray:
    if not pom.is_informationally_complete:
        raise NotInformationallyCompleteError(
            f"{pom.kind.value} with K={pom.num_outcomes}, d={pom.dim} is not "
            f"informationally complete"
        )
    if pom.duals is None:
        raise NotInformationallyCompleteError("POM carries no dual frame")
    return pom.duals


def born_probs(state: DensityOperator, pom: SymmetricPOM) -> ProbVector:
    """Outcome probabilities of a state.

    Raises:
        InvalidArgumentError: If the dimensions differ.
    """
    if state.dim != pom.dim:
        raise InvalidArgumentError(
            f"State dimension {state.dim} does not match POM dimension {pom.dim}"
        )
    probs = np.real(np.einsum("kab,ba->k", pom.outcomes, state.matrix))
    return ProbVector.from_array(probs)


def born_probs_bloch(bloch: np.ndarray, pom: SymmetricPOM) -> np.ndarray:
    """Batched qubit Born rule p_k = (1 + e_k . s) / K for (M, 3) Bloch vectors."""
    if pom.directions is None:
        raise InvalidArgumentError("Bloch-vector probabilities need a qubit POM")
    s = np.atleast_2d(bloch)
    return (1.0 + s @ pom.directions.T) / pom.num_outcomes


def bloch_from_probs(probs: np.ndarray, pom: SymmetricPOM) -> np.ndarray:
    """Batched qubit inversion s = (K / 2) sum_k p_k e_k (tetrahedron: 3 sum p_k a_k)."""
    if pom.directions is None or pom.num_outcomes != 4:
        raise NotInformationallyCompleteError("Bloch reconstruction needs the qubit SIC")
    return 3.0 * np.atleast_2d(probs) @ pom.directions


def reconstruct_state(p: ProbVector, pom: SymmetricPOM) -> DensityOperator:
    """The unit-trace operator sum_k p_k Lambda_k, possibly not positive.

    Raises:
        InvalidArgumentError: If the length of p differs from K.
        NotInformationallyCompleteError: If the POM is not IC.
    """
    if p.num_outcomes != pom.num_outcomes:
        raise InvalidArgumentError(
            f"Expected {pom.num_outcomes} probabilities, got {p.num_outcomes}"
        )
    duals = _require_ic(pom)
    matrix = np.einsum("k,kab->ab", p.array, duals)
    return DensityOperator.from_matrix(0.5 * (matrix + matrix.conj().T))


def min_eigenvalues(probs: np.ndarray, pom: SymmetricPOM) -> np.ndarray:
    """Smallest eigenvalue of sum_k p_k Lambda_k for each row of an (M, K) matrix."""
    duals = _require_ic(pom)
    operators = np.einsum("mk,kab->mab", np.atleast_2d(probs), duals)
    return np.linalg.eigvalsh(operators)[:, 0]


def check_physical(p: ProbVector, pom: SymmetricPOM) -> PhysicalityCheck:
    """Decide whether p can come from a quantum state.

    The qubit SIC uses sum p_k^2 <= 1/3 (necessary and sufficient there), a
    classical die accepts every distribution, other IC measurements use
    the spectrum of the reconstructed operator and the trine and von Neumann
    measurements need a Bloch vector of length at most 1.
    """
    settings = get_settings()
    sum_sq = p.sum_of_squares
    if pom.is_informationally_complete:
        min_eig = float(min_eigenvalues(p.array, pom)[0])
    else:
        min_eig = float("nan")

    if pom.kind == PomKind.CLASSICAL_DIE:
        return PhysicalityCheck(physical=True, sum_sq=sum_sq, min_eig=min_eig)
    if pom.is_qubit_sic:
        bound = sic_purity_bound(2)
        return PhysicalityCheck(
            physical=sum_sq <= bound + settings.PHYSICALITY_TOLERANCE,
            sum_sq=sum_sq,
            min_eig=min_eig,
            bound=bound,
        )
    if pom.is_informationally_complete:
        return PhysicalityCheck(
            physical=min_eig >= -settings.EIGENVALUE_TOLERANCE,
            sum_sq=sum_sq,
            min_eig=min_eig,
            bound=sic_purity_bound(pom.dim),
        )
    if pom.directions is not None:
        return _check_physical_directions(p, pom)
    logger.debug(f"No physicality test for {pom!r}; accepting p")
    return PhysicalityCheck(physical=True, sum_sq=sum_sq, min_eig=min_eig)


def _check_physical_directions(p: ProbVector, pom: SymmetricPOM) -> PhysicalityCheck:
    """Physicality for rank-1 qubit outcomes (1 + e_k.sigma)/K.

    The least-squares Bloch vector of K p_k - 1 = e_k.s is the shortest one
    consistent with p, so p is physical iff it reproduces p and has |s| <= 1.
    min_eig is the smallest eigenvalue of that state, (1 - |s|)/2.
    """
    settings = get_settings()
    K = pom.num_outcomes
    target = K * p.array - 1.0
    s, *_ = np.linalg.lstsq(pom.directions, target, rcond=None)
    residual = float(np.max(np.abs(pom.directions @ s - target))) / K
    length = float(np.linalg.norm(s))
    physical = (
        residual <= settings.EIGENVALUE_TOLERANCE
        and length <= 1.0 + settings.PHYSICALITY_TOLERANCE
    )
    return PhysicalityCheck(
        physical=physical, sum_sq=p.sum_of_squares, min_eig=(1.0 - length) / 2.0
    )


def squared_errors(p_hat: np.ndarray, p: np.ndarray, pom: SymmetricPOM) -> np.ndarray:
    """Row-wise (K-1)K/((d-1)d) * sum_k (p_hat_k - p_k)^2, broadcasting."""
    diff = np.asarray(p_hat, dtype=float) - np.asarray(p, dtype=float)
    return error_prefactor(pom) * np.sum(diff * diff, axis=-1)


def squared_error(p_hat: ProbVector, p: ProbVector, pom: SymmetricPOM) -> float:
    """Squared error tr{(rho_hat - rho)^2} expressed in outcome probabilities.

    Raises:
        InvalidArgumentError: If the lengths differ from each other or from K.
    """
    if p_hat.num_outcomes != p.num_outcomes or p.num_outcomes != pom.num_outcomes:
        raise InvalidArgumentError("Probability vectors and POM disagree on K")
    return float(squared_errors(p_hat.array, p.array, pom))
