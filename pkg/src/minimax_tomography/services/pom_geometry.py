"""Symmetric POM construction and validation.

This module provides:
- build_pom for the qubit von Neumann, trine and tetrahedron measurements
  and for the K-sided classical die
- dual_frame, the standard-form dual operators Lambda_k
- validate_spom, a report on every geometric identity of a symmetric POM

Example:
    >>> pom = build_pom(PomKind.TETRAHEDRON)
    >>> report = validate_spom(pom)
    >>> report.passed
    True
"""

import logging
from typing import Optional

import numpy as np

from minimax_tomography.core.config import get_settings
from minimax_tomography.core.exceptions import DegenerateFrameError, InvalidArgumentError
from minimax_tomography.models.operators import (
    PAULI,
    QUBIT_OUTCOMES,
    HermitianOperator,
    PomKind,
    SymmetricPOM,
    ValidationCheck,
    ValidationReport,
)

logger = logging.getLogger(__name__)

ORIENTATION_TOLERANCE = 1e-10
MAX_DIMENSION = 8

# Outcome directions as columns, one matrix per qubit kind.
_QUBIT_DIRECTIONS = {
    PomKind.VON_NEUMANN: np.array([[0.0, 0.0], [0.0, 0.0], [1.0, -1.0]]),
    PomKind.TRINE: np.array([[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]])
    / np.sqrt(6.0),
    PomKind.TETRAHEDRON: np.array(
        [[1.0, -1.0, -1.0, 1.0], [-1.0, 1.0, -1.0, 1.0], [-1.0, -1.0, 1.0, 1.0]]
    )
    / np.sqrt(3.0),
}


def _check_orientation(orientation: np.ndarray) -> np.ndarray:
    rotation = np.asarray(orientation, dtype=float)
    if rotation.shape != (3, 3):
        raise InvalidArgumentError(f"Orientation must be 3 x 3, got {rotation.shape}")
    residual = float(np.max(np.abs(rotation.T @ rotation - np.eye(3))))
    if residual > ORIENTATION_TOLERANCE:
        raise InvalidArgumentError(
            f"Orientation is not orthogonal (residual {residual:.3g})"
        )
    det = float(np.linalg.det(rotation))
    if abs(det - 1.0) > ORIENTATION_TOLERANCE:
        raise InvalidArgumentError(f"Orientation must be a proper rotation, det = {det:.6g}")
    return rotation


def _dual_stack(
    outcomes: np.ndarray, dim: int, num_outcomes: int, symmetry: float
) -> np.ndarray:
    scale_denominator = symmetry * num_outcomes - 1.0
    if scale_denominator <= get_settings().GEOMETRY_TOLERANCE:
        raise DegenerateFrameError()
    scale = (num_outcomes - 1) * num_outcomes / (scale_denominator * dim)
    identity = np.eye(dim)
    return identity / dim + scale * (outcomes - identity / num_outcomes)


def build_pom(
    kind: PomKind | str,
    orientation: Optional[np.ndarray] = None,
    num_outcomes: Optional[int] = None,
) -> SymmetricPOM:
    """Construct a symmetric POM with its dual frame.

    Qubit outcomes are Pi_k = (1 + e_k . sigma) / K with the standard
    direction columns rotated by ``orientation``. The classical die has the
    orthogonal projectors |k><k| and ignores the orientation.

    Args:
        kind: Which measurement to build.
        orientation: 3 x 3 proper rotation; identity when None.
        num_outcomes: K for the classical die (required there).

    Returns:
        The measurement, duals included.

    Raises:
        InvalidArgumentError: For a non-rotation orientation or a die with
            K < 2 (or K beyond the supported dimension).
    """
    kind = PomKind(kind)

    if kind == PomKind.CLASSICAL_DIE:
        if num_outcomes is None or num_outcomes < 2:
            raise InvalidArgumentError(
                f"A classical die needs K >= 2 outcomes, got {num_outcomes}"
            )
        if num_outcomes > MAX_DIMENSION:
            raise InvalidArgumentError(
                f"Dimension {num_outcomes} exceeds the supported maximum {MAX_DIMENSION}"
            )
        outcomes = np.stack(
            [np.diag(np.eye(num_outcomes)[k]) for k in range(num_outcomes)]
        ).astype(complex)
        duals = _dual_stack(outcomes, num_outcomes, num_outcomes, 1.0)
        pom = SymmetricPOM(
            kind=kind,
            dim=num_outcomes,
            num_outcomes=num_outcomes,
            symmetry=1.0,
            outcomes=outcomes,
            duals=duals,
        )
        logger.debug(f"Built {pom!r}")
        return pom

    expected = QUBIT_OUTCOMES[kind]
    if num_outcomes is not None and num_outcomes != expected:
        raise InvalidArgumentError(
            f"{kind.value} has {expected} outcomes, not {num_outcomes}"
        )
    rotation = np.eye(3) if orientation is None else _check_orientation(orientation)
    directions = (rotation @ _QUBIT_DIRECTIONS[kind]).T
    K = expected
    outcomes = (np.eye(2) + np.einsum("ki,ijl->kjl", directions, PAULI)) / K
    symmetry = 2.0 / K
    pom = SymmetricPOM(
        kind=kind,
        dim=2,
        num_outcomes=K,
        symmetry=symmetry,
        outcomes=outcomes,
        duals=_dual_stack(outcomes, 2, K, symmetry),
        directions=directions,
    )
    logger.debug(f"Built {pom!r}")
    return pom


def dual_frame(pom: SymmetricPOM) -> list[HermitianOperator]:
    """Standard-form dual operators.

    Lambda_k = 1/d + (K-1)K / ((wK-1)d) * (Pi_k - 1/K), so that
    tr{Pi_j Lambda_k} = delta_jk.

    Raises:
        DegenerateFrameError: If wK - 1 vanishes (outcomes proportional to
            the identity).
    """
    stack = _dual_stack(pom.outcomes, pom.dim, pom.num_outcomes, pom.symmetry)
    return [HermitianOperator(matrix=m) for m in stack]


def expected_gram(pom: SymmetricPOM) -> np.ndarray:
    """tr{Pi_j Pi_k} implied by d, K and the stored w."""
    K, d, w = pom.num_outcomes, pom.dim, pom.symmetry
    off = (1.0 - w) / (K - 1)
    return (d / K) * (w * np.eye(K) + off * (1.0 - np.eye(K)))


def hs_gram(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Hilbert-Schmidt Gram matrix tr{A_j B_k} of two operator stacks."""
    return np.real(np.einsum("jab,kba->jk", left, right))


def edge_vectors(pom: SymmetricPOM) -> np.ndarray:
    """Unit-length pyramid edges K / sqrt((wK-1)d) * (Pi_k - 1/K) as a stack."""
    K, d, w = pom.num_outcomes, pom.dim, pom.symmetry
    centered = pom.outcomes - np.eye(d) / K
    return K / np.sqrt((w * K - 1.0) * d) * centered


def _realify(stack: np.ndarray) -> np.ndarray:
    flat = stack.reshape(stack.shape[0], -1)
    return np.concatenate([flat.real, flat.imag], axis=1)


def validate_spom(pom: SymmetricPOM) -> ValidationReport:
    """Check every identity of a symmetric POM.

    Failures are reported as check entries, never raised.

    Checks:
        positivity, completeness, symmetry_bounds, trace, gram, duality,
        pyramid_rank, edge_norm, and for qubit kinds with directions
        direction_sum and direction_gram.
    """
    tol = get_settings().GEOMETRY_TOLERANCE
    K, d, w = pom.num_outcomes, pom.dim, pom.symmetry
    outcomes = pom.outcomes
    identity = np.eye(d)
    checks: list[ValidationCheck] = []

    def add(name: str, residual: float, detail: Optional[str] = None) -> None:
        checks.append(
            ValidationCheck(name=name, passed=residual <= tol, residual=residual, detail=detail)
        )

    min_eig = float(min(np.linalg.eigvalsh(m)[0] for m in outcomes))
    add("positivity", max(0.0, -min_eig), f"min eigenvalue {min_eig:.3g}")

    add("completeness", float(np.max(np.abs(outcomes.sum(axis=0) - identity))))

    bound_violation = max(0.0, 1.0 / K - w, w - 1.0)
    add("symmetry_bounds", bound_violation, f"w = {w:.6g}")

    traces = np.real(np.trace(outcomes, axis1=1, axis2=2))
    add("trace", float(np.max(np.abs(traces - d / K))))

    gram = hs_gram(outcomes, outcomes)
    add("gram", float(np.max(np.abs(gram - expected_gram(pom)))))

    duals = pom.duals
    if duals is None:
        try:
            duals = _dual_stack(outcomes, d, K, w)
        except DegenerateFrameError as e:
            checks.append(
                ValidationCheck(name="duality", passed=False, residual=float("inf"), detail=e.message)
            )
    if duals is not None:
        add("duality", float(np.max(np.abs(hs_gram(outcomes, duals) - np.eye(K)))))

    centered = _realify(outcomes - identity / K)
    singular = np.linalg.svd(centered, compute_uv=False)
    rank = int(np.sum(singular > 1e-9 * max(singular.max(), 1.0)))
    checks.append(
        ValidationCheck(
            name="pyramid_rank",
            passed=rank == K - 1,
            residual=0.0 if rank == K - 1 else float(abs(rank - (K - 1))),
            detail=f"rank {rank}",
        )
    )

    if w * K - 1.0 > tol:
        norms = np.sqrt(np.abs(np.diag(hs_gram(edge_vectors(pom), edge_vectors(pom)))))
        add("edge_norm", float(np.max(np.abs(norms - 1.0))))

    if pom.directions is not None:
        directions = pom.directions
        add("direction_sum", float(np.max(np.abs(directions.sum(axis=0)))))
        target = np.eye(K) - (1.0 - np.eye(K)) / (K - 1)
        add("direction_gram", float(np.max(np.abs(directions @ directions.T - target))))

    report = ValidationReport(kind=pom.kind, checks=checks)
    logger.debug(
        f"Validated {pom!r}: passed={report.passed}, max residual {report.max_residual:.3g}"
    )
    return report
