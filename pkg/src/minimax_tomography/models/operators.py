"""Operator and measurement models.

HermitianOperator wraps a dense complex matrix; SymmetricPOM stacks the
outcome and dual operators of a symmetric measurement as (K, d, d) arrays.
SymmetricPOM performs only shape checks, so that a deliberately broken
measurement can still be handed to the validator and reported on.
"""

from enum import Enum
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from minimax_tomography.core.config import get_settings


# Pauli vector operator (sigma_x, sigma_y, sigma_z) as a (3, 2, 2) stack.
PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
PAULI.setflags(write=False)


def matrix_to_pairs(matrix: np.ndarray) -> list[list[list[float]]]:
    """Serialize a complex matrix row-major as [re, im] pairs."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(matrix)]


def pairs_to_matrix(rows: list[list[list[float]]]) -> np.ndarray:
    """Inverse of matrix_to_pairs."""
    data = np.asarray(rows, dtype=float)
    return data[..., 0] + 1j * data[..., 1]


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


class HermitianOperator(BaseModel):
    """A d x d Hermitian matrix.

    Attributes:
        matrix: Complex entries; equal to their conjugate transpose within the
            geometry tolerance.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray = Field(..., description="Complex d x d entries")

    @field_validator("matrix", mode="before")
    @classmethod
    def validate_matrix(cls, v: Any) -> np.ndarray:
        """Require a square matrix equal to its own adjoint."""
        m = np.asarray(v, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"Operator must be a square matrix, got shape {m.shape}")
        tol = get_settings().GEOMETRY_TOLERANCE
        residual = float(np.max(np.abs(m - m.conj().T)))
        if residual > tol:
            raise ValueError(f"Operator is not Hermitian (residual {residual:.3g})")
        return _readonly(m)

    @property
    def dim(self) -> int:
        """Hilbert space dimension d."""
        return int(self.matrix.shape[0])

    @property
    def trace(self) -> float:
        """Real part of the trace."""
        return float(np.trace(self.matrix).real)

    def eigenvalues(self) -> np.ndarray:
        """Ascending real spectrum."""
        return np.linalg.eigvalsh(self.matrix)

    def to_pairs(self) -> list[list[list[float]]]:
        """Row-major [re, im] serialization."""
        return matrix_to_pairs(self.matrix)

    @classmethod
    def from_pairs(cls, rows: list[list[list[float]]]) -> "HermitianOperator":
        """Build an operator from its row-major [re, im] serialization."""
        return cls(matrix=pairs_to_matrix(rows))


class PomKind(str, Enum):
    """Measurements that can be constructed.

    Attributes:
        VON_NEUMANN: Qubit projective measurement, K = 2.
        TRINE: Qubit trine measurement, K = 3.
        TETRAHEDRON: Qubit SIC measurement, K = 4.
        CLASSICAL_DIE: Orthogonal projectors |k><k| in dimension K.
    """

    VON_NEUMANN = "von_neumann"
    TRINE = "trine"
    TETRAHEDRON = "tetrahedron"
    CLASSICAL_DIE = "classical_die"


QUBIT_OUTCOMES = {
    PomKind.VON_NEUMANN: 2,
    PomKind.TRINE: 3,
    PomKind.TETRAHEDRON: 4,
}


class SymmetricPOM(BaseModel):
    """A symmetric probability operator measurement.

    Attributes:
        kind: Which construction produced the measurement.
        dim: Hilbert space dimension d.
        num_outcomes: Number of outcomes K.
        symmetry: The symmetry parameter w, with 1/K <= w <= 1.
        outcomes: (K, d, d) stack of the outcome operators.
        duals: (K, d, d) stack of the dual frame operators, if computed.
        directions: (K, 3) unit vectors of qubit outcomes, if applicable.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: PomKind
    dim: int = Field(..., ge=1, le=8, description="Hilbert space dimension d")
    num_outcomes: int = Field(..., ge=2, description="Number of outcomes K")
    symmetry: float = Field(..., description="Symmetry parameter w")
    outcomes: np.ndarray
    duals: Optional[np.ndarray] = None
    directions: Optional[np.ndarray] = None

    @field_validator("outcomes", "duals", mode="before")
    @classmethod
    def validate_stack(cls, v: Any) -> Optional[np.ndarray]:
        """Coerce operator stacks to read-only complex arrays."""
        if v is None:
            return None
        stack = np.asarray(v, dtype=complex)
        if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
            raise ValueError(f"Operator stack must have shape (K, d, d), got {stack.shape}")
        return _readonly(stack)

    @field_validator("directions", mode="before")
    @classmethod
    def validate_directions(cls, v: Any) -> Optional[np.ndarray]:
        """Coerce directions to a read-only (K, 3) real array."""
        if v is None:
            return None
        directions = np.asarray(v, dtype=float)
        if directions.ndim != 2 or directions.shape[1] != 3:
            raise ValueError(f"Directions must have shape (K, 3), got {directions.shape}")
        return _readonly(directions)

    @model_validator(mode="after")
    def validate_shapes(self) -> "SymmetricPOM":
        """Stacks must agree with dim and num_outcomes."""
        expected = (self.num_outcomes, self.dim, self.dim)
        if self.outcomes.shape != expected:
            raise ValueError(f"outcomes shape {self.outcomes.shape} != {expected}")
        if self.duals is not None and self.duals.shape != expected:
            raise ValueError(f"duals shape {self.duals.shape} != {expected}")
        if self.directions is not None and self.directions.shape[0] != self.num_outcomes:
            raise ValueError("directions must have one row per outcome")
        return self

    @property
    def is_informationally_complete(self) -> bool:
        """True for SIC measurements (K = d^2) and classical dice."""
        return self.kind == PomKind.CLASSICAL_DIE or self.num_outcomes == self.dim**2

    @property
    def is_qubit_sic(self) -> bool:
        """True for the qubit tetrahedron measurement."""
        return self.dim == 2 and self.num_outcomes == 4

    def to_json_dict(self) -> dict[str, Any]:
        """JSON-ready description of the measurement."""
        data: dict[str, Any] = {
            "kind": self.kind.value,
            "dim": self.dim,
            "K": self.num_outcomes,
            "w": self.symmetry,
            "directions": (
                self.directions.tolist() if self.directions is not None else None
            ),
            "outcomes": [matrix_to_pairs(m) for m in self.outcomes],
        }
        return data

    @classmethod
    def from_json_dict(cls, data: dict[str, Any]) -> "SymmetricPOM":
        """Rebuild a measurement (without duals) from to_json_dict output."""
        return cls(
            kind=PomKind(data["kind"]),
            dim=data["dim"],
            num_outcomes=data["K"],
            symmetry=data["w"],
            outcomes=np.stack([pairs_to_matrix(m) for m in data["outcomes"]]),
            directions=data.get("directions"),
        )

    def __repr__(self) -> str:
        """Return a short string representation."""
        return (
            f"SymmetricPOM(kind={self.kind.value!r}, dim={self.dim}, "
            f"K={self.num_outcomes}, w={self.symmetry:.6g})"
        )


class ValidationCheck(BaseModel):
    """One named check of a measurement validation.

    Attributes:
        name: Short identifier of the identity being checked.
        passed: Whether the residual is within tolerance.
        residual: Largest absolute deviation found.
        detail: Optional human-readable note (e.g. the measured rank).
    """

    name: str
    passed: bool
    residual: float = 0.0
    detail: Optional[str] = None


class ValidationReport(BaseModel):
    """Outcome of validating a SymmetricPOM."""

    kind: PomKind
    checks: list[ValidationCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True if every check passed."""
        return all(check.passed for check in self.checks)

    @property
    def max_residual(self) -> float:
        """Largest residual over all checks."""
        return max((check.residual for check in self.checks), default=0.0)

    def check(self, name: str) -> ValidationCheck:
        """Look up a check by name.

        Raises:
            KeyError: If no check has that name.
        """
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)

    def to_json_dict(self) -> dict[str, Any]:
        """JSON-ready report including the summary fields."""
        return {
            "kind": self.kind.value,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "checks": [check.model_dump() for check in self.checks],
        }
