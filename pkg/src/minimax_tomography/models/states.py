"""State and data models: probability vectors, count vectors, Bloch vectors
and density operators."""

import math
from typing import Any, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from minimax_tomography.core.config import get_settings
from minimax_tomography.core.exceptions import EmptyDataError
from minimax_tomography.models.operators import PAULI, HermitianOperator


class ProbVector(BaseModel):
    """Outcome probabilities p_k.

    Attributes:
        probs: K reals, each >= -tol, summing to 1 within tol.
    """

    model_config = ConfigDict(frozen=True)

    probs: tuple[float, ...] = Field(..., min_length=2)

    @field_validator("probs", mode="before")
    @classmethod
    def coerce_probs(cls, v: Any) -> tuple[float, ...]:
        """Accept lists, tuples and numpy arrays."""
        return tuple(float(x) for x in np.asarray(v, dtype=float).ravel())

    @model_validator(mode="after")
    def validate_distribution(self) -> "ProbVector":
        """Entries non-negative and normalized within tolerance."""
        tol = get_settings().PHYSICALITY_TOLERANCE
        if not all(math.isfinite(p) for p in self.probs):
            raise ValueError("Probabilities must be finite")
        if min(self.probs) < -tol:
            raise ValueError(f"Negative probability {min(self.probs):.3g}")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > tol:
            raise ValueError(f"Probabilities sum to {total!r}, not 1")
        return self

    @classmethod
    def from_array(cls, values: Sequence[float] | np.ndarray) -> "ProbVector":
        """Build a ProbVector, clamping float-subtraction negatives to zero.

        Entries in [-tol, 0) are set to 0 and the vector is renormalized;
        anything more negative is rejected by validation.
        """
        arr = np.asarray(values, dtype=float)
        tol = get_settings().PHYSICALITY_TOLERANCE
        if arr.size and arr.min() >= -tol:
            arr = np.clip(arr, 0.0, None)
            arr = arr / arr.sum()
        return cls(probs=arr)

    @classmethod
    def uniform(cls, num_outcomes: int) -> "ProbVector":
        """The flat distribution over K outcomes."""
        return cls(probs=np.full(num_outcomes, 1.0 / num_outcomes))

    @property
    def array(self) -> np.ndarray:
        """Probabilities as a float array."""
        return np.asarray(self.probs, dtype=float)

    @property
    def num_outcomes(self) -> int:
        """Number of outcomes K."""
        return len(self.probs)

    @property
    def sum_of_squares(self) -> float:
        """Sum of p_k^2."""
        return float(np.sum(self.array**2))


class CountVector(BaseModel):
    """Click counts n_k of the K detectors.

    Attributes:
        counts: K non-negative integers with total N >= 1.
    """

    model_config = ConfigDict(frozen=True)

    counts: tuple[int, ...] = Field(..., min_length=2)

    @field_validator("counts", mode="before")
    @classmethod
    def coerce_counts(cls, v: Any) -> tuple[int, ...]:
        """Accept any integer sequence, rejecting negatives and fractions."""
        values = list(np.asarray(v).ravel())
        out = []
        for x in values:
            if float(x) != int(x):
                raise ValueError(f"Counts must be integers, got {x!r}")
            if int(x) < 0:
                raise ValueError(f"Counts must be non-negative, got {x!r}")
            out.append(int(x))
        return tuple(out)

    @model_validator(mode="after")
    def validate_total(self) -> "CountVector":
        """At least one click is required."""
        if sum(self.counts) == 0:
            raise EmptyDataError()
        return self

    @classmethod
    def parse(cls, text: str) -> "CountVector":
        """Parse a comma-separated list such as '4,0,0,0'."""
        return cls(counts=[int(part) for part in text.split(",") if part.strip()])

    @property
    def total(self) -> int:
        """Total number of clicks N."""
        return sum(self.counts)

    @property
    def num_outcomes(self) -> int:
        """Number of detectors K."""
        return len(self.counts)

    @property
    def array(self) -> np.ndarray:
        """Counts as an integer array."""
        return np.asarray(self.counts, dtype=np.int64)

    @property
    def freqs(self) -> np.ndarray:
        """Relative frequencies nu_k = n_k / N."""
        return self.array / self.total


class BlochVector(BaseModel):
    """Qubit Bloch vector s with rho = (1 + s . sigma) / 2."""

    model_config = ConfigDict(frozen=True)

    s: tuple[float, float, float]

    @field_validator("s", mode="before")
    @classmethod
    def coerce_vector(cls, v: Any) -> tuple[float, float, float]:
        """Accept any length-3 real sequence."""
        arr = np.asarray(v, dtype=float).ravel()
        if arr.shape != (3,):
            raise ValueError(f"Bloch vector needs 3 components, got {arr.shape[0]}")
        return (float(arr[0]), float(arr[1]), float(arr[2]))

    @property
    def array(self) -> np.ndarray:
        """Components as a float array."""
        return np.asarray(self.s, dtype=float)

    @property
    def norm(self) -> float:
        """Euclidean length |s|."""
        return float(np.linalg.norm(self.array))

    @property
    def is_physical(self) -> bool:
        """|s| <= 1 within tolerance."""
        return self.norm <= 1.0 + get_settings().PHYSICALITY_TOLERANCE


class DensityOperator(BaseModel):
    """A unit-trace Hermitian operator, not necessarily positive.

    Attributes:
        op: The operator; physical iff its smallest eigenvalue is >= -1e-10.
    """

    model_config = ConfigDict(frozen=True)

    op: HermitianOperator

    @field_validator("op", mode="before")
    @classmethod
    def coerce_operator(cls, v: Any) -> Any:
        """Allow a bare matrix in place of a HermitianOperator."""
        if isinstance(v, (np.ndarray, list)):
            return HermitianOperator(matrix=v)
        return v

    @model_validator(mode="after")
    def validate_trace(self) -> "DensityOperator":
        """Unit trace within the geometry tolerance."""
        tol = get_settings().GEOMETRY_TOLERANCE
        if abs(self.op.trace - 1.0) > tol:
            raise ValueError(f"Density operator trace is {self.op.trace!r}, not 1")
        return self

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "DensityOperator":
        """Wrap a matrix."""
        return cls(op=HermitianOperator(matrix=matrix))

    @classmethod
    def from_bloch(cls, bloch: BlochVector | Sequence[float]) -> "DensityOperator":
        """Qubit state (1 + s . sigma) / 2."""
        if not isinstance(bloch, BlochVector):
            bloch = BlochVector(s=bloch)
        matrix = 0.5 * (np.eye(2) + np.einsum("i,ijk->jk", bloch.array, PAULI))
        return cls.from_matrix(matrix)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        """The state 1/d."""
        return cls.from_matrix(np.eye(dim) / dim)

    @classmethod
    def diagonal(cls, probs: Sequence[float] | np.ndarray) -> "DensityOperator":
        """Classical state sum_k |k> p_k <k|."""
        return cls.from_matrix(np.diag(np.asarray(probs, dtype=float)))

    @property
    def matrix(self) -> np.ndarray:
        """The underlying complex matrix."""
        return self.op.matrix

    @property
    def dim(self) -> int:
        """Hilbert space dimension d."""
        return self.op.dim

    @property
    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue."""
        return float(self.op.eigenvalues()[0])

    @property
    def purity(self) -> float:
        """tr{rho^2}."""
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    @property
    def is_physical(self) -> bool:
        """Positive semidefinite within the eigenvalue tolerance."""
        return self.min_eigenvalue >= -get_settings().EIGENVALUE_TOLERANCE

    def bloch_vector(self) -> BlochVector:
        """Bloch vector s_i = tr{rho sigma_i} of a qubit operator.

        Raises:
            ValueError: If the operator is not 2 x 2.
        """
        if self.dim != 2:
            raise ValueError("Bloch vectors exist only for qubits")
        s = np.real(np.einsum("jk,ikj->i", self.matrix, PAULI))
        return BlochVector(s=s)
