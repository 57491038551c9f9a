"""Declarative estimator descriptions and minimax coefficients."""

import math
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class EstimatorKind(str, Enum):
    """Point estimators from counts to probability vectors.

    Attributes:
        ML_CLASSICAL: Relative frequencies.
        ADD_BETA: Posterior mean for the symmetric power prior.
        CLASSICAL_MINIMAX: Constant-risk estimator a_N/K + b_N nu_k.
        QUANTUM_MINIMAX: Classical minimax seed admixed to the purity target.
        ML_QUANTUM: Constrained maximum likelihood on the Bloch ball.
        ML_QUANTUM_EPSILON: Maximum likelihood on the shrunken ball.
        MEAN_MC: Monte Carlo posterior mean with optional physicality cut.
        ML_ADMIX: Relative frequencies admixed to the purity target.
    """

    ML_CLASSICAL = "ml_classical"
    ADD_BETA = "add_beta"
    CLASSICAL_MINIMAX = "classical_minimax"
    QUANTUM_MINIMAX = "quantum_minimax"
    ML_QUANTUM = "ml_quantum"
    ML_QUANTUM_EPSILON = "ml_quantum_epsilon"
    MEAN_MC = "mean_mc"
    ML_ADMIX = "ml_admix"


# Kinds whose epsilon parameter is meaningful.
EPSILON_KINDS = frozenset(
    {
        EstimatorKind.QUANTUM_MINIMAX,
        EstimatorKind.ML_QUANTUM_EPSILON,
        EstimatorKind.ML_ADMIX,
    }
)

# Kinds that only make sense for the qubit tetrahedron measurement.
QUBIT_SIC_KINDS = frozenset(
    {
        EstimatorKind.QUANTUM_MINIMAX,
        EstimatorKind.ML_QUANTUM,
        EstimatorKind.ML_QUANTUM_EPSILON,
        EstimatorKind.ML_ADMIX,
    }
)


class EstimatorSpec(BaseModel):
    """A declarative description of one estimator.

    Attributes:
        kind: Which estimator.
        beta: Pseudo-count for ADD_BETA and MEAN_MC (must be > 0 there).
        epsilon: Purity slack in [0, 1/4] for the qubit-targeted kinds.
        variant_bn: For QUANTUM_MINIMAX, replace b_N by sqrt(1 - 4 epsilon).
        samples: Monte Carlo sample count for MEAN_MC.
        seed: Monte Carlo seed for MEAN_MC; None uses the configured default.
        indicator: Apply the physicality cut in MEAN_MC.
    """

    model_config = ConfigDict(frozen=True, use_enum_values=False)

    kind: EstimatorKind
    beta: Optional[float] = Field(default=None, gt=0)
    epsilon: float = Field(default=0.0, ge=0.0, le=0.25)
    variant_bn: bool = False
    samples: int = Field(default=100_000, ge=1000)
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    indicator: bool = False

    @model_validator(mode="after")
    def validate_parameters(self) -> "EstimatorSpec":
        """ADD_BETA and MEAN_MC need a beta."""
        if self.kind in (EstimatorKind.ADD_BETA, EstimatorKind.MEAN_MC) and self.beta is None:
            raise ValueError(f"{self.kind.value} requires beta > 0")
        return self

    def with_epsilon(self, epsilon: float) -> "EstimatorSpec":
        """Copy with a different epsilon (validated)."""
        return EstimatorSpec(**{**self.model_dump(), "epsilon": epsilon})

    @property
    def label(self) -> str:
        """Compact human-readable tag, e.g. 'quantum_minimax(eps=0.05)'."""
        params = []
        if self.beta is not None:
            params.append(f"beta={self.beta:g}")
        if self.kind in EPSILON_KINDS:
            params.append(f"eps={self.epsilon:g}")
        if self.variant_bn:
            params.append("bn")
        if self.kind == EstimatorKind.MEAN_MC and self.indicator:
            params.append("indicator")
        return f"{self.kind.value}({','.join(params)})" if params else self.kind.value

    def to_json_dict(self) -> dict[str, Any]:
        """JSON dict without unset optional parameters."""
        data = self.model_dump(mode="json", exclude_none=True)
        if self.kind != EstimatorKind.MEAN_MC:
            for key in ("samples", "seed", "indicator"):
                data.pop(key, None)
        return data


class MinimaxCoefficients(BaseModel):
    """Coefficients a_N = 1/(1 + sqrt N) and b_N = 1/(1 + 1/sqrt N)."""

    model_config = ConfigDict(frozen=True)

    N: int = Field(..., ge=1)
    a: float
    b: float

    @classmethod
    def for_sample_size(cls, N: int) -> "MinimaxCoefficients":
        """Coefficients for sample size N."""
        root = math.sqrt(N)
        return cls(N=N, a=1.0 / (1.0 + root), b=root / (1.0 + root))

    @classmethod
    def from_epsilon(cls, N: int, epsilon: float) -> "MinimaxCoefficients":
        """The single-parameter variant b = sqrt(1 - 4 epsilon), a = 1 - b."""
        b = math.sqrt(1.0 - 4.0 * epsilon)
        return cls(N=N, a=1.0 - b, b=b)
