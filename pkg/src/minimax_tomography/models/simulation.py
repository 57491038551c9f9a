"""Monte Carlo configuration and result models."""

from pydantic import BaseModel, ConfigDict, Field

from minimax_tomography.models.states import ProbVector


class SimConfig(BaseModel):
    """Parameters of a simulated tomography experiment.

    Attributes:
        seed: 64-bit seed; trial t uses the stream derived from (seed, t).
        trials: Number of independent experiments.
        N: Clicks per experiment.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = Field(..., ge=0, lt=2**64)
    trials: int = Field(..., ge=1)
    N: int = Field(..., ge=1)


class EmpiricalRisk(BaseModel):
    """Sample mean of the squared error with its standard error."""

    model_config = ConfigDict(frozen=True)

    mean: float
    std_err: float = Field(..., ge=0.0)
    trials: int = Field(..., ge=1)


class MonteCarloEstimate(BaseModel):
    """A Monte Carlo posterior mean.

    Attributes:
        p_hat: The estimate.
        std_err: Component-wise standard errors.
        acceptance_rate: Fraction of samples passing the physicality cut.
        samples: Number of posterior draws.
    """

    model_config = ConfigDict(frozen=True)

    p_hat: ProbVector
    std_err: tuple[float, ...]
    acceptance_rate: float = Field(..., ge=0.0, le=1.0)
    samples: int = Field(..., ge=1)
