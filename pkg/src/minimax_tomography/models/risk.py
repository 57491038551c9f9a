"""Risk and search result models.

Tables (risk surfaces, epsilon scans) are written and re-read through pandas
so that every CSV the tool emits can be parsed back into the same model.
"""

import io
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from minimax_tomography.core.config import get_settings
from minimax_tomography.models.estimator_spec import EstimatorKind
from minimax_tomography.models.states import ProbVector

BLOCH_COLUMNS = ("sx", "sy", "sz")
EPSILON_COLUMNS = ("N", "epsilon_star", "max_risk_star", "max_risk_zero")


def write_frame(frame: pd.DataFrame, path: Optional[Path | str] = None) -> str:
    """Write a frame as comma-separated, LF-terminated CSV.

    Args:
        frame: Table to write.
        path: Destination file; when None only the text is returned.

    Returns:
        The CSV text.
    """
    text = frame.to_csv(index=False, lineterminator="\n")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_frame(source: Path | str) -> pd.DataFrame:
    """Read CSV written by write_frame from a path or from CSV text."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
        return pd.read_csv(source, float_precision="round_trip")
    return pd.read_csv(io.StringIO(source), float_precision="round_trip")


class OutcomeEnumeration(BaseModel):
    """All count vectors of N clicks on K detectors.

    Attributes:
        N: Sample size.
        K: Number of outcomes.
        count_vectors: (V, K) integer array, V = C(N+K-1, K-1).
        log_multinomials: (V,) array of log(N! / prod n_k!).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    N: int = Field(..., ge=1)
    K: int = Field(..., ge=2)
    count_vectors: np.ndarray
    log_multinomials: np.ndarray

    @model_validator(mode="after")
    def validate_shapes(self) -> "OutcomeEnumeration":
        """Row sums equal N and one log-multinomial per row."""
        if self.count_vectors.ndim != 2 or self.count_vectors.shape[1] != self.K:
            raise ValueError(f"count_vectors must be (V, {self.K})")
        if self.log_multinomials.shape != (self.count_vectors.shape[0],):
            raise ValueError("log_multinomials must have one entry per count vector")
        if np.any(self.count_vectors.sum(axis=1) != self.N):
            raise ValueError(f"every count vector must total {self.N}")
        return self

    @property
    def size(self) -> int:
        """Number of count vectors V."""
        return int(self.count_vectors.shape[0])

    @property
    def frequencies(self) -> np.ndarray:
        """(V, K) relative frequencies."""
        return self.count_vectors / float(self.N)

    def log_likelihoods(self, probs: np.ndarray) -> np.ndarray:
        """Log-probabilities of every count vector under each state.

        A count on a zero-probability outcome gives -inf, while 0 * log 0
        contributes nothing.

        Args:
            probs: (G, K) outcome probabilities.

        Returns:
            (G, V) array of log L(D | p).
        """
        probs = np.atleast_2d(np.asarray(probs, dtype=float))
        tiny = np.finfo(float).tiny
        log_p = np.log(np.maximum(probs, tiny))
        log_l = self.log_multinomials[None, :] + log_p @ self.count_vectors.T
        impossible = ((probs <= 0.0).astype(np.int64) @ (self.count_vectors > 0).T) > 0
        log_l[impossible] = -np.inf
        return log_l


class DiscretePrior(BaseModel):
    """A finitely supported prior over outcome probability vectors.

    Attributes:
        states: Support points.
        weights: Non-negative weights summing to 1.
    """

    model_config = ConfigDict(frozen=True)

    states: tuple[ProbVector, ...] = Field(..., min_length=1)
    weights: tuple[float, ...]

    @model_validator(mode="after")
    def validate_weights(self) -> "DiscretePrior":
        """One weight per state, all states of equal length, unit total."""
        if len(self.weights) != len(self.states):
            raise ValueError("one weight per state is required")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {sum(self.weights)!r}, not 1")
        if len({s.num_outcomes for s in self.states}) != 1:
            raise ValueError("all prior states must have the same number of outcomes")
        return self

    @classmethod
    def uniform(cls, states: list[ProbVector]) -> "DiscretePrior":
        """Equal weight on each state."""
        return cls(states=tuple(states), weights=tuple([1.0 / len(states)] * len(states)))

    @classmethod
    def point(cls, state: ProbVector) -> "DiscretePrior":
        """All mass on a single state."""
        return cls(states=(state,), weights=(1.0,))

    @property
    def num_outcomes(self) -> int:
        """K of the support points."""
        return self.states[0].num_outcomes

    @property
    def prob_matrix(self) -> np.ndarray:
        """(M, K) matrix of support points."""
        return np.stack([s.array for s in self.states])

    @property
    def weight_array(self) -> np.ndarray:
        """(M,) weight array."""
        return np.asarray(self.weights, dtype=float)


class GridSpec(BaseModel):
    """How risk_extrema samples the state space.

    Attributes:
        radii: Bloch-ball shells i / radii, i = 1..radii (plus the center).
        directions: Fibonacci-sphere directions per shell.
        simplex_resolution: Denominator of the simplex grid for classical dice.
        refine: Run Nelder-Mead from the best and worst grid points.
        refine_iterations: Nelder-Mead iteration cap.
        refine_tolerance: Nelder-Mead simplex tolerance.
    """

    model_config = ConfigDict(frozen=True)

    radii: int = Field(default_factory=lambda: get_settings().GRID_RADII, ge=1)
    directions: int = Field(default_factory=lambda: get_settings().GRID_DIRECTIONS, ge=1)
    simplex_resolution: int = Field(default=20, ge=1)
    refine: bool = True
    refine_iterations: int = Field(
        default_factory=lambda: get_settings().REFINE_ITERATIONS, ge=0
    )
    refine_tolerance: float = Field(
        default_factory=lambda: get_settings().REFINE_TOLERANCE, gt=0
    )


class RiskSurface(BaseModel):
    """Risk values over a set of states, with the extrema found among them.

    Refined extrema are appended to the grid, so the extrema are always
    the arg-max and arg-min rows.

    Attributes:
        columns: Coordinate column names (sx, sy, sz or p1..pK).
        points: (G, D) state coordinates.
        risks: (G,) risk values.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    columns: tuple[str, ...]
    points: np.ndarray
    risks: np.ndarray

    @field_validator("points", "risks", mode="before")
    @classmethod
    def coerce_array(cls, v: Any) -> np.ndarray:
        """Coerce to float arrays."""
        return np.asarray(v, dtype=float)

    @model_validator(mode="after")
    def validate_surface(self) -> "RiskSurface":
        """Non-empty, consistent shapes, finite non-negative risks."""
        if self.points.ndim != 2 or self.points.shape[1] != len(self.columns):
            raise ValueError(f"points must have {len(self.columns)} columns")
        if self.risks.shape != (self.points.shape[0],) or self.risks.size == 0:
            raise ValueError("one risk per grid point is required")
        if not np.all(np.isfinite(self.risks)):
            raise ValueError("risks must be finite")
        if self.risks.min() < -get_settings().PHYSICALITY_TOLERANCE:
            raise ValueError("risks must be non-negative")
        return self

    @property
    def max_index(self) -> int:
        """Row of the largest risk."""
        return int(np.argmax(self.risks))

    @property
    def min_index(self) -> int:
        """Row of the smallest risk."""
        return int(np.argmin(self.risks))

    @property
    def max_risk(self) -> float:
        """Largest risk found."""
        return float(self.risks[self.max_index])

    @property
    def min_risk(self) -> float:
        """Smallest risk found."""
        return float(self.risks[self.min_index])

    @property
    def max_state(self) -> np.ndarray:
        """Coordinates of the worst state."""
        return self.points[self.max_index]

    @property
    def min_state(self) -> np.ndarray:
        """Coordinates of the best state."""
        return self.points[self.min_index]

    def extrema_json(self) -> dict[str, Any]:
        """Extrema as a JSON-ready dict."""
        return {
            "coordinates": list(self.columns),
            "max_state": self.max_state.tolist(),
            "max_risk": self.max_risk,
            "min_state": self.min_state.tolist(),
            "min_risk": self.min_risk,
        }

    def to_frame(self) -> pd.DataFrame:
        """Grid as a DataFrame with a trailing 'risk' column."""
        frame = pd.DataFrame(self.points, columns=list(self.columns))
        frame["risk"] = self.risks
        return frame

    def to_csv(self, path: Optional[Path | str] = None) -> str:
        """Write the grid as CSV."""
        return write_frame(self.to_frame(), path)

    @classmethod
    def from_csv(cls, source: Path | str) -> "RiskSurface":
        """Read a surface written by to_csv."""
        frame = read_frame(source)
        columns = tuple(c for c in frame.columns if c != "risk")
        return cls(
            columns=columns,
            points=frame[list(columns)].to_numpy(dtype=float),
            risks=frame["risk"].to_numpy(dtype=float),
        )


class SearchSpec(BaseModel):
    """Parameters of the epsilon search.

    Attributes:
        family: QUANTUM_MINIMAX, ML_QUANTUM_EPSILON or ML_ADMIX.
        variant_bn: Use b_N = sqrt(1 - 4 epsilon) for QUANTUM_MINIMAX.
        grid: Inner worst-case search settings.
        scan_points: Coarse scan points on [0, 1/4], endpoints included.
        tolerance: Golden-section bracket width at which the search stops.
    """

    model_config = ConfigDict(frozen=True)

    family: EstimatorKind = EstimatorKind.QUANTUM_MINIMAX
    variant_bn: bool = False
    grid: GridSpec = Field(default_factory=GridSpec)
    scan_points: int = Field(
        default_factory=lambda: get_settings().EPSILON_SCAN_POINTS, ge=3
    )
    tolerance: float = Field(
        default_factory=lambda: get_settings().EPSILON_TOLERANCE, gt=0
    )

    @field_validator("family")
    @classmethod
    def validate_family(cls, v: EstimatorKind) -> EstimatorKind:
        """Only epsilon-parametrized families can be searched."""
        allowed = (
            EstimatorKind.QUANTUM_MINIMAX,
            EstimatorKind.ML_QUANTUM_EPSILON,
            EstimatorKind.ML_ADMIX,
        )
        if v not in allowed:
            raise ValueError(f"{v.value} has no epsilon parameter to optimize")
        return v


class EpsilonResult(BaseModel):
    """Outcome of an epsilon search at one sample size.

    Attributes:
        N: Sample size.
        family: Estimator family searched.
        epsilon_star: Best epsilon found.
        max_risk_at_star: Worst-case risk at epsilon_star.
        max_risk_at_zero: Worst-case risk at epsilon = 0.
        max_risk_at_quarter: Worst-case risk at epsilon = 1/4.
        trace: Every (epsilon, worst-case risk) probe in evaluation order.
    """

    model_config = ConfigDict(frozen=True)

    N: int = Field(..., ge=1)
    family: EstimatorKind
    epsilon_star: float = Field(..., ge=0.0, le=0.25)
    max_risk_at_star: float
    max_risk_at_zero: float
    max_risk_at_quarter: float
    trace: list[tuple[float, float]] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_improvement(self) -> "EpsilonResult":
        """The optimum never does worse than epsilon = 0."""
        if self.max_risk_at_star > self.max_risk_at_zero + 1e-12:
            raise ValueError("max_risk_at_star exceeds max_risk_at_zero")
        return self

    @staticmethod
    def table(results: list["EpsilonResult"]) -> pd.DataFrame:
        """One row per result with the epsilon-table columns."""
        return pd.DataFrame(
            [
                (r.N, r.epsilon_star, r.max_risk_at_star, r.max_risk_at_zero)
                for r in results
            ],
            columns=list(EPSILON_COLUMNS),
        )

    @staticmethod
    def table_to_csv(
        results: list["EpsilonResult"], path: Optional[Path | str] = None
    ) -> str:
        """Write results as the epsilon CSV table."""
        return write_frame(EpsilonResult.table(results), path)

    @staticmethod
    def table_from_csv(source: Path | str) -> pd.DataFrame:
        """Read an epsilon CSV table.

        Raises:
            ValueError: If a required column is missing.
        """
        frame = read_frame(source)
        missing = set(EPSILON_COLUMNS) - set(frame.columns)
        if missing:
            raise ValueError(f"epsilon table is missing columns {sorted(missing)}")
        return frame


class BetaSearchResult(BaseModel):
    """Worst-case risk of add-beta over a grid of beta values.

    Attributes:
        K: Number of outcomes of the die.
        N: Sample size.
        betas: The beta grid.
        worst_risks: Largest enumerated risk over the probe states, per beta.
        beta_star: Grid point with the smallest worst-case risk.
        worst_risk_star: worst_risks at beta_star.
        closed_form_worst_risks: Supremum over the whole simplex from the
            closed-form MSE, per beta. The MSE is affine in sum p^2, so the
            supremum sits at a vertex or at the uniform state.
    """

    model_config = ConfigDict(frozen=True)

    K: int = Field(..., ge=2)
    N: int = Field(..., ge=1)
    betas: list[float] = Field(..., min_length=1)
    worst_risks: list[float]
    beta_star: float
    worst_risk_star: float
    closed_form_worst_risks: list[float]

    @model_validator(mode="after")
    def validate_lengths(self) -> "BetaSearchResult":
        """One worst-case risk per beta."""
        if len(self.worst_risks) != len(self.betas) or len(
            self.closed_form_worst_risks
        ) != len(self.betas):
            raise ValueError("one worst-case risk per beta is required")
        return self
