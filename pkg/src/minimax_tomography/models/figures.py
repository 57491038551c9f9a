"""Figure data tables."""

import math
from enum import Enum
from pathlib import Path
from typing import Any, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from minimax_tomography.models.risk import SearchSpec, read_frame, write_frame


class FigureId(str, Enum):
    """Reproducible figures.

    Attributes:
        FIG1: Coin likelihood curves p^N.
        FIG2: Minimum and maximum risks against N.
        FIG3: Optimized epsilon against N.
    """

    FIG1 = "fig1"
    FIG2 = "fig2"
    FIG3 = "fig3"


DEFAULT_LIKELIHOOD_SIZES = [1, 2, 5, 10, 100]
DEFAULT_RISK_SIZES = [1, 2, 4, 7, 10, 15, 20, 30, 50, 100]


class FigureParams(BaseModel):
    """Inputs of emit_figure_data.

    Attributes:
        likelihood_sizes: N values of the likelihood curves (fig1).
        p_points: Number of p grid points on [0, 1] (fig1).
        sample_sizes: N grid of the risk and epsilon figures (fig2, fig3).
        search: Epsilon search and inner grid settings (fig2, fig3).
    """

    model_config = ConfigDict(frozen=True)

    likelihood_sizes: list[int] = Field(
        default_factory=lambda: list(DEFAULT_LIKELIHOOD_SIZES), min_length=1
    )
    p_points: int = Field(default=101, ge=2)
    sample_sizes: list[int] = Field(
        default_factory=lambda: list(DEFAULT_RISK_SIZES), min_length=1
    )
    search: SearchSpec = Field(default_factory=SearchSpec)

    @field_validator("likelihood_sizes", "sample_sizes")
    @classmethod
    def validate_sizes(cls, v: list[int]) -> list[int]:
        """Sample sizes are positive."""
        if any(n < 1 for n in v):
            raise ValueError("sample sizes must be at least 1")
        return v


class FigureTable(BaseModel):
    """Named numeric columns of equal length.

    Attributes:
        figure_id: Which figure the data reproduces.
        columns: Column name to values, in output order.
    """

    model_config = ConfigDict(frozen=True)

    figure_id: FigureId
    columns: dict[str, list[float]]

    @field_validator("columns", mode="before")
    @classmethod
    def coerce_columns(cls, v: Any) -> dict[str, list[float]]:
        """Accept any mapping of name to numeric sequence."""
        return {str(name): [float(x) for x in values] for name, values in dict(v).items()}

    @model_validator(mode="after")
    def validate_table(self) -> "FigureTable":
        """Equal lengths and finite entries."""
        if not self.columns:
            raise ValueError("a figure table needs at least one column")
        lengths = {len(values) for values in self.columns.values()}
        if len(lengths) != 1:
            raise ValueError(f"column lengths differ: {sorted(lengths)}")
        for name, values in self.columns.items():
            if not all(math.isfinite(x) for x in values):
                raise ValueError(f"column {name!r} has non-finite entries")
        return self

    @property
    def num_rows(self) -> int:
        """Number of rows."""
        return len(next(iter(self.columns.values())))

    def column(self, name: str) -> list[float]:
        """Values of one column.

        Raises:
            KeyError: If the column does not exist.
        """
        return self.columns[name]

    def to_frame(self) -> pd.DataFrame:
        """Table as a DataFrame."""
        return pd.DataFrame(self.columns)

    def to_csv(self, path: Optional[Path | str] = None) -> str:
        """Write the table as CSV."""
        return write_frame(self.to_frame(), path)

    @classmethod
    def from_csv(cls, source: Path | str, figure_id: FigureId | str) -> "FigureTable":
        """Read a table written by to_csv."""
        frame = read_frame(source)
        return cls(
            figure_id=FigureId(figure_id),
            columns={name: frame[name].tolist() for name in frame.columns},
        )
