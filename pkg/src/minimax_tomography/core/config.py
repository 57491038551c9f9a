"""Application configuration settings.

This module provides the Settings class which loads configuration from
environment variables and .env files. It uses pydantic-settings for
validation and type coercion.
"""

from pathlib import Path
from typing import Literal, Optional

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables.

    All settings can be configured via environment variables or a .env file.
    See .env.example for a complete list of available options.

    Attributes:
        # Application Settings
        APP_NAME: Application display name.
        LOG_LEVEL: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL).
        SHOW_PROGRESS: Show tqdm progress bars for long scans.

        # Parallelism & Randomness
        THREADS: Worker threads for data-parallel risk and simulation chunks.
        DEFAULT_SEED: Seed used when a command is given no explicit seed.
        MC_CHUNK_SIZE: Samples per counter-based random stream chunk.

        # Enumeration Guards
        ENUMERATION_LIMIT: Largest admissible number of count vectors.
        MAX_SAMPLE_SIZE: Largest admissible sample size N.
        RISK_CHUNK_ELEMENTS: Max (count vector x state) elements per risk block.

        # Tolerances
        GEOMETRY_TOLERANCE: Absolute tolerance for POM identities.
        PHYSICALITY_TOLERANCE: Slack for sum-of-squares physicality tests.
        EIGENVALUE_TOLERANCE: Slack for spectral physicality tests.

        # Risk Extrema Search
        GRID_RADII: Number of Bloch-ball shells in the default grid.
        GRID_DIRECTIONS: Fibonacci-sphere directions per shell.
        REFINE_ITERATIONS: Nelder-Mead iteration cap.
        REFINE_TOLERANCE: Nelder-Mead simplex tolerance.

        # Epsilon Search
        EPSILON_SCAN_POINTS: Coarse scan points on [0, 1/4].
        EPSILON_TOLERANCE: Golden-section tolerance on epsilon.

        # Output Configuration
        OUTPUT_DIR: Directory for figure tables.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # =============================================================================
    # Application Settings
    # =============================================================================
    APP_NAME: str = Field(
        default="Minimax Tomography", description="Application display name"
    )
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="INFO", description="Logging level"
    )
    SHOW_PROGRESS: bool = Field(
        default=False, description="Show progress bars for long scans"
    )

    # =============================================================================
    # Parallelism & Randomness
    # =============================================================================
    THREADS: int = Field(
        default=1, ge=1, le=256, description="Worker threads for data-parallel chunks"
    )
    DEFAULT_SEED: int = Field(
        default=42, ge=0, lt=2**64, description="Default 64-bit random seed"
    )
    MC_CHUNK_SIZE: int = Field(
        default=65536, ge=1, description="Samples per counter-based stream chunk"
    )

    # =============================================================================
    # Enumeration Guards
    # =============================================================================
    ENUMERATION_LIMIT: int = Field(
        default=10_000_000, ge=1, description="Largest admissible outcome enumeration"
    )
    MAX_SAMPLE_SIZE: int = Field(
        default=200, ge=1, description="Largest admissible sample size N"
    )
    RISK_CHUNK_ELEMENTS: int = Field(
        default=4_000_000,
        ge=1024,
        description="Max (count vector x state) elements per risk block",
    )

    # =============================================================================
    # Tolerances
    # =============================================================================
    GEOMETRY_TOLERANCE: float = Field(
        default=1e-12, gt=0, description="Tolerance for POM identities"
    )
    PHYSICALITY_TOLERANCE: float = Field(
        default=1e-12, gt=0, description="Slack for sum-of-squares tests"
    )
    EIGENVALUE_TOLERANCE: float = Field(
        default=1e-10, gt=0, description="Slack for spectral tests"
    )

    # =============================================================================
    # Risk Extrema Search
    # =============================================================================
    GRID_RADII: int = Field(default=25, ge=1, description="Bloch-ball shells")
    GRID_DIRECTIONS: int = Field(
        default=162, ge=1, description="Fibonacci-sphere directions per shell"
    )
    REFINE_ITERATIONS: int = Field(
        default=200, ge=0, description="Nelder-Mead iteration cap"
    )
    REFINE_TOLERANCE: float = Field(
        default=1e-8, gt=0, description="Nelder-Mead simplex tolerance"
    )

    # =============================================================================
    # Epsilon Search
    # =============================================================================
    EPSILON_SCAN_POINTS: int = Field(
        default=16, ge=3, description="Coarse scan points on [0, 1/4]"
    )
    EPSILON_TOLERANCE: float = Field(
        default=1e-4, gt=0, description="Golden-section tolerance on epsilon"
    )

    # =============================================================================
    # Output Configuration
    # =============================================================================
    OUTPUT_DIR: Path = Field(
        default=Path("./output"), description="Directory for figure tables"
    )

    # =============================================================================
    # Validators
    # =============================================================================
    @field_validator("OUTPUT_DIR", mode="before")
    @classmethod
    def parse_path(cls, v: Optional[str | Path]) -> Path:
        """Convert string paths to Path objects."""
        if v is None:
            return Path(".")
        if isinstance(v, str):
            return Path(v)
        return v

    @model_validator(mode="after")
    def validate_tolerances(self) -> "Settings":
        """Spectral slack must not be tighter than the quadratic one."""
        if self.EIGENVALUE_TOLERANCE < self.PHYSICALITY_TOLERANCE:
            raise ValueError(
                f"EIGENVALUE_TOLERANCE ({self.EIGENVALUE_TOLERANCE}) "
                f"must be at least PHYSICALITY_TOLERANCE ({self.PHYSICALITY_TOLERANCE})"
            )
        return self

    def __repr__(self) -> str:
        """Return a short string representation."""
        return (
            f"Settings("
            f"APP_NAME={self.APP_NAME!r}, "
            f"LOG_LEVEL={self.LOG_LEVEL!r}, "
            f"THREADS={self.THREADS}, "
            f"DEFAULT_SEED={self.DEFAULT_SEED}"
            f")"
        )


# Global settings instance (lazy-loaded)
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create the global Settings instance.

    Returns:
        Settings: The application settings instance.
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reload_settings(**overrides: object) -> Settings:
    """Reload settings from environment (useful in testing and for CLI flags).

    Args:
        **overrides: Field values that take precedence over the environment.

    Returns:
        Settings: A fresh Settings instance.
    """
    global _settings
    _settings = Settings(**overrides)  # type: ignore[arg-type]
    return _settings
