"""Pytest configuration and shared fixtures.

This module provides the standard measurements used throughout the suite
and resets the global settings around every test so that CLI flags or
overrides in one test do not leak into the next. Cached risk engines are
dropped too, since their enumerations were admitted under the old limits.
"""

import numpy as np
import pytest

from minimax_tomography.core.config import reload_settings
from minimax_tomography.models.operators import PomKind, SymmetricPOM
from minimax_tomography.services.pom_geometry import build_pom
from minimax_tomography.services.risk_engine import clear_engine_cache


@pytest.fixture(autouse=True)
def reset_settings():
    """Fresh settings from the environment for each test."""
    settings = reload_settings()
    clear_engine_cache()
    yield settings
    reload_settings()


@pytest.fixture(scope="session")
def tetrahedron() -> SymmetricPOM:
    """The qubit SIC measurement in standard orientation."""
    return build_pom(PomKind.TETRAHEDRON)


@pytest.fixture(scope="session")
def coin() -> SymmetricPOM:
    """The two-sided classical die."""
    return build_pom(PomKind.CLASSICAL_DIE, num_outcomes=2)


@pytest.fixture(scope="session")
def die4() -> SymmetricPOM:
    """The four-sided classical die."""
    return build_pom(PomKind.CLASSICAL_DIE, num_outcomes=4)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for drawing random test inputs."""
    return np.random.default_rng(20240611)


def random_bloch(rng: np.random.Generator, count: int, radius: float = 1.0) -> np.ndarray:
    """Bloch vectors drawn uniformly from the ball of the given radius."""
    directions = rng.normal(size=(count, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * rng.random(count) ** (1.0 / 3.0)
    return directions * radii[:, None]
