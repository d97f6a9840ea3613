"""Shared pytest fixtures for chua-lyapunov tests.

This module provides parameter sets with known behaviour, integrator
settings tuned for fast tests, and CLI helpers.
"""

from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from chua_lyapunov.attractors import ClassificationConfig
from chua_lyapunov.model import Parameters
from chua_lyapunov.variational import IntegratorConfig

# =============================================================================
# Parameter Fixtures
# =============================================================================


@pytest.fixture
def chaotic_params() -> Parameters:
    """Cubic Chua double-scroll parameters (alpha*m1 > 0, gamma = 0)."""
    return Parameters(alpha=10.0, beta=-100.0 / 7.0, gamma=0.0, m0=7.0 / 6.0, m1=1.0 / 16.0)


@pytest.fixture
def linear_params() -> Parameters:
    """Linear system (m1 = 0) with a symmetric J(0) and simple real eigenvalues.

    With alpha = beta = 1 the Jacobian is symmetric, so the fundamental
    matrix is expm(J t) and its singular values are exactly exp(lambda_i t).
    """
    return Parameters(alpha=1.0, beta=1.0, gamma=2.0, m0=0.5, m1=0.0)


@pytest.fixture
def converging_params() -> Parameters:
    """Globally convergent parameters whose only equilibrium is the origin."""
    return Parameters(alpha=1.0, beta=-1.0, gamma=2.0, m0=-1.0, m1=0.5)


@pytest.fixture
def bistable_params() -> Parameters:
    """Globally convergent parameters with an unstable origin and two stable foci.

    The outer equilibria sit at x = +-sqrt(7/6).
    """
    return Parameters(alpha=1.0, beta=-1.0, gamma=2.0, m0=1.5, m1=1.0)


@pytest.fixture
def blowup_params() -> Parameters:
    """alpha*m1 < 0: large initial x escapes in finite time."""
    return Parameters(alpha=1.0, beta=-1.0, gamma=1.0, m0=1.0, m1=-1.0)


# =============================================================================
# Settings Fixtures
# =============================================================================


@pytest.fixture
def fast_integrator() -> IntegratorConfig:
    """Fixed-step RK4 with a coarse step for quick runs."""
    return IntegratorConfig(dt=1e-2, qr_interval=0.5)


@pytest.fixture
def fine_integrator() -> IntegratorConfig:
    """Fixed-step RK4 with the default step."""
    return IntegratorConfig(dt=1e-3, qr_interval=0.5)


@pytest.fixture
def fast_classification() -> ClassificationConfig:
    """Short probing windows with few probes."""
    return ClassificationConfig(
        probes_per_equilibrium=6,
        t_transient=20.0,
        t_observe=30.0,
        observe_stride=0.1,
    )


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded random generator for property-style checks."""
    return np.random.default_rng(20240601)


# =============================================================================
# CLI Fixtures
# =============================================================================


@pytest.fixture
def cli_runner() -> CliRunner:
    """Create a Click CLI test runner."""
    return CliRunner()


@pytest.fixture
def out_dir(tmp_path: Path) -> Path:
    """Create a temporary output directory for command results."""
    directory = tmp_path / "out"
    directory.mkdir()
    return directory
