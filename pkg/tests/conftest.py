"""
Pytest configuration and fixtures for the test suite.

This module provides shared fixtures for spins, quadrature grids, seeded
random generators and the FastAPI test client.
"""

from typing import Generator

import numpy as np
import pytest
from fastapi.testclient import TestClient

from spintop.api.v1.endpoints import reports, simulations
from spintop.main import app
from spintop.physics.quantum_top import TopParams
from spintop.physics.spin_core import SpinQuantum

from tests.fixtures import create_test_grid


@pytest.fixture
def spin_one() -> SpinQuantum:
    """s = 1, the smallest spin with a non-trivial twist."""
    return SpinQuantum(2)


@pytest.fixture
def spin_half() -> SpinQuantum:
    return SpinQuantum(1)


@pytest.fixture
def twist_params(spin_one) -> TopParams:
    """omega = 0, J = 1 at s = 1."""
    return TopParams(0.0, 1.0, spin_one)


@pytest.fixture
def exact_grid(spin_one):
    """Smallest grid that integrates every s = 1 Q-function exactly."""
    return create_test_grid(spin_one, minimal=True)


@pytest.fixture
def fine_grid(spin_one):
    """64 x 128 grid for s = 1."""
    return create_test_grid(spin_one)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so random states are reproducible."""
    return np.random.default_rng(12345)


@pytest.fixture(scope="function")
def client() -> Generator[TestClient, None, None]:
    """
    FastAPI test client with rate limiting disabled.

    Yields:
        FastAPI TestClient instance
    """
    limiters = (app.state.limiter, simulations.limiter, reports.limiter)
    for limiter in limiters:
        limiter.enabled = False

    with TestClient(app) as test_client:
        yield test_client

    for limiter in limiters:
        limiter.enabled = True
