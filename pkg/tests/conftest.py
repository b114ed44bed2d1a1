"""
Shared fixtures: fixture chains, hand-built traces and small probit models.
"""

import os

import numpy as np
import pytest

from models.chain import ChainSpec, SplitChainTrace
from models.probit import MinorizationConfig, ProbitModel

FIXTURES_DIR = os.path.join(os.path.dirname(__file__), 'fixtures')


@pytest.fixture
def fixtures_dir() -> str:
    return FIXTURES_DIR


@pytest.fixture
def two_state_spec() -> ChainSpec:
    """TwoState(0.2, 0.3): pi = (0.6, 0.4), h = (1, 0.375), Sigma_f = 0.72."""
    return ChainSpec(kind='two-state', a=0.2, b=0.3)


@pytest.fixture
def ar1_spec() -> ChainSpec:
    """AR1(0.5, 1): Sigma_f = 4."""
    return ChainSpec(kind='ar1', rho=0.5, noise_sd=1.0)


@pytest.fixture
def hand_trace() -> SplitChainTrace:
    """States 1..12 with bells at t = 3, 7, 12 (l = 1)."""
    bells = np.zeros(12, dtype=np.int8)
    bells[[2, 6, 11]] = 1
    from_q = np.zeros(12, dtype=bool)
    from_q[[0, 3, 7]] = True
    return SplitChainTrace(states=np.arange(1.0, 13.0), bells=bells, from_q=from_q, lag=1, seed=0)


@pytest.fixture
def tiny_probit() -> ProbitModel:
    """n = 2, p = 1, X = (1, 1)^T, y = (1, 1)."""
    return ProbitModel.from_design(np.ones((2, 1)), np.array([1, 1]))


@pytest.fixture
def tiny_minorization() -> MinorizationConfig:
    return MinorizationConfig(z_star=np.array([0.8, 1.2]), box=np.array([[0.2, 1.6]]))


@pytest.fixture
def two_coef_probit() -> ProbitModel:
    """Intercept plus a symmetric covariate, balanced non-separable responses."""
    x = np.linspace(-2.0, 2.0, 20)
    y = (x > 0).astype(int)
    y[[4, 15]] = 1 - y[[4, 15]]
    return ProbitModel.from_design(np.column_stack([np.ones(20), x]), y)


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long-running accuracy checks (deselect with -m "not slow")')
