"""
Analytic oracles and plain simulation for the fixture chains.

    two-state, f = 1{X = 1}:  mean pi_1,  Sigma_f = pi_0 pi_1 (2 - a - b) / (a + b)
    ar1,       f = identity:  mean 0,     Sigma_f = s^2 / (1 - rho)^2
"""

import numpy as np
from scipy import signal

from chain_core.kernels import build_kernel
from models.chain import ChainSpec
from utils.errors import UnsupportedOracleError


def _require_fixture(spec: ChainSpec) -> None:
    if spec.kind not in ('two-state', 'ar1'):
        raise UnsupportedOracleError(f"no analytic oracle for a {spec.kind} chain")


def oracle_sigma_f(spec: ChainSpec) -> np.ndarray:
    """
    Asymptotic variance Sigma_f of the fixture chain as a 1 x 1 matrix.

    Raises:
        UnsupportedOracleError: For generic chains
    """
    _require_fixture(spec)
    if spec.kind == 'two-state':
        a, b = spec.a, spec.b
        pi0, pi1 = b / (a + b), a / (a + b)
        return np.array([[pi0 * pi1 * (2.0 - a - b) / (a + b)]])
    return np.array([[spec.noise_sd ** 2 / (1.0 - spec.rho) ** 2]])


def oracle_mean(spec: ChainSpec) -> np.ndarray:
    """Stationary mean E_pi f of the fixture chain."""
    _require_fixture(spec)
    if spec.kind == 'two-state':
        return np.array([spec.a / (spec.a + spec.b)])
    return np.array([0.0])


def oracle_mu(spec: ChainSpec) -> float:
    """
    Mean tour length mu = l / E_pi[h]; infinite when h vanishes.

    Raises:
        UnsupportedOracleError: For generic chains
    """
    _require_fixture(spec)
    kernel = build_kernel(spec)
    rate = kernel.stationary_mean_h()
    return float('inf') if rate == 0.0 else kernel.lag / rate


def simulate_chain(spec: ChainSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """
    Plain stationary simulation of a chain, without bells.

    Two-state chains are built from geometric sojourns, AR(1) chains with a
    linear filter; generic kernels step one state at a time.

    Returns:
        Array of shape (n, d)
    """
    if spec.kind == 'two-state':
        return _two_state_path(spec.a, spec.b, n, rng)[:, None]
    if spec.kind == 'ar1':
        sd = spec.noise_sd / np.sqrt(1.0 - spec.rho ** 2)
        e = spec.noise_sd * rng.standard_normal(n)
        e[0] = sd * rng.standard_normal()
        return signal.lfilter([1.0], [1.0, -spec.rho], e)[:, None]

    kernel = spec.kernel
    out = np.empty((n, kernel.dim))
    x = np.atleast_1d(kernel.sample_q(rng)).astype(float)
    for t in range(n):
        out[t] = x
        x = kernel.advance(x, rng)
    return out


def _two_state_path(a: float, b: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Two-state path from alternating Geometric(a) / Geometric(b) sojourns."""
    state = 1 if rng.random() < a / (a + b) else 0
    leave = (a, b)
    values, lengths, total = [], [], 0
    while total < n:
        count = max(16, int(2 * (n - total) * a * b / (a + b)) + 16)
        first, second = leave[state], leave[1 - state]
        block = np.empty(2 * count, dtype=np.int64)
        block[0::2] = rng.geometric(first, count) if first > 0 else n
        block[1::2] = rng.geometric(second, count) if second > 0 else n
        labels = np.empty(2 * count, dtype=np.int8)
        labels[0::2] = state
        labels[1::2] = 1 - state
        values.append(labels)
        lengths.append(block)
        total += int(block.sum())
    path = np.repeat(np.concatenate(values), np.concatenate(lengths))[:n]
    return path.astype(float)
