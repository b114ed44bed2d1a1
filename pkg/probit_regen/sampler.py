"""
Data-augmentation Gibbs sampler for probit regression.

    z_i | beta ~ TN(x_i^T beta, 1, y_i)          truncated by the sign of y_i
    beta | z   ~ N_p((X^T X)^-1 X^T z, (X^T X)^-1)

The deterministic scan refreshes z then beta. The random scan refreshes
beta with probability p_scan and z otherwise.
"""

import math

import numpy as np
from scipy import special

from models.probit import ProbitModel, ProbitState
from probit_regen.truncnorm import sample_truncated_normals

LOG_2PI = math.log(2.0 * math.pi)


def draw_beta(z: np.ndarray, model: ProbitModel, rng: np.random.Generator) -> np.ndarray:
    """beta ~ N_p(proj z, (X^T X)^-1) through the cached Cholesky factor."""
    return model.proj @ z + model.gram_inv_chol @ rng.standard_normal(model.n_coef)


def draw_z(beta: np.ndarray, model: ProbitModel, rng: np.random.Generator) -> np.ndarray:
    """z_i ~ TN(x_i^T beta, 1, y_i) for every observation."""
    return sample_truncated_normals(model.X @ beta, model.y, rng)


def gibbs_step_deterministic(state: ProbitState, model: ProbitModel,
                             rng: np.random.Generator) -> ProbitState:
    """
    One deterministic-scan sweep: the full z-block, then beta.

    Returns:
        New ProbitState with last_updates ('z', 'beta')
    """
    z = draw_z(state.beta, model, rng)
    beta = draw_beta(z, model, rng)
    return state.advanced('z', state.beta, z).advanced('beta', beta, z)


def gibbs_step_random_scan(state: ProbitState, model: ProbitModel,
                           rng: np.random.Generator) -> ProbitState:
    """
    One random-scan step: beta | z with probability p_scan, else z | beta.

    Exactly one block is refreshed; last_updates shifts by one label.
    """
    if rng.random() < model.p_scan:
        return state.advanced('beta', draw_beta(state.z, model, rng), state.z)
    return state.advanced('z', state.beta, draw_z(state.beta, model, rng))


def initial_state(model: ProbitModel, z: np.ndarray) -> ProbitState:
    """Start at (proj z, z) for a sign-consistent latent vector z."""
    z = np.asarray(z, dtype=float)
    return ProbitState(beta=model.proj @ z, z=z)


def log_beta_given_z(beta: np.ndarray, z: np.ndarray, model: ProbitModel) -> float:
    """log N_p(beta; proj z, (X^T X)^-1)."""
    r = beta - model.proj @ z
    return float(
        -0.5 * r @ model.gram @ r - 0.5 * model.n_coef * LOG_2PI + 0.5 * model.log_det_gram
    )


def log_z_given_beta(z: np.ndarray, beta: np.ndarray, model: ProbitModel) -> float:
    """
    log prod_i TN(z_i; x_i^T beta, 1, y_i); -inf when a sign disagrees with y.
    """
    m = model.X @ beta
    positive = model.y == 1
    if np.any((z > 0) != positive):
        return -math.inf
    log_mass = np.where(positive, special.log_ndtr(m), special.log_ndtr(-m))
    return float(np.sum(-0.5 * (z - m) ** 2 - 0.5 * LOG_2PI - log_mass))
