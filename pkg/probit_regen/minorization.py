"""
Distinguished-point minorization of the probit Gibbs sampler and the
regeneration probabilities it yields.

For beta in the box D* = prod [c_j, d_j] and t = X^T (z - z*),

    pi(beta | z) / pi(beta | z*) >= exp(sum_j c_j t_j 1{t_j > 0} + d_j t_j 1{t_j < 0}
                                        - z^T H z / 2 + z*^T H z* / 2)

which gives s(z) = eps exp(log_s_reduced(z)) and Q(beta, z') =
pi(beta | z*) pi(z' | beta) 1_{D*}(beta) / eps. The constant eps cancels
in every regeneration probability and is never computed.
"""

from typing import Optional, Sequence

import numpy as np

from models.probit import MinorizationConfig, ProbitModel, ProbitState
from probit_regen.sampler import (
    draw_z,
    gibbs_step_deterministic,
    initial_state,
    log_beta_given_z,
    log_z_given_beta,
)
from utils.errors import InputError, NumericalError, TuningError
from utils.logger import logger


def _check_dimensions(z: np.ndarray, config: MinorizationConfig, model: ProbitModel) -> None:
    if z.shape != (model.n_obs,) or config.z_star.shape != (model.n_obs,):
        raise InputError(
            f"z and z* must have length n = {model.n_obs}, got {z.shape} and {config.z_star.shape}"
        )
    if config.box.shape[0] != model.n_coef:
        raise InputError(f"box has {config.box.shape[0]} rows, model has p = {model.n_coef}")


def quadratic_hat(z: np.ndarray, model: ProbitModel) -> float:
    """z^T H z through the p-dimensional form (X^T z) . (proj z)."""
    return float((model.X.T @ z) @ (model.proj @ z))


def log_s_reduced(z, config: MinorizationConfig, model: ProbitModel) -> float:
    """
    log(s(z) / eps).

    Args:
        z: Latent vector of length n
        config: Distinguished point and small set
        model: Probit model

    Returns:
        sum_j (c_j t_j 1{t_j > 0} + d_j t_j 1{t_j < 0}) - z^T H z / 2 + z*^T H z* / 2

    Raises:
        InputError: On a dimension mismatch
    """
    z = np.asarray(z, dtype=float).reshape(-1)
    _check_dimensions(z, config, model)
    t = model.X.T @ (z - config.z_star)
    linear = np.sum(np.where(t > 0, config.lower * t, 0.0) + np.where(t < 0, config.upper * t, 0.0))
    return float(linear - 0.5 * quadratic_hat(z, model) + 0.5 * quadratic_hat(config.z_star, model))


def _finite(value: float, what: str, step: Optional[int]) -> float:
    if not np.isfinite(value):
        raise NumericalError(f"{what} evaluated to {value}", step=step)
    return value


def _finish(log_eta: float, clamp: bool, step: Optional[int]) -> float:
    eta = float(np.exp(_finite(log_eta, 'log regeneration probability', step)))
    if eta > 1.0 and clamp:
        logger.warning(f"Regeneration probability {eta:.17g} clamped to 1 (step {step})")
        return 1.0
    return eta


def regen_prob(
    state_i: ProbitState,
    state_i2: ProbitState,
    scan_path: Sequence[str],
    config: MinorizationConfig,
    model: ProbitModel,
    step: Optional[int] = None,
    log_epsilon: float = 0.0,
    clamp: bool = True,
) -> float:
    """
    Probability that a random-scan two-step window ends in a regeneration.

    Only windows whose realized path is (beta-update, z-update) and whose
    endpoint has beta in D* can regenerate. There

        eta = p(1-p) s(z_i) Q(beta_{i+2}, z_{i+2}) / k2(beta_{i+2}, z_{i+2} | beta_i, z_i)

    where k2 is the absolutely continuous part of the two-step kernel,
    p(1-p) [pi(beta'|z) pi(z'|beta') + pi(z'|beta) pi(beta'|z')].

    Args:
        state_i: State at step i
        state_i2: State two steps later
        scan_path: Blocks refreshed at steps i+1 and i+2
        config: Minorization configuration
        model: Probit model
        step: Step index, for error messages and warnings
        log_epsilon: Placeholder log eps inserted into s and Q (cancels)
        clamp: Clamp values above 1 (with a warning)

    Returns:
        eta in [0, 1] (or the raw value when clamp is False)

    Raises:
        NumericalError: If a density is not finite
    """
    p = model.p_scan
    if p * (1.0 - p) == 0.0:
        return 0.0
    if tuple(scan_path) != ('beta', 'z'):
        return 0.0
    beta2, z2 = state_i2.beta, state_i2.z
    if not config.contains(beta2):
        return 0.0
    beta0, z0 = state_i.beta, state_i.z

    log_z2 = _finite(log_z_given_beta(z2, beta2, model), 'pi(z_{i+2} | beta_{i+2})', step)
    log_s = log_s_reduced(z0, config, model) + log_epsilon
    log_q = log_beta_given_z(beta2, config.z_star, model) + log_z2 - log_epsilon
    beta_first = log_beta_given_z(beta2, z0, model) + log_z2
    z_first = log_z_given_beta(z2, beta0, model) + log_beta_given_z(beta2, z2, model)
    log_k2 = _finite(np.logaddexp(beta_first, z_first), 'two-step kernel density', step)
    # p(1-p) appears in both numerator and denominator
    return _finish(log_s + log_q - log_k2, clamp, step)


def regen_prob_deterministic(
    z_prev: np.ndarray,
    beta: np.ndarray,
    config: MinorizationConfig,
    model: ProbitModel,
    step: Optional[int] = None,
    clamp: bool = True,
) -> float:
    """
    Regeneration probability of the one-step beta-then-z kernel started at z_prev.

        eta = s(z_prev) pi(beta | z*) / (eps pi(beta | z_prev)) 1_{D*}(beta)

    (pi(z' | beta) cancels).
    """
    if not config.contains(beta):
        return 0.0
    log_eta = (
        log_s_reduced(z_prev, config, model)
        + log_beta_given_z(beta, config.z_star, model)
        - log_beta_given_z(beta, z_prev, model)
    )
    return _finish(log_eta, clamp, step)


def pilot_tune(model: ProbitModel, iters: int, quantile: float,
               rng: np.random.Generator, burn_in: Optional[int] = None) -> MinorizationConfig:
    """
    Choose z* and D* from a deterministic-scan pilot run.

    Args:
        model: Probit model
        iters: Pilot sweeps (>= 100)
        quantile: Box from the (quantile, 1 - quantile) beta quantiles, in (0, 0.5)
        rng: Random generator
        burn_in: Sweeps discarded first (default iters // 10)

    Returns:
        MinorizationConfig with z* = mean latent draw

    Raises:
        InputError: On out-of-range arguments
        TuningError: If the pilot draws are degenerate
    """
    if iters < 100:
        raise InputError(f"pilot run needs at least 100 iterations, got {iters}")
    if not 0.0 < quantile < 0.5:
        raise InputError(f"quantile must lie in (0, 0.5), got {quantile}")
    burn_in = iters // 10 if burn_in is None else burn_in
    if not 0 <= burn_in < iters:
        raise InputError(f"burn-in {burn_in} must lie in [0, {iters})")

    state = initial_state(model, draw_z(np.zeros(model.n_coef), model, rng))
    betas = np.empty((iters, model.n_coef))
    zs = np.empty((iters, model.n_obs))
    for k in range(iters):
        state = gibbs_step_deterministic(state, model, rng)
        betas[k] = state.beta
        zs[k] = state.z
    betas, zs = betas[burn_in:], zs[burn_in:]

    if np.any(np.ptp(betas, axis=0) == 0.0) or np.any(np.ptp(zs, axis=0) == 0.0):
        raise TuningError('pilot run produced constant draws; cannot place a small set')
    lower = np.quantile(betas, quantile, axis=0)
    upper = np.quantile(betas, 1.0 - quantile, axis=0)
    if np.any(lower >= upper):
        raise TuningError(f"pilot quantiles do not separate: lower {lower}, upper {upper}")

    config = MinorizationConfig(z_star=zs.mean(axis=0), box=np.column_stack([lower, upper]))
    logger.info(
        f"Pilot tuning: {iters} sweeps (burn-in {burn_in}), box "
        + ', '.join(f"[{c:.4g}, {d:.4g}]" for c, d in config.box)
    )
    return config
