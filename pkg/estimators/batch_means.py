"""
Batch-means estimation of Sigma_f and checks on the batch-size schedule.

    Sigma_BM = b_n / (a_n - 1) * sum_k (fbar_k - fhat_n)(fbar_k - fhat_n)^T

with a_n = floor(n / b_n) full batches; a trailing partial batch is dropped
and fhat_n is the mean of the a_n * b_n retained samples.
"""

from typing import List, Optional, Tuple

import numpy as np

from models.estimate import BatchSchedule, CovEstimate, RateReport, ScheduleCheck
from utils.errors import InputError
from utils.logger import format_matrix, logger

# Largest exponent c tried when searching for a summability witness.
MAX_WITNESS_C = 20


def as_samples(samples) -> np.ndarray:
    """Coerce a sample sequence to a float array of shape (n, d)."""
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[1] < 1:
        raise InputError(f"samples must have shape (n,) or (n, d), got {x.shape}")
    return x


def batch_means(samples, schedule: BatchSchedule) -> CovEstimate:
    """
    Batch-means estimate of the asymptotic covariance.

    Args:
        samples: Sequence of n values in R^d, shape (n,) or (n, d)
        schedule: Batch-size rule

    Returns:
        CovEstimate of kind 'batch-means'

    Raises:
        InputError: If fewer than two full batches fit into the samples
    """
    x = as_samples(samples)
    n, d = x.shape
    b = schedule.batch_size_for(n)
    a = n // b
    if a < 2:
        raise InputError(f"batch means needs at least 2 batches: n = {n}, b_n = {b}")

    means = x[:a * b].reshape(a, b, d).mean(axis=1)
    centered = means - means.mean(axis=0)
    sigma = (b / (a - 1)) * (centered.T @ centered)
    sigma = 0.5 * (sigma + sigma.T)

    logger.debug(f"Batch means: n={n}, b={b}, a={a}, sigma={format_matrix(sigma)}")
    return CovEstimate(
        matrix=sigma,
        kind='batch-means',
        n=n,
        tuning={**schedule.describe(), 'batch_size': b, 'batches': a},
    )


def _summability_slope(sizes: np.ndarray, c: int) -> float:
    """Log-log slope of the terms (b_n / n)^c over the second half of the sequence."""
    n = np.arange(1, sizes.size + 1, dtype=float)
    half = sizes.size // 2
    log_n = np.log(n[half:])
    log_terms = c * (np.log(sizes[half:]) - log_n)
    return float(np.polyfit(log_n, log_terms, 1)[0])


def check_batch_schedule(schedule: BatchSchedule) -> ScheduleCheck:
    """
    Check that a schedule satisfies the batch-size assumption.

    (a) b_n and n / b_n increase to infinity;
    (b) sum_n (b_n / n)^c < infinity for some c >= 1.

    For b_n = floor(n^nu), (a) holds iff 0 < nu < 1 and (b) holds with the
    smallest integer c > 1 / (1 - nu). Explicit sequences are tested
    numerically: monotonicity for (a), and for (b) the terms must decay
    faster than 1/n on a log-log fit over the second half of the sequence.

    Returns:
        ScheduleCheck; never raises for a well-formed schedule
    """
    reasons: List[str] = []

    if schedule.nu is not None:
        nu = schedule.nu
        part_a = 0.0 < nu < 1.0
        if nu <= 0.0:
            reasons.append(f"nu = {nu}: b_n = floor(n^nu) does not increase to infinity")
        elif nu >= 1.0:
            reasons.append(f"nu = {nu}: n / b_n does not increase to infinity")
        c: Optional[float] = None
        if nu < 1.0:
            c = float(np.floor(1.0 / (1.0 - nu)) + 1.0)
            part_b = True
        else:
            part_b = False
            reasons.append(f"nu = {nu}: (b_n / n)^c is not summable for any c")
        return ScheduleCheck(passed=part_a and part_b, part_a=part_a, part_b=part_b,
                             c=c, reasons=reasons)

    if schedule.batch_size is not None:
        reasons.append(f"fixed batch size b = {schedule.batch_size} does not increase to infinity")
        return ScheduleCheck(passed=False, part_a=False, part_b=True, c=2.0, reasons=reasons)

    sizes = np.asarray(schedule.sizes, dtype=float)
    if sizes.size < 16:
        reasons.append(f"explicit schedule of {sizes.size} entries is too short to test")
        return ScheduleCheck(passed=False, part_a=False, part_b=False, reasons=reasons)

    n = np.arange(1, sizes.size + 1, dtype=float)
    ratio = n / sizes
    part_a = True
    if np.any(np.diff(sizes) < 0) or sizes[-1] <= sizes[0]:
        part_a = False
        reasons.append('b_n is not non-decreasing and growing')
    # floor() makes n / b_n jitter, so only overall growth is required
    if ratio[-1] <= ratio[0]:
        part_a = False
        reasons.append('n / b_n does not grow over the sequence')

    c = None
    for candidate in range(1, MAX_WITNESS_C + 1):
        if _summability_slope(sizes, candidate) < -1.0 - 1e-3:
            c = float(candidate)
            break
    part_b = c is not None
    if not part_b:
        reasons.append(f"no c <= {MAX_WITNESS_C} makes (b_n / n)^c decay faster than 1/n")
    return ScheduleCheck(passed=part_a and part_b, part_a=part_a, part_b=part_b,
                         c=c, reasons=reasons)


def check_batch_consistency(schedule: BatchSchedule, rates: RateReport) -> Tuple[bool, Optional[List[str]]]:
    """
    Check the strong-consistency condition b_n^{-1} log(n) kappa(n)^2 -> 0
    with kappa(n) = n^beta log n.

    For b_n = floor(n^nu) this holds iff nu > 2 beta.

    Returns:
        Tuple of (holds, reasons); reasons is None when the condition holds
    """
    if schedule.nu is None:
        return False, ['consistency condition is only decidable for power schedules b_n = floor(n^nu)']
    bound = 2.0 * rates.beta
    if schedule.nu > bound:
        return True, None
    return False, [f"nu = {schedule.nu} must exceed 2 beta = {bound}"]


def standard_errors(estimate: CovEstimate, n: Optional[int] = None) -> np.ndarray:
    """Monte Carlo standard errors sqrt(diag(Sigma) / n) of the ergodic mean."""
    n = estimate.n if n is None else n
    return np.sqrt(np.clip(np.diag(estimate.matrix), 0.0, None) / n)
