"""
Tour extraction and regeneration counting.

Tour k covers X_{T_{k-1}+1}, ..., X_{T_k}, where T_1 < T_2 < ... are the
bell times and T_0 = 0. Samples after the last bell form the residual
block and are never turned into a tour.
"""

from typing import Callable, Optional

import numpy as np

from models.chain import SplitChainTrace, TourSequence
from utils.errors import InputError
from utils.logger import logger

StateFunction = Callable[[np.ndarray], np.ndarray]


def apply_f(states: np.ndarray, f: Optional[StateFunction] = None) -> np.ndarray:
    """Evaluate f on the (n, d) state array at once; returns shape (n, k)."""
    if f is None:
        return states
    values = np.asarray(f(states), dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if values.shape[0] != states.shape[0]:
        raise InputError(
            f"f returned {values.shape[0]} rows for {states.shape[0]} states"
        )
    return values


def extract_tours(
    trace: SplitChainTrace,
    f: Optional[StateFunction] = None,
    drop_leading: bool = False,
) -> TourSequence:
    """
    Cut a trace into tours (Z_k, tau_k).

    Args:
        trace: Split-chain trace
        f: Vectorized function of the (n, d) states; identity when omitted
        drop_leading: Report the block up to the first bell as `leading_len`
            instead of a tour (for chains not started from Q)

    Returns:
        TourSequence with residual_len = samples after the last bell

    Raises:
        InputError: If the trace is empty
    """
    if trace.n == 0:
        raise InputError('cannot extract tours from an empty trace')
    values = apply_f(trace.states, f)
    n, k = values.shape

    ends = np.flatnonzero(trace.bells) + 1
    if ends.size == 0:
        logger.warning(f"No regenerations in trace of length {n}; tour sequence is empty")
        return TourSequence(z=np.zeros((0, k)), tau=np.zeros(0, dtype=np.int64),
                            residual_len=n)

    boundaries = np.concatenate(([0], ends))
    if boundaries[-1] == n:
        boundaries = boundaries[:-1]
    sums = np.add.reduceat(values, boundaries, axis=0)[:ends.size]
    tau = np.diff(np.concatenate(([0], ends)))
    residual = int(n - ends[-1])

    leading = 0
    if drop_leading:
        leading = int(tau[0])
        sums, tau = sums[1:], tau[1:]

    tours = TourSequence(z=sums, tau=tau, residual_len=residual, leading_len=leading)
    logger.debug(f"Extracted {len(tours)} tours, residual {residual}, leading {leading}")
    return tours


def count_regenerations(trace: SplitChainTrace, n: int) -> int:
    """
    xi(n) = sup{k : T_k <= n}, the number of bells among the first n states.

    Raises:
        InputError: If n < 0 or n exceeds the trace length
    """
    if n < 0:
        raise InputError(f"n must be non-negative, got {n}")
    if n > trace.n:
        raise InputError(f"n = {n} exceeds the trace length {trace.n}")
    return int(trace.bells[:n].sum())


def regeneration_counts(trace: SplitChainTrace) -> np.ndarray:
    """xi(n) for n = 1..len(trace) in one pass."""
    return np.cumsum(trace.bells, dtype=np.int64)
