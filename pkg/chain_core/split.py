"""
Split-chain simulation.
"""

from typing import Optional

import numpy as np
from pydantic import ValidationError

from chain_core.kernels import HFunction, build_kernel
from models.chain import ChainSpec, SplitChainTrace
from utils.errors import InputError
from utils.logger import logger
from utils.rng import make_rng


def run_split_chain(
    spec: ChainSpec,
    n: int,
    seed: int,
    h: Optional[HFunction] = None,
    q: Optional[np.ndarray] = None,
    lag: Optional[int] = None,
) -> SplitChainTrace:
    """
    Simulate n states of the split chain {(X_t, delta_t)}.

    X_1 is drawn from Q (T_0 = 0). Bells are drawn on the l-skeleton grid
    t = 1, 1 + l, 1 + 2l, ...; a bell at t sends X_{t+l} to Q.

    Args:
        spec: Chain configuration
        n: Number of states
        seed: Integer seed; stored on the trace
        h: Optional minorization function replacing the fixture's own
        q: Optional minorization measure (two-state chains only)
        lag: Optional minorization lag overriding spec.lag

    Returns:
        SplitChainTrace of length n

    Raises:
        InputError: If n < l or the arguments are inconsistent
        MinorizationError: If h leaves [0, 1] or h Q exceeds P^l
    """
    if lag is not None and lag != spec.lag:
        try:
            spec = ChainSpec(**{**spec.model_dump(), 'kernel': spec.kernel, 'lag': lag})
        except ValidationError as e:
            raise InputError(f"lag = {lag} is not valid for a {spec.kind} chain: {e}") from e
    kernel = build_kernel(spec, h=h, q=q)
    if lag is not None and lag != kernel.lag:
        raise InputError(f"lag = {lag} requested but the {spec.kind} kernel runs with lag {kernel.lag}")
    lag = kernel.lag
    if n < lag:
        raise InputError(f"chain length n = {n} is shorter than the minorization lag l = {lag}")

    logger.info(f"Running {spec.kind} split chain: n={n}, l={lag}, seed={seed}")
    states, bells, from_q = kernel.run(n, make_rng(seed))
    trace = SplitChainTrace(states=states, bells=bells, from_q=from_q, lag=lag, seed=seed)
    logger.info(
        f"Split chain finished: {int(trace.bells.sum())} bells "
        f"(rate {trace.bells.mean():.4f})"
    )
    return trace
