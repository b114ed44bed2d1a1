"""
Strong invariance principle rate exponents.

Under a 2 + delta moment on f and a p-th moment on tour lengths the SIP
holds with

    beta_thm1 = max(1/(2 + delta), 1/(2p), 1/4)

and for geometrically ergodic chains with

    beta_thm3 = max(1/(2 + delta), 1/4).

Batch means with b_n = floor(n^nu) is strongly consistent for
nu > nu_lower = max(2/(2 + delta), 1/2) = 2 beta_thm3.
"""

import math
import numbers
from typing import Optional

from models.estimate import RateReport
from utils.errors import InputError


def _is_real(value) -> bool:
    """Real scalar, numpy scalars included; booleans are not moments."""
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def sip_rate_exponent(delta: float, p: Optional[float] = None, geometric: bool = False) -> RateReport:
    """
    Compute the SIP rate exponents and the batch-size lower bound.

    Args:
        delta: Moment excess, > 0
        p: Tour-length moment, > 1 (may be omitted when geometric)
        geometric: Report beta from the geometrically ergodic bound

    Returns:
        RateReport; `beta` is beta_thm3 when geometric else beta_thm1

    Raises:
        InputError: If delta <= 0, p <= 1, or p is missing for a non-geometric chain
    """
    if not (_is_real(delta) and math.isfinite(delta) and delta > 0):
        raise InputError(f"delta must be a positive real, got {delta!r}")
    if p is not None and not (_is_real(p) and math.isfinite(p) and p > 1):
        raise InputError(f"p must be a real > 1, got {p!r}")
    delta = float(delta)
    p = float(p) if p is not None else None
    if p is None and not geometric:
        raise InputError('p is required unless the chain is geometrically ergodic')

    moment = 1.0 / (2.0 + delta)
    beta_thm3 = max(moment, 0.25)
    beta_thm1 = max(moment, 1.0 / (2.0 * p), 0.25) if p is not None else None
    return RateReport(
        delta=delta,
        p=p,
        geometric=geometric,
        beta_thm1=beta_thm1,
        beta_thm3=beta_thm3,
        nu_lower=max(2.0 / (2.0 + delta), 0.5),
        beta=beta_thm3 if geometric else beta_thm1,
    )
