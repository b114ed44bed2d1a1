"""
Data models for covariance estimates, batch schedules and SIP rates.
"""

from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class BatchSchedule(BaseModel):
    """Batch-size rule b_n for the batch-means estimator.

    Exactly one of the following must be specified:
    1. nu: power schedule b_n = floor(n ** nu)
    2. sizes: explicit sequence, b_n = sizes[n - 1]
    3. batch_size: one fixed b used as-is (a single evaluation, not a schedule)
    """

    nu: Optional[float] = Field(None, ge=0.0)
    sizes: Optional[List[int]] = None
    batch_size: Optional[int] = Field(None, ge=1)

    @field_validator('sizes')
    @classmethod
    def validate_sizes(cls, v):
        if v is not None:
            if not v:
                raise ValueError('sizes must not be empty')
            if min(v) < 1:
                raise ValueError('batch sizes must be >= 1')
        return v

    @model_validator(mode='after')
    def validate_single_rule(self):
        """Ensure exactly one batch-size rule is specified."""
        given = [name for name in ('nu', 'sizes', 'batch_size') if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(
                f"Exactly one of 'nu', 'sizes' or 'batch_size' must be specified (got {given or 'none'})"
            )
        return self

    def batch_size_for(self, n: int) -> int:
        """Batch size b_n for a chain of length n."""
        if self.batch_size is not None:
            return self.batch_size
        if self.nu is not None:
            return max(1, int(np.floor(n ** self.nu)))
        if n > len(self.sizes):
            raise ValueError(
                f"Explicit schedule has {len(self.sizes)} entries, cannot size n = {n}"
            )
        return self.sizes[n - 1]

    def describe(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True)


class ScheduleCheck(BaseModel):
    """Outcome of checking the batch-size assumption for a schedule."""

    passed: bool
    part_a: bool
    part_b: bool
    c: Optional[float] = None
    reasons: List[str] = Field(default_factory=list)


class CovEstimate(BaseModel):
    """Estimate of the asymptotic covariance Sigma_f with its provenance."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray
    kind: Literal['batch-means', 'regenerative']
    n: int = Field(..., ge=1)
    tuning: Dict[str, Any] = Field(default_factory=dict)

    @field_validator('matrix', mode='before')
    @classmethod
    def coerce_matrix(cls, v):
        arr = np.atleast_2d(np.asarray(v, dtype=float))
        if arr.shape[0] != arr.shape[1]:
            raise ValueError(f'covariance matrix must be square, got {arr.shape}')
        return arr

    @model_validator(mode='after')
    def validate_symmetric(self):
        scale = max(1.0, float(np.abs(self.matrix).max(initial=0.0)))
        if not np.allclose(self.matrix, self.matrix.T, rtol=0.0, atol=1e-10 * scale):
            raise ValueError('covariance matrix must be symmetric')
        return self

    @property
    def d(self) -> int:
        return int(self.matrix.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready form: {kind, n, d, tuning, matrix (row-major)}."""
        return {
            'kind': self.kind,
            'n': self.n,
            'd': self.d,
            'tuning': self.tuning,
            'matrix': self.matrix.tolist(),
        }


class RateReport(BaseModel):
    """SIP rate exponents and the implied batch-size exponent bound."""

    delta: float = Field(..., gt=0.0)
    p: Optional[float] = Field(None, gt=1.0)
    geometric: bool = False
    beta_thm1: Optional[float] = None
    beta_thm3: float
    nu_lower: float
    beta: float

    @model_validator(mode='after')
    def validate_ranges(self):
        for name in ('beta_thm1', 'beta_thm3', 'nu_lower', 'beta'):
            value = getattr(self, name)
            if value is not None and not 0.0 < value < 1.0:
                raise ValueError(f'{name} = {value} outside (0, 1)')
        return self
