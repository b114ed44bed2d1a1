"""
Data models for split chains and regenerative tours.

A SplitChainTrace is the augmented chain {(X_t, delta_t)}: realized states,
regeneration bells and the provenance of every state. Tours are the blocks
between consecutive bells; a TourSequence stores them column-wise so that
millions of tours stay cheap.
"""

from typing import Any, Iterator, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ChainSpec(BaseModel):
    """Configuration of a chain to simulate.

    Supports three kinds:
    1. two-state: P = [[1-a, a], [b, 1-b]] with an exact l-step split
    2. ar1: X' = rho X + noise_sd N(0, 1) with a 1-step small-set split
    3. generic: a user kernel object implementing the SplitKernel interface
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: Literal['two-state', 'ar1', 'generic']
    a: Optional[float] = Field(None, ge=0.0, le=1.0)
    b: Optional[float] = Field(None, ge=0.0, le=1.0)
    rho: Optional[float] = Field(None, gt=-1.0, lt=1.0)
    noise_sd: Optional[float] = Field(None, gt=0.0)
    small_set: float = Field(1.0, gt=0.0)
    lag: int = Field(1, ge=1)
    h_scale: float = Field(1.0, ge=0.0, le=1.0)
    kernel: Optional[Any] = None

    @model_validator(mode='after')
    def validate_kind_parameters(self):
        """Ensure the parameters required by each chain kind are present."""
        if self.kind == 'two-state':
            if self.a is None or self.b is None:
                raise ValueError("two-state chain requires both 'a' and 'b'")
            if self.a + self.b == 0.0:
                raise ValueError("two-state chain with a = b = 0 is reducible")
        elif self.kind == 'ar1':
            if self.rho is None or self.noise_sd is None:
                raise ValueError("ar1 chain requires both 'rho' and 'noise_sd'")
            if self.lag != 1:
                raise ValueError("ar1 chain supports only a 1-step minorization (lag = 1)")
        elif self.kind == 'generic':
            if self.kernel is None or not hasattr(self.kernel, 'advance'):
                raise ValueError("generic chain requires a kernel implementing advance()")
        return self

    @property
    def dim(self) -> int:
        """Dimension of the state vector."""
        if self.kind == 'generic':
            return int(getattr(self.kernel, 'dim', 1))
        return 1


class SplitChainTrace(BaseModel):
    """Realized split chain: states X_1..X_n, bells delta_1..delta_n.

    `from_q[t]` records that state t was drawn from the minorization measure
    Q; it must agree with the bells: a bell at t forces a Q-draw at t + lag.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    states: np.ndarray
    bells: np.ndarray
    from_q: np.ndarray
    lag: int = Field(..., ge=1)
    seed: int

    @field_validator('states', mode='before')
    @classmethod
    def coerce_states(cls, v):
        """Store states as a 2-D float array of shape (n, d)."""
        arr = np.asarray(v, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise ValueError('states must be a 1-D or 2-D array')
        return arr

    @field_validator('bells', mode='before')
    @classmethod
    def coerce_bells(cls, v):
        """Store bells as int8 and reject anything but 0/1."""
        arr = np.asarray(v)
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError('bells must be binary')
        return arr.astype(np.int8).reshape(-1)

    @field_validator('from_q', mode='before')
    @classmethod
    def coerce_from_q(cls, v):
        return np.asarray(v, dtype=bool).reshape(-1)

    @model_validator(mode='after')
    def validate_alignment(self):
        """Lengths agree and every bell is followed by a Q-draw lag steps later."""
        n = self.states.shape[0]
        if self.bells.shape[0] != n or self.from_q.shape[0] != n:
            raise ValueError(
                f"states, bells and from_q must have equal length "
                f"({n}, {self.bells.shape[0]}, {self.from_q.shape[0]})"
            )
        bell_idx = np.flatnonzero(self.bells)
        targets = bell_idx[bell_idx + self.lag < n] + self.lag
        if not self.from_q[targets].all():
            raise ValueError('a bell is not followed by a Q-drawn state')
        return self

    @property
    def n(self) -> int:
        return int(self.states.shape[0])

    @property
    def dim(self) -> int:
        return int(self.states.shape[1])

    @property
    def regeneration_times(self) -> np.ndarray:
        """1-based times T_1 < T_2 < ... at which delta_t = 1."""
        return np.flatnonzero(self.bells) + 1


class Tour(BaseModel):
    """One regenerative block: Z = sum of f over the tour, tau = its length."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    z: np.ndarray
    tau: int = Field(..., ge=1)

    @field_validator('z', mode='before')
    @classmethod
    def coerce_z(cls, v):
        arr = np.atleast_1d(np.asarray(v, dtype=float))
        if not np.isfinite(arr).all():
            raise ValueError('tour sum must be finite')
        return arr


class TourSequence(BaseModel):
    """Ordered tours stored column-wise.

    `residual_len` counts samples after the last regeneration; `leading_len`
    counts samples before the first tour when the chain did not start from Q.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    z: np.ndarray
    tau: np.ndarray
    residual_len: int = Field(0, ge=0)
    leading_len: int = Field(0, ge=0)

    @field_validator('z', mode='before')
    @classmethod
    def coerce_z(cls, v):
        arr = np.asarray(v, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise ValueError('z must have shape (R, d)')
        return arr

    @field_validator('tau', mode='before')
    @classmethod
    def coerce_tau(cls, v):
        arr = np.asarray(v, dtype=np.int64).reshape(-1)
        if arr.size and arr.min() < 1:
            raise ValueError('tour lengths must be >= 1')
        return arr

    @model_validator(mode='after')
    def validate_shapes(self):
        if self.z.shape[0] != self.tau.shape[0]:
            raise ValueError(
                f"z has {self.z.shape[0]} rows but tau has {self.tau.shape[0]} entries"
            )
        if not np.isfinite(self.z).all():
            raise ValueError('tour sums must be finite')
        return self

    def __len__(self) -> int:
        return int(self.tau.shape[0])

    def iter_tours(self) -> Iterator[Tour]:
        """Yield tours one at a time as Tour objects."""
        for z, tau in zip(self.z, self.tau):
            yield Tour(z=z, tau=int(tau))

    @property
    def dim(self) -> int:
        return int(self.z.shape[1])

    @property
    def total_length(self) -> int:
        """T_R: number of samples covered by complete tours."""
        return int(self.tau.sum())
