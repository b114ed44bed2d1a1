"""
Data models for the probit data-augmentation Gibbs sampler.

ProbitModel caches every matrix the sampler and the regeneration
probabilities need: the Gram matrix X^T X, its inverse, the hat matrix
H = X (X^T X)^{-1} X^T and the projection (X^T X)^{-1} X^T.
"""

from typing import Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import linalg

from utils.errors import InputError, RankDeficiencyError

BlockLabel = Literal['beta', 'z']


class ProbitModel(BaseModel):
    """Design, responses and scan probability of a probit regression.

    Build instances with `ProbitModel.from_design`, which computes the cached
    matrices and rejects rank-deficient designs.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    X: np.ndarray
    y: np.ndarray
    p_scan: float = Field(0.5, ge=0.0, le=1.0)
    gram: np.ndarray
    gram_inv: np.ndarray
    gram_inv_chol: np.ndarray
    proj: np.ndarray
    hat: np.ndarray
    log_det_gram: float

    @field_validator('y', mode='before')
    @classmethod
    def validate_responses(cls, v):
        """Responses must be 0/1."""
        arr = np.asarray(v).reshape(-1)
        if not np.isin(arr, (0, 1)).all():
            raise ValueError('responses y must be binary (0/1)')
        return arr.astype(np.int8)

    @model_validator(mode='after')
    def validate_hat_matrix(self):
        """H must be idempotent and reproduce the columns of X."""
        if self.X.shape[0] != self.y.shape[0]:
            raise ValueError(
                f"X has {self.X.shape[0]} rows but y has {self.y.shape[0]} entries"
            )
        if np.linalg.norm(self.hat @ self.hat - self.hat) >= 1e-8:
            raise ValueError('hat matrix is not idempotent')
        return self

    @classmethod
    def from_design(cls, X, y, p_scan: float = 0.5) -> 'ProbitModel':
        """
        Build a model from a design matrix and binary responses.

        Args:
            X: n x p design matrix
            y: length-n binary responses
            p_scan: probability that a random-scan step updates beta

        Returns:
            ProbitModel with cached linear algebra

        Raises:
            InputError: If shapes are inconsistent
            RankDeficiencyError: If X is not of full column rank
        """
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2 or X.shape[0] < X.shape[1]:
            raise InputError(f"design matrix must be n x p with n >= p, got shape {X.shape}")
        if np.linalg.matrix_rank(X) < X.shape[1]:
            raise RankDeficiencyError(
                f"design matrix of shape {X.shape} is not of full column rank"
            )

        gram = X.T @ X
        try:
            gram_chol = linalg.cholesky(gram, lower=True)
        except linalg.LinAlgError as e:
            raise RankDeficiencyError(f"Cholesky factorization of X^T X failed: {e}")
        gram_inv = linalg.cho_solve((gram_chol, True), np.eye(X.shape[1]))
        gram_inv = 0.5 * (gram_inv + gram_inv.T)
        try:
            gram_inv_chol = linalg.cholesky(gram_inv, lower=True)
        except linalg.LinAlgError as e:
            raise RankDeficiencyError(f"Cholesky factorization of (X^T X)^-1 failed: {e}")
        proj = gram_inv @ X.T

        return cls(
            X=X,
            y=y,
            p_scan=p_scan,
            gram=gram,
            gram_inv=gram_inv,
            gram_inv_chol=gram_inv_chol,
            proj=proj,
            hat=X @ proj,
            log_det_gram=float(2.0 * np.log(np.diag(gram_chol)).sum()),
        )

    def with_scan_probability(self, p_scan: float) -> 'ProbitModel':
        """Copy of the model with a different scan probability."""
        return self.model_copy(update={'p_scan': p_scan})

    @property
    def n_obs(self) -> int:
        return int(self.X.shape[0])

    @property
    def n_coef(self) -> int:
        return int(self.X.shape[1])


class MinorizationConfig(BaseModel):
    """Distinguished point z* and rectangular small set D* = prod [c_j, d_j]."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    z_star: np.ndarray
    box: np.ndarray

    @field_validator('z_star', mode='before')
    @classmethod
    def coerce_z_star(cls, v):
        return np.asarray(v, dtype=float).reshape(-1)

    @field_validator('box', mode='before')
    @classmethod
    def validate_box(cls, v):
        """Box is a (p, 2) array of (c_j, d_j) pairs with c_j < d_j."""
        arr = np.atleast_2d(np.asarray(v, dtype=float))
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError(f'box must have shape (p, 2), got {arr.shape}')
        if not (arr[:, 0] < arr[:, 1]).all():
            raise ValueError('box bounds must satisfy c_j < d_j')
        return arr

    @property
    def lower(self) -> np.ndarray:
        return self.box[:, 0]

    @property
    def upper(self) -> np.ndarray:
        return self.box[:, 1]

    def contains(self, beta: np.ndarray) -> bool:
        """Indicator of beta in D*."""
        return bool(np.all((beta >= self.lower) & (beta <= self.upper)))


class ProbitState(BaseModel):
    """Sampler state (beta, z) and the blocks refreshed by the last two steps."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    beta: np.ndarray
    z: np.ndarray
    last_updates: Tuple[BlockLabel, ...] = ()

    @field_validator('beta', 'z', mode='before')
    @classmethod
    def coerce_vector(cls, v):
        return np.asarray(v, dtype=float).reshape(-1)

    @field_validator('last_updates')
    @classmethod
    def keep_two(cls, v):
        return tuple(v[-2:])

    def is_consistent(self, model: ProbitModel) -> bool:
        """sign(z_i) agrees with y_i: z_i > 0 iff y_i = 1."""
        return bool(np.all((self.z > 0) == (model.y == 1)))

    def advanced(self, block: BlockLabel, beta: np.ndarray, z: np.ndarray) -> 'ProbitState':
        """New state after refreshing `block`; skips validation on the hot path."""
        return ProbitState.model_construct(
            beta=beta, z=z, last_updates=(self.last_updates + (block,))[-2:]
        )


class RegenProbRecord(BaseModel):
    """Regeneration probability at step i with its Bernoulli draw."""

    step: int = Field(..., ge=0)
    eta: float = Field(..., ge=0.0, le=1.0)
    uniform: float = Field(..., ge=0.0, lt=1.0)
    bell: int

    @model_validator(mode='after')
    def validate_bell(self):
        """The bell is exactly the outcome of the recorded Bernoulli draw."""
        if self.bell != int(self.uniform < self.eta):
            raise ValueError(
                f"bell {self.bell} disagrees with draw u = {self.uniform} against eta = {self.eta}"
            )
        return self
