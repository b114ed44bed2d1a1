"""
Data models for experiment configurations of the four CLI commands.

Each command gets its own pydantic model. Values arrive merged from .env
defaults, an optional JSON/YAML config file and command-line flags (see
config/loader.py); the seed is always mandatory.
"""

from typing import Literal, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from models.chain import ChainSpec
from utils.errors import ConfigError

FixtureKind = Literal['two-state', 'ar1']


class ExperimentConfig(BaseModel):
    """Fields shared by every command."""

    model_config = {'extra': 'forbid'}

    seed: int = Field(..., ge=0, lt=2 ** 64)
    output_dir: str = Field('.', min_length=1)

    @field_validator('seed', mode='before')
    @classmethod
    def validate_seed(cls, v):
        """Reject floats and booleans masquerading as seeds."""
        if isinstance(v, bool) or (isinstance(v, float) and not v.is_integer()):
            raise ValueError(f'seed must be an integer, got {v!r}')
        return v


class FixtureConfig(ExperimentConfig):
    """Parameters of an analytic-oracle fixture chain."""

    fixture: FixtureKind = 'two-state'
    a: float = Field(0.2, ge=0.0, le=1.0)
    b: float = Field(0.3, ge=0.0, le=1.0)
    lag: int = Field(1, ge=1)
    h_scale: float = Field(1.0, ge=0.0, le=1.0)
    rho: float = Field(0.5, gt=-1.0, lt=1.0)
    noise_sd: float = Field(1.0, gt=0.0)
    small_set: float = Field(1.0, gt=0.0)

    @model_validator(mode='after')
    def validate_fixture(self):
        """Reject fixtures ChainSpec cannot build, before any command runs."""
        if self.fixture == 'two-state' and self.a + self.b == 0.0:
            raise ValueError('two-state fixture with a = b = 0 is reducible')
        if self.fixture == 'ar1' and self.lag != 1:
            raise ValueError(f'ar1 fixture supports only lag = 1, got lag = {self.lag}')
        return self

    def to_chain_spec(self) -> ChainSpec:
        """
        Build the ChainSpec described by this config.

        Raises:
            ConfigError: If the fixture parameters do not describe a valid chain
        """
        try:
            if self.fixture == 'two-state':
                return ChainSpec(kind='two-state', a=self.a, b=self.b,
                                 lag=self.lag, h_scale=self.h_scale)
            return ChainSpec(kind='ar1', rho=self.rho, noise_sd=self.noise_sd,
                             small_set=self.small_set, lag=self.lag, h_scale=self.h_scale)
        except ValidationError as e:
            raise ConfigError(f"Invalid fixture '{self.fixture}':\n{e}") from e


class SimulateConfig(FixtureConfig):
    """Configuration of `simulate`."""

    n: int = Field(1_000_000, ge=1)

    @model_validator(mode='after')
    def validate_length(self):
        if self.n < self.lag:
            raise ValueError(f'n = {self.n} is shorter than the minorization lag {self.lag}')
        return self


class EstimateConfig(ExperimentConfig):
    """Configuration of `estimate`."""

    tours: Optional[str] = None
    trace: Optional[str] = None
    lag: int = Field(1, ge=1)
    nu: float = Field(0.6, ge=0.0)
    delta: Optional[float] = Field(None, gt=0.0)
    p: Optional[float] = Field(None, gt=1.0)
    geometric: bool = False
    psd: bool = False
    centering: Literal['ratio', 'tour-mean'] = 'ratio'
    matrix_csv: bool = False

    @model_validator(mode='after')
    def validate_inputs(self):
        """At least one input file; a rate request needs p unless geometric."""
        if self.tours is None and self.trace is None:
            raise ValueError("estimate requires 'tours' or 'trace' (or both)")
        if self.delta is not None and self.p is None and not self.geometric:
            raise ValueError("'p' is required with 'delta' unless 'geometric' is set")
        return self


class ProbitRegenConfig(ExperimentConfig):
    """Configuration of `probit-regen`. `design` None selects the bundled dataset."""

    design: Optional[str] = None
    p_scan: float = Field(0.5, ge=0.0, le=1.0)
    steps: int = Field(100_000, ge=1_000)
    pilot_iters: int = Field(10_000, ge=100)
    quantile: float = Field(0.25, gt=0.0, lt=0.5)
    scan: Literal['random', 'deterministic'] = 'random'


class DiagnoseConfig(FixtureConfig):
    """Configuration of `diagnose`: a fixture, or tours/trace files."""

    tours: Optional[str] = None
    trace: Optional[str] = None
    n: int = Field(1_000_000, ge=1)
    replications: int = Field(500, ge=1)
    clt_n: int = Field(100_000, ge=1)
    workers: int = Field(1, ge=1)
    l_invariance: bool = True

    @property
    def uses_files(self) -> bool:
        return self.tours is not None or self.trace is not None
