"""
Infrastructure configuration - Centralized configuration management.

Settings come from CONIC_SPLIT_* environment variables (nested sections
use "__", e.g. CONIC_SPLIT_SOLVER__MU=0.5) and an optional .env file.
Command-line flags override these values, except CONIC_SPLIT_THREADS which
overrides --threads.
"""
from functools import lru_cache
from typing import Literal, Optional

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from conic_split.domain.value_objects import ConditioningPolicy, Schedule, SolveOptions


class SolverConfig(BaseModel):
    """Iteration defaults shared by every method."""
    mu: float = Field(default=1.0, gt=0.0)
    max_iters: int = Field(default=100_000, ge=1)
    tol_primal: float = Field(default=1e-8, gt=0.0)
    tol_dual: float = Field(default=1e-8, gt=0.0)
    tol_gap: float = Field(default=1e-8, gt=0.0)
    trace_stride: int = Field(default=1, ge=1)
    check_every: int = Field(default=1, ge=1)
    divergence_norm: float = Field(default=1e12, gt=0.0)
    max_seconds: Optional[float] = Field(default=None, gt=0.0)

    def to_options(self, **overrides) -> SolveOptions:
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return SolveOptions(**values)


class ConditioningConfig(BaseModel):
    """Adaptive conditioning presets."""
    lp_t: float = Field(default=9.2, gt=0.0)
    lp_start: int = Field(default=300, ge=1)
    lp_stride: int = Field(default=100, ge=1)
    socp_t: float = Field(default=1.7, gt=0.0)
    socp_start: int = Field(default=200, ge=1)
    socp_stride: int = Field(default=100, ge=1)
    clamp_lo: float = Field(default=1e-8, gt=0.0)
    clamp_hi: float = Field(default=1e8, gt=0.0)

    def preset(self, orthant: bool) -> ConditioningPolicy:
        """LP preset for pure orthant cones, SOCP preset otherwise."""
        if orthant:
            schedule, t = Schedule(start=self.lp_start, stride=self.lp_stride), self.lp_t
        else:
            schedule, t = Schedule(start=self.socp_start, stride=self.socp_stride), self.socp_t
        return ConditioningPolicy(schedule=schedule, t=t, clamp_lo=self.clamp_lo, clamp_hi=self.clamp_hi)


class SinkhornConfig(BaseModel):
    """Regularized Sinkhorn-Knopp equilibration."""
    iterations: int = Field(default=100, ge=1)
    damping: float = Field(default=0.9, gt=0.0, le=1.0)
    tolerance: float = Field(default=1e-6, gt=0.0)


class SubspaceConfig(BaseModel):
    """Factorization settings."""
    rank_tol: float = Field(default=1e-10, gt=0.0)


class LoggingConfig(BaseModel):
    """Logging configuration."""
    level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(default="INFO")
    use_json: bool = Field(default=False, description="Emit JSON lines instead of plain text")
    log_file: Optional[str] = Field(default=None)


class AppSettings(BaseSettings):
    """
    Main application settings.

    Loads configuration from environment variables with validation.
    """
    model_config = SettingsConfigDict(
        env_prefix="CONIC_SPLIT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        env_nested_delimiter="__",
    )

    threads: Optional[int] = Field(default=None, ge=1, description="BLAS/OpenMP thread cap")
    solver: SolverConfig = Field(default_factory=SolverConfig)
    conditioning: ConditioningConfig = Field(default_factory=ConditioningConfig)
    sinkhorn: SinkhornConfig = Field(default_factory=SinkhornConfig)
    subspace: SubspaceConfig = Field(default_factory=SubspaceConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)


@lru_cache(maxsize=1)
def get_settings() -> AppSettings:
    """Get the process-wide settings; call get_settings.cache_clear() to reload."""
    return AppSettings()


def get_solver_config() -> SolverConfig:
    return get_settings().solver


def get_conditioning_config() -> ConditioningConfig:
    return get_settings().conditioning


def get_sinkhorn_config() -> SinkhornConfig:
    return get_settings().sinkhorn


def get_logging_config() -> LoggingConfig:
    return get_settings().logging
