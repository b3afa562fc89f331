"""Configuration management using Pydantic settings."""

from functools import lru_cache
from typing import Optional

from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..exceptions.client import WeylTubeConfigurationError
from .constants import (
    DEFAULT_LOG_FORMAT,
    DEFAULT_MC_CHUNK_SIZE,
    DEFAULT_MC_SAMPLES,
    DEFAULT_SEED,
    FD_STEP,
    GAUSS_LEGENDRE_ORDER,
    GROUP_ROUND_TOLERANCE,
    JSON_LOG_FORMAT,
    TRAPEZOID_NODES,
)


class WeylTubeSettings(BaseSettings):
    """Runtime configuration for tube computations."""

    model_config = SettingsConfigDict(
        env_prefix="WEYLTUBE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Parallelism
    threads: int = Field(
        default=1,
        ge=1,
        le=256,
        description="Worker threads for map-reduce stages",
    )

    # Quadrature
    gauss_legendre_order: int = Field(
        default=GAUSS_LEGENDRE_ORDER,
        ge=2,
        le=128,
        description="Gauss-Legendre nodes per non-periodic axis",
    )
    trapezoid_nodes: int = Field(
        default=TRAPEZOID_NODES,
        ge=4,
        le=4096,
        description="Trapezoid nodes per periodic axis",
    )
    fd_step: float = Field(
        default=FD_STEP,
        gt=0.0,
        le=1e-2,
        description="Relative central-difference step",
    )

    # Monte Carlo
    default_seed: int = Field(
        default=DEFAULT_SEED,
        ge=0,
        description="Seed used when a caller does not supply one",
    )
    mc_samples: int = Field(
        default=DEFAULT_MC_SAMPLES,
        ge=1,
        le=100_000_000,
        description="Default Monte Carlo sample count",
    )
    mc_chunk_size: int = Field(
        default=DEFAULT_MC_CHUNK_SIZE,
        ge=1_000,
        le=10_000_000,
        description="Samples drawn per chunk",
    )

    # Groups
    group_round_tolerance: float = Field(
        default=GROUP_ROUND_TOLERANCE,
        gt=0.0,
        le=1e-6,
        description="Granularity of the matrix deduplication key",
    )

    # Logging Configuration
    log_level: str = Field(
        default="INFO",
        pattern="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$",
        description="Logging level",
    )
    log_format: str = Field(
        default=JSON_LOG_FORMAT,
        description="Log format (json or human)",
    )
    log_file: Optional[str] = Field(
        default=None,
        description="Log file path",
    )

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Validate log format."""
        if v not in ("json", "human"):
            return JSON_LOG_FORMAT
        return v

    @field_validator("trapezoid_nodes")
    @classmethod
    def validate_trapezoid_nodes(cls, v: int) -> int:
        """Periodic grids are kept even so refinement nests."""
        return v + (v % 2)

    def get_log_format_string(self) -> str:
        """Stdlib format string; JSON lines are rendered by structlog itself."""
        if self.log_format == "human":
            return DEFAULT_LOG_FORMAT
        return "%(message)s"


@lru_cache(maxsize=1)
def get_settings() -> WeylTubeSettings:
    """
    Get cached settings instance.

    Raises:
        WeylTubeConfigurationError: If a ``WEYLTUBE_*`` variable is invalid
    """
    try:
        return WeylTubeSettings()
    except ValidationError as exc:
        error = exc.errors()[0]
        key = ".".join(str(x) for x in error.get("loc", ()))
        raise WeylTubeConfigurationError(f"{key}: {error.get('msg')}", config_key=key) from exc
