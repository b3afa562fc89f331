"""Tube volumes around submanifolds with general cross-sections."""

import structlog
from dotenv import load_dotenv

from .config.settings import get_settings
from .coxeter import build_group, orthogonal_of_degree
from .diffgeo import build_embedding
from .domains import Domain, moments, symmetric_of_degree
from .exceptions import *  # noqa: F401, F403 - Re-export all exceptions
from .exceptions.client import WeylTubeConfigurationError
from .models import *  # noqa: F401, F403 - Re-export all models
from .polycore import Poly, average_group, average_orthogonal
from .tube import (
    intrinsicness_verdict,
    tube_volume_extrinsic,
    tube_volume_intrinsic,
    tube_volume_mc,
)

# Load environment variables from .env file
load_dotenv(override=False)


def _renderer(log_format: str):
    if log_format == "human":
        return structlog.dev.ConsoleRenderer()
    return structlog.processors.JSONRenderer()


def configure_logging(log_format: str = "json") -> None:
    """Configure structlog on top of the stdlib logging tree."""
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            _renderer(log_format),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def _import_log_format() -> str:
    # an invalid environment is reported by the command line, not at import
    try:
        return get_settings().log_format
    except WeylTubeConfigurationError:
        return "json"


configure_logging(_import_log_format())

__version__ = "0.1.0"
__all__ = [
    "Domain",
    "Poly",
    "__version__",
    "average_group",
    "average_orthogonal",
    "build_embedding",
    "build_group",
    "configure_logging",
    "intrinsicness_verdict",
    "moments",
    "orthogonal_of_degree",
    "symmetric_of_degree",
    "tube_volume_extrinsic",
    "tube_volume_intrinsic",
    "tube_volume_mc",
]
