"""``weyltube`` command line."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Callable, List, Optional

import structlog
from pydantic import ValidationError

from .. import configure_logging
from ..config.constants import EXIT_VALIDATION
from ..config.settings import get_settings
from ..exceptions.base import FocalRadiusError, WeylTubeError
from ..exceptions.client import WeylTubeConfigurationError, WeylTubeDataError, WeylTubeValidationError
from ..models.common import DomainKind
from . import commands

logger = structlog.get_logger(__name__)

DOMAIN_KINDS = sorted({k.value for k in DomainKind} - {DomainKind.MONTE_CARLO.value} | {"interval"})


def _add_domain_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--kind", required=True, choices=DOMAIN_KINDS, help="Domain kind")
    parser.add_argument("--m", type=int, default=None, help="Domain dimension")
    parser.add_argument("--k", type=int, default=None, help="Polygon sides")
    parser.add_argument("--b", type=float, default=None, help="Cone apex (cone_ball)")
    parser.add_argument("--constant", type=float, default=1.0, help="Constant term of a radial profile")
    parser.add_argument("--modes", default=None, help="Radial profile modes as JSON [[mode, cos, sin], ...]")
    parser.add_argument("--target-n", dest="target_n", type=int, default=None, help="Counterexample degree")
    parser.add_argument("--p", type=int, default=None, help="Counterexample deforming mode")
    parser.add_argument("--q", type=int, default=None, help="Counterexample rotation order")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weyltube", description="Tube volumes with general cross-sections.")
    parser.add_argument("--log-level", default=None, help="Override WEYLTUBE_LOG_LEVEL")
    parser.add_argument("--threads", type=int, default=None, help="Override WEYLTUBE_THREADS")
    sub = parser.add_subparsers(dest="command", required=True)

    tube = sub.add_parser("tube", help="Tube volume computations").add_subparsers(dest="action", required=True)
    run = tube.add_parser("run", help="Run a JSON scenario")
    run.add_argument("scenario", help="Scenario JSON file")
    run.add_argument("--output", default=None, help="Report JSON path (stdout when omitted)")
    run.add_argument("--csv", default=None, help="CSV path")
    run.add_argument("--seed", type=int, default=None, help="Seed for the Monte Carlo path")
    run.set_defaults(handler=commands.cmd_tube_run)

    mc = tube.add_parser("mc", help="Monte Carlo tube volume of a closed-form manifold")
    mc.add_argument("--manifold", required=True, choices=["circle", "sphere", "torus"])
    mc.add_argument("--params", default=None, help="Manifold parameters as a JSON object")
    mc.add_argument("--radius", type=float, nargs="+", required=True)
    mc.add_argument("--samples", type=int, default=None, help="Sample count (WEYLTUBE_MC_SAMPLES when omitted)")
    mc.add_argument("--seed", type=int, required=True, help="Root seed (mandatory)")
    mc.add_argument("--chunk-size", dest="chunk_size", type=int, default=None)
    _add_domain_arguments(mc)
    mc.set_defaults(handler=commands.cmd_tube_mc)

    verify = tube.add_parser("verify-paper", aliases=["verify"], help="Run the pinned verification checks")
    verify.add_argument("--filter", default=None, help="Only checks whose name or category contains this")
    verify.add_argument("--json", default=None, help="Also write the summary JSON here")
    verify.add_argument("--format", choices=["table", "json"], default="table")
    verify.add_argument("--quick", action="store_true", help="Skip slow checks (H4 enumeration)")
    verify.set_defaults(handler=commands.cmd_verify)

    group = sub.add_parser("group", help="Reflection groups").add_subparsers(dest="action", required=True)
    degree = group.add_parser("check-degree", help="Orthogonal degree via the Molien series")
    degree.add_argument("--type", required=True, help="A, B, D, I2, H3, H4, F4 (or B3, I2(7), ...)")
    degree.add_argument("--m", type=int, default=None)
    degree.add_argument("--k", type=int, default=None)
    degree.add_argument("--json", action="store_true")
    degree.set_defaults(handler=commands.cmd_group_check_degree)

    domain = sub.add_parser("domain", help="Cross-section domains").add_subparsers(dest="action", required=True)
    symmetric = domain.add_parser("check-symmetric", help="Moment symmetry test of degree n")
    _add_domain_arguments(symmetric)
    symmetric.add_argument("--n", type=int, required=True)
    symmetric.add_argument("--json", action="store_true")
    symmetric.set_defaults(handler=commands.cmd_domain_check_symmetric)

    table = domain.add_parser("moments", help="Moment table up to a degree")
    _add_domain_arguments(table)
    table.add_argument("--degree", type=int, required=True)
    table.add_argument("--samples", type=int, default=None)
    table.add_argument("--seed", type=int, default=None)
    table.set_defaults(handler=commands.cmd_domain_moments)

    curvature = sub.add_parser("curvature", help="Gauss/Codazzi residuals of a zoo manifold")
    curvature.add_argument("--manifold", required=True)
    curvature.add_argument("--params", default=None, help="Manifold parameters as a JSON object")
    curvature.add_argument("--nodes", type=int, default=6, help="Nodes per axis")
    curvature.set_defaults(handler=commands.cmd_curvature)
    return parser


def _configure(args: argparse.Namespace) -> None:
    if args.log_level:
        os.environ["WEYLTUBE_LOG_LEVEL"] = args.log_level.upper()
    if args.threads:
        os.environ["WEYLTUBE_THREADS"] = str(args.threads)
    get_settings.cache_clear()
    settings = get_settings()
    configure_logging(settings.log_format)
    # basicConfig rejects stream and filename together, even when one is None
    target = {"filename": settings.log_file} if settings.log_file else {"stream": sys.stderr}
    logging.basicConfig(
        level=getattr(logging, settings.log_level),
        format=settings.get_log_format_string(),
        **target,
    )


def _validation_message(exc: ValidationError) -> str:
    parts = []
    for error in exc.errors():
        location = ".".join(str(x) for x in error.get("loc", ())) or "scenario"
        parts.append(f"{location}: {error.get('msg')}")
    return "; ".join(parts)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, dispatch and map errors onto exit codes (0 ok, 1 failed check, 2 invalid input)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        _configure(args)
        logger.info("Command dispatched", command=args.command, action=getattr(args, "action", None))
        return handler(args)
    except ValidationError as exc:
        sys.stderr.write(f"error: {_validation_message(exc)}\n")
    except FocalRadiusError as exc:
        sys.stderr.write(f"error: radii: {exc}\n")
    except (WeylTubeValidationError, WeylTubeDataError, WeylTubeConfigurationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
    except WeylTubeError as exc:
        logger.error("Computation failed", error=str(exc), details=exc.details)
        sys.stderr.write(f"error: {exc}\n")
    return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
