"""Command implementations; each returns a process exit code."""

from __future__ import annotations

import argparse
import sys
from typing import Any, Dict, List, Optional

import orjson
import structlog

from ..config.constants import EXIT_CHECK_FAILED, EXIT_OK
from ..config.settings import get_settings
from ..coxeter import build_group, orthogonal_of_degree, predicted_orthogonal_degree
from ..diffgeo import build_embedding, residual_summary
from ..domains import moments, symmetric_of_degree
from ..exceptions.client import WeylTubeValidationError
from ..models.common import VolumePath
from ..models.reports import GroupDegreeReport, ResidualReport, SymmetryCheck, TubeReport
from ..models.scenario import DomainSpec, MonteCarloSpec, Scenario
from ..tube import (
    combine_reports,
    intrinsicness_verdict,
    monte_carlo_series,
    parameter_grid,
    tube_volume_extrinsic,
    tube_volume_intrinsic,
    tube_volume_mc,
)
from ..utils.serialization import dumps, format_fraction, read_json, write_csv, write_json
from .verify import run_checks

logger = structlog.get_logger(__name__)

CSV_COLUMNS = ["radius", "V_extrinsic", "V_intrinsic", "V_mc", "stderr"]


def _emit(payload: Any) -> None:
    data = payload.to_json_bytes() if hasattr(payload, "to_json_bytes") else dumps(payload)
    sys.stdout.write(data.decode() + "\n")


def _parse_params(text: Optional[str], field: str) -> Dict[str, Any]:
    if not text:
        return {}
    try:
        params = orjson.loads(text)
    except orjson.JSONDecodeError as exc:
        raise WeylTubeValidationError(f"not valid JSON: {exc}", field=field, value=text) from exc
    if not isinstance(params, dict):
        raise WeylTubeValidationError("must be a JSON object", field=field, value=text)
    return params


def _parse_modes(text: Optional[str]) -> List[List[float]]:
    if not text:
        return []
    try:
        modes = orjson.loads(text)
    except orjson.JSONDecodeError as exc:
        raise WeylTubeValidationError(f"not valid JSON: {exc}", field="modes", value=text) from exc
    if not isinstance(modes, list) or any(not isinstance(m, list) or len(m) != 3 for m in modes):
        raise WeylTubeValidationError("modes are [[mode, cos, sin], ...]", field="modes", value=text)
    return modes


def run_scenario(scenario: Scenario) -> TubeReport:
    """Compute every requested path of a validated scenario and attach the verdict."""
    embedding, domain = scenario.embedding, scenario.domain_object
    paths = [VolumePath(p) for p in scenario.paths]
    reports: List[TubeReport] = []
    notes: List[str] = []

    if VolumePath.EXTRINSIC in paths:
        reports.append(tube_volume_extrinsic(embedding, domain, scenario.radii, scenario.quadrature))
    if VolumePath.INTRINSIC in paths:
        if embedding.signature.is_lorentzian and embedding.m > 1:
            notes.append("intrinsic path skipped: causal tubes of codimension > 1 are not intrinsic")
        else:
            reports.append(tube_volume_intrinsic(embedding, domain, scenario.radii, scenario.quadrature))
    if not reports:
        raise WeylTubeValidationError("no computable volume path requested", field="paths", value=scenario.paths)

    report = combine_reports(*reports)
    if VolumePath.MONTE_CARLO in paths:
        report = report.model_copy(
            update={"monte_carlo": monte_carlo_series(embedding, domain, scenario.radii, scenario.mc)}
        )

    verdict = intrinsicness_verdict(domain, embedding.n)
    if not verdict.intrinsic:
        discrepancy = report.path_discrepancy()
        notes.append(
            "not guaranteed intrinsic"
            + (f"; path discrepancy {discrepancy:.6e}" if discrepancy is not None else "")
        )
    return report.model_copy(update={"verdict": verdict, "notes": list(report.notes) + notes})


def cmd_tube_run(args: argparse.Namespace) -> int:
    payload = read_json(args.scenario)
    if args.seed is not None and isinstance(payload.get("mc"), dict):
        payload["mc"]["seed"] = args.seed
    scenario = Scenario.model_validate(payload)
    report = run_scenario(scenario)

    output = args.output or scenario.output
    csv_path = args.csv or scenario.csv
    if output:
        write_json(report, output)
    else:
        _emit(report)
    if csv_path:
        write_csv(report.csv_rows(), csv_path, CSV_COLUMNS)
    for note in report.notes:
        sys.stderr.write(note + "\n")
    return EXIT_OK


def cmd_tube_mc(args: argparse.Namespace) -> int:
    embedding = build_embedding(args.manifold, **_parse_params(args.params, "params"))
    domain = _domain_from_args(args)
    samples = args.samples or get_settings().mc_samples
    spec = MonteCarloSpec(samples=samples, seed=args.seed, chunk_size=args.chunk_size)
    estimates = [
        tube_volume_mc(embedding, domain, a, spec.samples, spec.seed + k, chunk_size=spec.chunk_size)
        for k, a in enumerate(_radii(args.radius))
    ]
    _emit([e.to_dict() for e in estimates])
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    summary = run_checks(args.filter, include_slow=not args.quick)
    if args.json:
        write_json(summary, args.json)
    if args.format == "json":
        _emit(summary)
    else:
        sys.stdout.write(summary.table() + "\n")
    logger.info("Verification finished", passed=summary.passed, failed=summary.failed)
    return EXIT_OK if summary.all_passed else EXIT_CHECK_FAILED


def cmd_group_check_degree(args: argparse.Namespace) -> int:
    group = build_group(args.type, args.m, args.k)
    computed = orthogonal_of_degree(group)
    report = GroupDegreeReport(
        group=group.label,
        order=group.order,
        degrees=list(group.degrees),
        orthogonal_degree=computed,
        predicted=predicted_orthogonal_degree(group.degrees),
        seconds=group.seconds,
    )
    if args.json:
        _emit(report)
    else:
        sys.stdout.write(f"{computed}\n")
    return EXIT_OK if report.matches else EXIT_CHECK_FAILED


def _radii(values: List[float]) -> List[float]:
    if not values or any(not a > 0 for a in values):
        raise WeylTubeValidationError("radii must be positive", field="radii", value=values)
    return list(values)


def _domain_from_args(args: argparse.Namespace):
    spec = DomainSpec(
        kind=args.kind,
        m=args.m,
        k=args.k,
        b=getattr(args, "b", None),
        constant=getattr(args, "constant", 1.0),
        n=getattr(args, "target_n", None),
        p=getattr(args, "p", None),
        q=getattr(args, "q", None),
        modes=_parse_modes(getattr(args, "modes", None)),
    )
    return spec.build()


def cmd_domain_check_symmetric(args: argparse.Namespace) -> int:
    domain = _domain_from_args(args)
    result = symmetric_of_degree(domain, args.n)
    check = SymmetryCheck(
        domain=domain.label,
        m=domain.m,
        n=args.n,
        symmetric=result.symmetric,
        max_defect=result.max_defect,
        worst_alpha=list(result.worst_alpha) if result.worst_alpha else None,
        exact=result.exact,
    )
    if args.json:
        _emit(check)
    else:
        line = "true" if check.symmetric else f"false worst_alpha={tuple(check.worst_alpha or ())}"
        sys.stdout.write(f"{line} max_defect={check.max_defect:.3e}\n")
    return EXIT_OK


def cmd_domain_moments(args: argparse.Namespace) -> int:
    domain = _domain_from_args(args)
    table = moments(domain, args.degree, samples=args.samples, seed=args.seed)
    entries = {",".join(map(str, alpha)): value for alpha, value in table.items()}
    scale = table.scale
    _emit(
        {
            "domain": domain.label,
            "m": domain.m,
            "max_degree": table.max_degree,
            "exact": table.exact,
            "scale": format_fraction(scale) if not isinstance(scale, float) else scale,
            "scale_label": table.scale_label,
            "moments": entries,
        }
    )
    return EXIT_OK


def cmd_curvature(args: argparse.Namespace) -> int:
    embedding = build_embedding(args.manifold, **_parse_params(args.params, "params"))
    grid = parameter_grid(embedding.box, embedding.periodic, args.nodes, max(args.nodes, 4))
    summary = residual_summary(embedding, grid.nodes)
    report = ResidualReport(
        manifold=embedding.name,
        nodes=int(summary["nodes"]),
        gauss_residual=summary["gauss_residual"],
        codazzi_residual=summary["codazzi_residual"],
        scalar_min=summary["scalar_min"],
        scalar_max=summary["scalar_max"],
        analytic=embedding.analytic,
        clamped=bool(summary["clamped"]),
    )
    _emit(report)
    return EXIT_OK
