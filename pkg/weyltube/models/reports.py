"""Report models emitted by the library and the command line."""

from typing import Any, Dict, List, Optional

from pydantic import Field

from .base import TubeBaseModel
from .common import CheckStatus, DomainKind, IntrinsicCriterion, SignatureKind, VolumePath


class VolumeSeries(TubeBaseModel):
    """Tube volumes along one computation path."""

    path: VolumePath = Field(..., description="How the volumes were obtained")
    volumes: List[float] = Field(..., description="V(a) per radius")
    coefficients: List[float] = Field(
        default_factory=list, description="v_d of V(a) = sum v_d a^(m+d), d = 0..n"
    )
    curvature_integrals: Optional[List[float]] = Field(
        None, description="k_d = int_M H_d ds, d = 0..n (odd entries 0)"
    )
    error: float = Field(0.0, description="Quadrature refinement error on the volumes", ge=0)


class MonteCarloEstimate(TubeBaseModel):
    """Direct sampling estimate of one tube volume."""

    radius: float = Field(..., gt=0)
    estimate: float = Field(..., description="Unbiased volume estimate", ge=0)
    stderr: float = Field(..., description="Binomial standard error", ge=0)
    samples: int = Field(..., ge=1)
    hits: int = Field(..., ge=0)
    seed: int = Field(..., ge=0)
    box_volume: float = Field(..., gt=0)


class IntrinsicnessVerdict(TubeBaseModel):
    """Whether a cross-section makes the tube formula intrinsic up to dimension n."""

    domain: str
    n: int = Field(..., ge=0)
    criterion: IntrinsicCriterion
    intrinsic: bool
    group: Optional[str] = Field(None, description="Symmetry group used by the group criterion")
    orthogonal_degree: Optional[int] = Field(None, description="Largest n the symmetry group covers")
    max_defect: Optional[float] = Field(None, description="Worst normalized moment defect")
    reason: str = ""


class TubeReport(TubeBaseModel):
    """Tube volumes of one scenario along every requested path."""

    manifold: str
    manifold_params: Dict[str, Any] = Field(default_factory=dict)
    domain: str
    domain_kind: DomainKind
    n: int = Field(..., ge=1, description="Manifold dimension")
    m: int = Field(..., ge=1, description="Codimension")
    signature: SignatureKind = SignatureKind.EUCLIDEAN
    radii: List[float]
    domain_volume: float
    manifold_volume: Optional[float] = None
    nodes: int = Field(0, ge=0, description="Quadrature nodes of the finest grid")
    reach: Optional[float] = Field(None, description="Largest radius accepted by the focal check")
    v0_consistent: Optional[bool] = None
    extrinsic: Optional[VolumeSeries] = None
    intrinsic: Optional[VolumeSeries] = None
    monte_carlo: List[MonteCarloEstimate] = Field(default_factory=list)
    verdict: Optional[IntrinsicnessVerdict] = None
    notes: List[str] = Field(default_factory=list)

    def path_discrepancy(self) -> Optional[float]:
        """Largest relative gap between the extrinsic and intrinsic volumes."""
        if self.extrinsic is None or self.intrinsic is None:
            return None
        gaps = [
            abs(e - i) / max(abs(e), abs(i), 1e-300)
            for e, i in zip(self.extrinsic.volumes, self.intrinsic.volumes)
        ]
        return max(gaps) if gaps else 0.0

    def csv_rows(self) -> List[Dict[str, Any]]:
        """One row per radius: radius, V_extrinsic, V_intrinsic, V_mc, stderr."""
        mc = {e.radius: e for e in self.monte_carlo}
        rows = []
        for k, a in enumerate(self.radii):
            estimate = mc.get(a)
            rows.append(
                {
                    "radius": a,
                    "V_extrinsic": self.extrinsic.volumes[k] if self.extrinsic else None,
                    "V_intrinsic": self.intrinsic.volumes[k] if self.intrinsic else None,
                    "V_mc": estimate.estimate if estimate else None,
                    "stderr": estimate.stderr if estimate else None,
                }
            )
        return rows


class SymmetryCheck(TubeBaseModel):
    """Outcome of the degree-n moment symmetry test."""

    domain: str
    m: int = Field(..., ge=1)
    n: int = Field(..., ge=0)
    symmetric: bool
    max_defect: float = Field(..., ge=0)
    worst_alpha: Optional[List[int]] = None
    exact: bool = False


class GroupDegreeReport(TubeBaseModel):
    """Orthogonal degree of one reflection group."""

    group: str
    order: int = Field(..., ge=1)
    degrees: List[int]
    orthogonal_degree: int = Field(..., ge=0)
    predicted: int = Field(..., ge=0, description="d_2 - 1 read off the degrees")
    seconds: float = Field(0.0, ge=0)

    @property
    def matches(self) -> bool:
        return self.orthogonal_degree == self.predicted


class ResidualReport(TubeBaseModel):
    """Gauss and Codazzi residuals of an embedding over a grid."""

    manifold: str
    nodes: int = Field(..., ge=0)
    gauss_residual: float = Field(..., ge=0)
    codazzi_residual: float = Field(..., ge=0)
    scalar_min: float
    scalar_max: float
    analytic: bool = True
    clamped: bool = False


class CheckResult(TubeBaseModel):
    """One named verification check."""

    name: str
    category: str
    status: CheckStatus
    expected: str = ""
    actual: str = ""
    detail: str = ""


class VerificationSummary(TubeBaseModel):
    """Outcome of a verification run."""

    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.checks if c.status == CheckStatus.PASS.value)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def all_passed(self) -> bool:
        return self.failed == 0

    def table(self) -> str:
        """Plain-text table of the checks."""
        width = max([len(c.name) for c in self.checks] + [5])
        lines = [f"{'check'.ljust(width)}  status  expected / actual"]
        for c in self.checks:
            lines.append(f"{c.name.ljust(width)}  {str(c.status).ljust(6)}  {c.expected} / {c.actual}")
        lines.append(f"{self.passed} passed, {self.failed} failed")
        return "\n".join(lines)
