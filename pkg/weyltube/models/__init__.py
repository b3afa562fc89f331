"""Scenario and report models."""

from .base import TubeBaseModel
from .common import (
    CheckStatus,
    DomainKind,
    GroupType,
    IntrinsicCriterion,
    SignatureKind,
    VolumePath,
)
from .reports import (
    CheckResult,
    GroupDegreeReport,
    IntrinsicnessVerdict,
    MonteCarloEstimate,
    ResidualReport,
    SymmetryCheck,
    TubeReport,
    VerificationSummary,
    VolumeSeries,
)
from .scenario import DomainSpec, ManifoldSpec, MonteCarloSpec, QuadratureSpec, Scenario

__all__ = [
    # Base
    "TubeBaseModel",

    # Enumerations
    "CheckStatus",
    "DomainKind",
    "GroupType",
    "IntrinsicCriterion",
    "SignatureKind",
    "VolumePath",

    # Scenario input
    "DomainSpec",
    "ManifoldSpec",
    "MonteCarloSpec",
    "QuadratureSpec",
    "Scenario",

    # Reports
    "CheckResult",
    "GroupDegreeReport",
    "IntrinsicnessVerdict",
    "MonteCarloEstimate",
    "ResidualReport",
    "SymmetryCheck",
    "TubeReport",
    "VerificationSummary",
    "VolumeSeries",
]
