"""Scenario input models for tube runs."""

from typing import Any, Dict, List, Optional

from pydantic import Field, PrivateAttr, field_validator, model_validator

from .base import TubeBaseModel
from .common import DomainKind, SignatureKind, VolumePath


class ManifoldSpec(TubeBaseModel):
    """A zoo embedding selected by name."""

    name: str = Field(..., description="Zoo entry, e.g. sphere, torus, clifford_torus, graph2d")
    params: Dict[str, Any] = Field(default_factory=dict, description="Keyword parameters of the zoo entry")

    def build(self):
        from ..diffgeo.zoo import build_embedding

        return build_embedding(self.name, **self.params)


class DomainSpec(TubeBaseModel):
    """Cross-section domain description."""

    kind: str = Field(..., description="Domain kind or the alias 'interval'")
    m: Optional[int] = Field(None, ge=1, description="Dimension (not used by polygons and radial domains)")
    k: Optional[int] = Field(None, ge=3, description="Polygon sides")
    b: Optional[float] = Field(None, gt=0, description="Cone apex for cone_ball")
    constant: float = Field(1.0, description="Constant term of a radial profile")
    modes: List[List[float]] = Field(default_factory=list, description="Radial profile as [mode, cos, sin]")
    n: Optional[int] = Field(None, ge=0, description="Target degree of a radial counterexample")
    p: Optional[int] = Field(None, ge=1)
    q: Optional[int] = Field(None, ge=1)

    @field_validator("kind")
    @classmethod
    def validate_kind(cls, v: str) -> str:
        allowed = {kind.value for kind in DomainKind} - {DomainKind.MONTE_CARLO.value}
        if v != "interval" and v not in allowed:
            raise ValueError(f"unknown domain kind {v!r}; choose from {sorted(allowed | {'interval'})}")
        return v

    @property
    def dimension(self) -> int:
        if self.kind == "interval":
            return 1
        if self.kind in (DomainKind.REGULAR_POLYGON.value, DomainKind.RADIAL_2D.value):
            return 2
        return self.m or 0

    def build(self):
        """Construct the ``Domain``; parameter problems surface as validation errors."""
        from ..domains.catalog import Domain, FourierProfile
        from ..domains.symmetry import build_radial_counterexample
        from ..exceptions.client import WeylTubeValidationError

        if self.kind == "interval":
            return Domain.interval()
        kind = DomainKind(self.kind)
        if kind is DomainKind.REGULAR_POLYGON:
            if self.k is None:
                raise WeylTubeValidationError("regular_polygon needs k", field="domain.k")
            return Domain.regular_polygon(self.k)
        if kind is DomainKind.RADIAL_2D:
            if self.p is not None or self.q is not None:
                if None in (self.n, self.p, self.q):
                    raise WeylTubeValidationError("counterexample needs n, p and q", field="domain.n")
                return build_radial_counterexample(self.n, self.p, self.q, self.modes, b_constant=self.constant)
            return Domain.radial2d(FourierProfile.from_triples(self.constant, self.modes))
        if self.m is None:
            raise WeylTubeValidationError(f"{kind.value} needs m", field="domain.m")
        if kind is DomainKind.BALL:
            return Domain.ball(self.m)
        if kind is DomainKind.CUBE:
            return Domain.cube(self.m)
        if kind is DomainKind.CROSS_POLYTOPE:
            return Domain.cross_polytope(self.m)
        if kind is DomainKind.DIAMOND:
            return Domain.diamond(self.m)
        if self.b is None:
            raise WeylTubeValidationError("cone_ball needs b", field="domain.b")
        return Domain.cone_ball(self.m, self.b)


class QuadratureSpec(TubeBaseModel):
    """Tensor-product quadrature over the parameter box."""

    gauss_legendre_order: Optional[int] = Field(None, ge=2, le=128, description="Nodes per non-periodic axis")
    trapezoid_nodes: Optional[int] = Field(None, ge=4, le=4096, description="Nodes per periodic axis")
    refine: bool = Field(True, description="Repeat on a refined grid to estimate the error")


class MonteCarloSpec(TubeBaseModel):
    """Direct sampling oracle; the seed is mandatory."""

    samples: int = Field(..., ge=1, le=100_000_000)
    seed: int = Field(..., ge=0)
    chunk_size: Optional[int] = Field(None, ge=1_000)


class Scenario(TubeBaseModel):
    """A complete tube computation request."""

    manifold: ManifoldSpec
    domain: DomainSpec
    signature: SignatureKind = SignatureKind.EUCLIDEAN
    radii: List[float] = Field(..., min_length=1)
    quadrature: QuadratureSpec = Field(default_factory=QuadratureSpec)
    mc: Optional[MonteCarloSpec] = None
    paths: List[VolumePath] = Field(
        default_factory=lambda: [VolumePath.EXTRINSIC, VolumePath.INTRINSIC]
    )
    output: Optional[str] = Field(None, description="Report JSON path")
    csv: Optional[str] = Field(None, description="Optional CSV path")

    _embedding: Any = PrivateAttr(default=None)
    _domain: Any = PrivateAttr(default=None)

    @field_validator("radii")
    @classmethod
    def validate_radii(cls, v: List[float]) -> List[float]:
        if any(not (a > 0) for a in v):
            raise ValueError("radii must be positive")
        return v

    @model_validator(mode="after")
    def validate_dimensions(self) -> "Scenario":
        from ..diffgeo.embedding import Signature

        embedding = self.manifold.build()
        if self.signature != SignatureKind.EUCLIDEAN.value:
            embedding = embedding.with_signature(Signature.of_kind(self.signature, embedding.ambient_dimension))
        domain = self.domain.build()
        if domain.m != embedding.m:
            raise ValueError(
                f"domain dimension {domain.m} must equal the manifold codimension {embedding.m}"
            )
        if VolumePath.MONTE_CARLO.value in self.paths and self.mc is None:
            raise ValueError("the monte_carlo path needs an mc block with samples and seed")
        self._embedding = embedding
        self._domain = domain
        return self

    @property
    def embedding(self):
        return self._embedding

    @property
    def domain_object(self):
        return self._domain
