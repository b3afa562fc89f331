"""Parametrized submanifolds with their derivative jets and ambient signature."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog
import sympy as sp

from ..config.settings import get_settings
from ..exceptions.base import DimensionMismatchError
from ..exceptions.client import WeylTubeValidationError
from ..models.common import SignatureKind

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class Signature:
    """
    Diagonal ambient metric ``eta`` of length ``n + m``.

    The Lorentzian signature carries its single ``-1`` last; the induced
    normal block then is ``diag(1, ..., 1, -1)``.
    """

    eta: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(e not in (1, -1) for e in self.eta):
            raise WeylTubeValidationError("signature entries must be +-1", field="signature", value=self.eta)
        negatives = [i for i, e in enumerate(self.eta) if e == -1]
        if len(negatives) > 1 or (negatives and negatives[0] != len(self.eta) - 1):
            raise WeylTubeValidationError(
                "at most one -1, placed last", field="signature", value=self.eta
            )

    @classmethod
    def euclidean(cls, dimension: int) -> "Signature":
        return cls((1,) * dimension)

    @classmethod
    def lorentzian(cls, dimension: int) -> "Signature":
        return cls((1,) * (dimension - 1) + (-1,))

    @classmethod
    def of_kind(cls, kind: SignatureKind | str, dimension: int) -> "Signature":
        if SignatureKind(kind) is SignatureKind.LORENTZIAN:
            return cls.lorentzian(dimension)
        return cls.euclidean(dimension)

    @property
    def kind(self) -> SignatureKind:
        return SignatureKind.LORENTZIAN if self.is_lorentzian else SignatureKind.EUCLIDEAN

    @property
    def is_lorentzian(self) -> bool:
        return -1 in self.eta

    @property
    def dimension(self) -> int:
        return len(self.eta)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(np.asarray(self.eta, dtype=float))

    def normal_block(self, m: int) -> np.ndarray:
        """``eta_pq`` of an orthonormal normal frame of a spacelike submanifold."""
        block = np.ones(m)
        if self.is_lorentzian:
            block[-1] = -1.0
        return block

    def dot(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """``x . y`` along the last axis."""
        return np.sum(np.asarray(x) * np.asarray(self.eta, dtype=float) * np.asarray(y), axis=-1)


@dataclass(frozen=True)
class Jet:
    """Position and parameter derivatives up to third order at one node."""

    r: np.ndarray  # (N,)
    d1: np.ndarray  # (N, n)    d_i r
    d2: np.ndarray  # (N, n, n) d_i d_j r
    d3: np.ndarray  # (N, n, n, n) d_k d_i d_j r
    clamped: bool = False


JetFunction = Callable[[np.ndarray], Jet]


def _lambdify_array(expressions: Any, symbols: Sequence[sp.Symbol], shape: Tuple[int, ...]) -> Callable:
    flat = list(sp.flatten(expressions))
    fn = sp.lambdify(symbols, flat, modules="numpy", cse=True)

    def evaluate(u: np.ndarray) -> np.ndarray:
        values = fn(*[float(x) for x in u])
        return np.asarray([float(v) for v in values], dtype=float).reshape(shape)

    return evaluate


def symbolic_jet(position: Sequence[sp.Expr], symbols: Sequence[sp.Symbol]) -> JetFunction:
    """Analytic jet of a sympy parametrization (derivatives lambdified once)."""
    n, big_n = len(symbols), len(position)
    r_expr = sp.Matrix(position)
    d1 = [[sp.diff(r_expr[a], s) for s in symbols] for a in range(big_n)]
    d2 = [[[sp.diff(d1[a][i], s) for s in symbols] for i in range(n)] for a in range(big_n)]
    # d3[a][k][i][j] = d_k d_i d_j r_a
    d3 = [
        [[[sp.diff(d2[a][i][j], symbols[k]) for j in range(n)] for i in range(n)] for k in range(n)]
        for a in range(big_n)
    ]
    r_fn = _lambdify_array(list(r_expr), symbols, (big_n,))
    d1_fn = _lambdify_array(d1, symbols, (big_n, n))
    d2_fn = _lambdify_array(d2, symbols, (big_n, n, n))
    d3_fn = _lambdify_array(d3, symbols, (big_n, n, n, n))

    def jet(u: np.ndarray) -> Jet:
        return Jet(r_fn(u), d1_fn(u), d2_fn(u), d3_fn(u))

    return jet


def _first_derivative(f: Callable[[np.ndarray], np.ndarray], u: np.ndarray, axis: int, h: float) -> np.ndarray:
    # fourth-order central stencil
    e = np.zeros_like(u)
    e[axis] = h
    return (f(u - 2 * e) - 8 * f(u - e) + 8 * f(u + e) - f(u + 2 * e)) / (12 * h)


def _second_derivative(
    f: Callable[[np.ndarray], np.ndarray], u: np.ndarray, i: int, j: int, hi: float, hj: float
) -> np.ndarray:
    if i == j:
        e = np.zeros_like(u)
        e[i] = hi
        return (
            -f(u - 2 * e) + 16 * f(u - e) - 30 * f(u) + 16 * f(u + e) - f(u + 2 * e)
        ) / (12 * hi * hi)
    return _first_derivative(lambda v: _first_derivative(f, v, j, hj), u, i, hi)


def finite_difference_jet(
    position: Callable[[np.ndarray], np.ndarray],
    box: Sequence[Tuple[float, float]],
    periodic: Sequence[bool],
    step: Optional[float] = None,
) -> JetFunction:
    """
    Jet by fourth-order central differences of ``position``.

    Steps are ``step`` times the axis width for first derivatives and ten times
    that for second and third derivatives. Near the edge of a non-periodic
    axis the step is shrunk so the stencil stays inside the box; such nodes
    are flagged as clamped.
    """
    widths = np.array([hi - lo for lo, hi in box], dtype=float)
    lows = np.array([lo for lo, _ in box], dtype=float)
    highs = np.array([hi for _, hi in box], dtype=float)

    def f(u: np.ndarray) -> np.ndarray:
        return np.asarray(position(u), dtype=float)

    def steps(u: np.ndarray, factor: float) -> Tuple[np.ndarray, bool]:
        base = (step or get_settings().fd_step) * factor * widths
        room = np.minimum(u - lows, highs - u) / 2.0
        clamped = False
        for axis, is_periodic in enumerate(periodic):
            if not is_periodic and base[axis] > room[axis]:
                base[axis] = max(room[axis], 1e-8 * widths[axis])
                clamped = True
        return base, clamped

    def jet(u: np.ndarray) -> Jet:
        u = np.asarray(u, dtype=float)
        n = u.size
        h1, c1 = steps(u, 1.0)
        h2, c2 = steps(u, 10.0)
        r = f(u)
        d1 = np.stack([_first_derivative(f, u, i, h1[i]) for i in range(n)], axis=-1)

        def hessian(v: np.ndarray) -> np.ndarray:
            out = np.empty((r.size, n, n))
            for i in range(n):
                for j in range(i, n):
                    out[:, i, j] = out[:, j, i] = _second_derivative(f, v, i, j, h2[i], h2[j])
            return out

        d2 = hessian(u)
        d3 = np.stack([_first_derivative(hessian, u, k, h2[k]) for k in range(n)], axis=1)
        return Jet(r, d1, d2, d3, clamped=c1 or c2)

    return jet


@dataclass(frozen=True, eq=False)
class Embedding:
    """
    Parametrized submanifold ``r: box -> R^{n+m}`` of an ambient space with signature ``eta``.

    ``candidates`` optionally returns ``m`` ambient vectors spanning the normal
    space modulo tangents at every node; the normal frame is Gram-Schmidt of
    their tangent-free parts. Without it the frame is anchored to the normal
    space at the box center.
    """

    name: str
    n: int
    m: int
    box: Tuple[Tuple[float, float], ...]
    periodic: Tuple[bool, ...]
    signature: Signature
    jet: JetFunction
    candidates: Optional[Callable[[np.ndarray], np.ndarray]] = None
    analytic: bool = True
    params: Dict[str, Any] = field(default_factory=dict)
    euler_characteristic: Optional[int] = None

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise WeylTubeValidationError("dimension and codimension must be positive", field="manifold")
        if len(self.box) != self.n or len(self.periodic) != self.n:
            raise DimensionMismatchError("parameter box must have n axes", expected=self.n, actual=len(self.box))
        if self.signature.dimension != self.n + self.m:
            raise DimensionMismatchError(
                "signature length must equal n + m",
                expected=self.n + self.m,
                actual=self.signature.dimension,
            )

    @property
    def ambient_dimension(self) -> int:
        return self.n + self.m

    @property
    def center(self) -> np.ndarray:
        return np.array([(lo + hi) / 2.0 for lo, hi in self.box])

    def position(self, u: Sequence[float]) -> np.ndarray:
        return self.jet(np.asarray(u, dtype=float)).r

    def with_signature(self, signature: Signature) -> "Embedding":
        return Embedding(
            self.name,
            self.n,
            self.m,
            self.box,
            self.periodic,
            signature,
            self.jet,
            self.candidates,
            self.analytic,
            dict(self.params),
            self.euler_characteristic,
        )


def embedding_from_sympy(
    name: str,
    position: Sequence[sp.Expr],
    symbols: Sequence[sp.Symbol],
    box: Sequence[Tuple[float, float]],
    periodic: Sequence[bool],
    *,
    signature: Optional[Signature] = None,
    candidates: Optional[Sequence[Sequence[sp.Expr]]] = None,
    params: Optional[Dict[str, Any]] = None,
    euler_characteristic: Optional[int] = None,
) -> Embedding:
    """Build an embedding with analytic derivatives from a sympy parametrization."""
    n, big_n = len(symbols), len(position)
    m = big_n - n
    candidate_fn = None
    if candidates is not None:
        candidate_fn = _lambdify_array([list(c) for c in candidates], symbols, (m, big_n))
    logger.debug("Symbolic embedding prepared", name=name, n=n, m=m)
    return Embedding(
        name=name,
        n=n,
        m=m,
        box=tuple((float(lo), float(hi)) for lo, hi in box),
        periodic=tuple(bool(p) for p in periodic),
        signature=signature or Signature.euclidean(big_n),
        jet=symbolic_jet(position, symbols),
        candidates=candidate_fn,
        analytic=True,
        params=dict(params or {}),
        euler_characteristic=euler_characteristic,
    )


def embedding_from_callable(
    name: str,
    position: Callable[[np.ndarray], np.ndarray],
    n: int,
    m: int,
    box: Sequence[Tuple[float, float]],
    periodic: Optional[Sequence[bool]] = None,
    *,
    signature: Optional[Signature] = None,
    step: Optional[float] = None,
    candidates: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> Embedding:
    """Build an embedding whose derivatives come from finite differences."""
    periodic = tuple(periodic) if periodic is not None else (False,) * n
    box = tuple((float(lo), float(hi)) for lo, hi in box)
    return Embedding(
        name=name,
        n=n,
        m=m,
        box=box,
        periodic=periodic,
        signature=signature or Signature.euclidean(n + m),
        jet=finite_difference_jet(position, box, periodic, step),
        candidates=candidates,
        analytic=False,
    )


def jets_at(embedding: Embedding, nodes: np.ndarray) -> List[Jet]:
    return [embedding.jet(np.asarray(u, dtype=float)) for u in np.atleast_2d(nodes)]
