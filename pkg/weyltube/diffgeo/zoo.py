"""Built-in embeddings with analytic derivatives, selectable by name."""

from __future__ import annotations

from typing import Any, Callable, Dict, Sequence

import sympy as sp
import structlog

from ..exceptions.client import WeylTubeValidationError
from .embedding import Embedding, Signature, embedding_from_sympy

logger = structlog.get_logger(__name__)

_U, _V = sp.symbols("u v", real=True)
_X, _Y = sp.symbols("x y", real=True)
_TWO_PI = 2 * sp.pi


def _positive(name: str, value: float) -> float:
    if value <= 0:
        raise WeylTubeValidationError("must be positive", field=name, value=value)
    return float(value)


def _unit(size: int, index: int) -> list:
    vector = [0] * size
    vector[index] = 1
    return vector


def circle(R: float = 1.0, codim: int = 2) -> Embedding:
    """Circle of radius ``R`` in the first coordinate plane of ``R^{1+codim}``."""
    R = _positive("R", R)
    if codim < 1:
        raise WeylTubeValidationError("must be at least 1", field="codim", value=codim)
    size = 1 + codim
    position = [R * sp.cos(_U), R * sp.sin(_U)] + [0] * (codim - 1)
    radial = [sp.cos(_U), sp.sin(_U)] + [0] * (codim - 1)
    candidates = [radial] + [_unit(size, 2 + q) for q in range(codim - 1)]
    return embedding_from_sympy(
        "circle",
        position,
        [_U],
        [(0.0, 2 * float(sp.pi))],
        [True],
        candidates=candidates,
        params={"R": R, "codim": codim},
        euler_characteristic=0,
    )


def sphere(R: float = 1.0) -> Embedding:
    """Round sphere ``S^2_R`` in ``R^3``, polar angle first; normal points outward."""
    R = _positive("R", R)
    position = [
        R * sp.sin(_U) * sp.cos(_V),
        R * sp.sin(_U) * sp.sin(_V),
        R * sp.cos(_U),
    ]
    outward = [sp.sin(_U) * sp.cos(_V), sp.sin(_U) * sp.sin(_V), sp.cos(_U)]
    return embedding_from_sympy(
        "sphere",
        position,
        [_U, _V],
        [(0.0, float(sp.pi)), (0.0, 2 * float(sp.pi))],
        [False, True],
        candidates=[outward],
        params={"R": R},
        euler_characteristic=2,
    )


def torus(R: float = 3.0, r: float = 1.0) -> Embedding:
    """Torus of revolution in ``R^3`` with center radius ``R`` and tube radius ``r < R``."""
    R, r = _positive("R", R), _positive("r", r)
    if r >= R:
        raise WeylTubeValidationError("tube radius must be below the center radius", field="r", value=r)
    position = [
        (R + r * sp.cos(_V)) * sp.cos(_U),
        (R + r * sp.cos(_V)) * sp.sin(_U),
        r * sp.sin(_V),
    ]
    outward = [sp.cos(_V) * sp.cos(_U), sp.cos(_V) * sp.sin(_U), sp.sin(_V)]
    period = 2 * float(sp.pi)
    return embedding_from_sympy(
        "torus",
        position,
        [_U, _V],
        [(0.0, period), (0.0, period)],
        [True, True],
        candidates=[outward],
        params={"R": R, "r": r},
        euler_characteristic=0,
    )


def clifford_torus(R1: float = 1.0, R2: float = 1.0) -> Embedding:
    """Flat torus ``(R1 cos u, R1 sin u, R2 cos v, R2 sin v)`` in ``R^4``."""
    R1, R2 = _positive("R1", R1), _positive("R2", R2)
    position = [R1 * sp.cos(_U), R1 * sp.sin(_U), R2 * sp.cos(_V), R2 * sp.sin(_V)]
    candidates = [
        [sp.cos(_U), sp.sin(_U), 0, 0],
        [0, 0, sp.cos(_V), sp.sin(_V)],
    ]
    period = 2 * float(sp.pi)
    return embedding_from_sympy(
        "clifford_torus",
        position,
        [_U, _V],
        [(0.0, period), (0.0, period)],
        [True, True],
        candidates=candidates,
        params={"R1": R1, "R2": R2},
        euler_characteristic=0,
    )


def helix(R: float = 1.0, pitch: float = 0.5, turns: float = 1.0) -> Embedding:
    """Helix patch ``(R cos s, R sin s, pitch s)`` for ``s`` in ``[0, 2 pi turns]``."""
    R, turns = _positive("R", R), _positive("turns", turns)
    position = [R * sp.cos(_U), R * sp.sin(_U), pitch * _U]
    candidates = [[sp.cos(_U), sp.sin(_U), 0], [0, 0, 1]]
    return embedding_from_sympy(
        "helix",
        position,
        [_U],
        [(0.0, 2 * float(sp.pi) * turns)],
        [False],
        candidates=candidates,
        params={"R": R, "pitch": float(pitch), "turns": turns},
    )


def helicoid(pitch: float = 0.5, inner: float = 0.2, outer: float = 1.0) -> Embedding:
    """Helicoid patch ``(v cos u, v sin u, pitch u)`` over one turn."""
    pitch = _positive("pitch", pitch)
    if not 0 <= inner < outer:
        raise WeylTubeValidationError("need 0 <= inner < outer", field="inner", value=inner)
    position = [_V * sp.cos(_U), _V * sp.sin(_U), pitch * _U]
    normal = [-pitch * sp.sin(_U), pitch * sp.cos(_U), -_V]
    return embedding_from_sympy(
        "helicoid",
        position,
        [_U, _V],
        [(0.0, 2 * float(sp.pi)), (float(inner), float(outer))],
        [False, False],
        candidates=[normal],
        params={"pitch": pitch, "inner": float(inner), "outer": float(outer)},
    )


def height_polynomial(triples: Sequence[Sequence[float]]) -> sp.Expr:
    """``sum c x^i y^j`` from ``[[c, i, j], ...]``."""
    expr = sp.Integer(0)
    for triple in triples:
        if len(triple) != 3:
            raise WeylTubeValidationError("height terms are [coefficient, i, j]", field="heights", value=triple)
        c, i, j = triple
        if int(i) != i or int(j) != j or i < 0 or j < 0:
            raise WeylTubeValidationError("exponents must be non-negative integers", field="heights", value=triple)
        expr += sp.nsimplify(c) * _X ** int(i) * _Y ** int(j)
    return expr


def graph_surface(
    heights: Sequence[Sequence[Sequence[float]]],
    box: Sequence[Sequence[float]] = ((-1.0, 1.0), (-1.0, 1.0)),
    *,
    signature: Signature | None = None,
    name: str = "graph2d",
) -> Embedding:
    """
    Graph ``(x, y, f_1(x, y), ..., f_m(x, y))`` of ``m`` polynomial heights.

    Each height is a list of ``[coefficient, i, j]`` terms. The normal frame
    is Gram-Schmidt of the height axes, so in a Lorentzian ambient the last
    height is the time coordinate.
    """
    if not heights:
        raise WeylTubeValidationError("at least one height polynomial required", field="heights")
    m = len(heights)
    size = 2 + m
    position = [_X, _Y] + [height_polynomial(h) for h in heights]
    candidates = [_unit(size, 2 + q) for q in range(m)]
    return embedding_from_sympy(
        name,
        position,
        [_X, _Y],
        [tuple(axis) for axis in box],
        [False, False],
        signature=signature,
        candidates=candidates,
        params={"heights": [[list(map(float, t)) for t in h] for h in heights], "box": [list(a) for a in box]},
    )


def graph2d(
    f: Sequence[Sequence[float]] = ((0.5, 2, 0), (0.5, 0, 2)),
    box: Sequence[Sequence[float]] = ((-1.0, 1.0), (-1.0, 1.0)),
) -> Embedding:
    """Graph surface ``z = f(x, y)`` in ``R^3``; the default is ``(x^2 + y^2) / 2``."""
    return graph_surface([f], box)


def lorentz_graph2d(
    f: Sequence[Sequence[float]] = ((0.1, 2, 0), (0.1, 0, 2)),
    ambient: int = 3,
    spatial: Sequence[Sequence[float]] = (),
    box: Sequence[Sequence[float]] = ((-1.0, 1.0), (-1.0, 1.0)),
) -> Embedding:
    """
    Spacelike graph in ``R^{2,1}`` (``ambient=3``) or ``R^{3,1}`` (``ambient=4``).

    ``f`` is the time coordinate; in ``R^{3,1}`` the spatial height is ``spatial``.
    """
    if ambient == 3:
        heights = [f]
    elif ambient == 4:
        heights = [spatial, f]
    else:
        raise WeylTubeValidationError("Lorentzian graphs live in R^{2,1} or R^{3,1}", field="ambient", value=ambient)
    return graph_surface(heights, box, signature=Signature.lorentzian(ambient), name="lorentz_graph2d")


def plane(codim: int = 1, size: float = 1.0) -> Embedding:
    """Flat square ``[-size, size]^2`` in ``R^{2+codim}``."""
    size = _positive("size", size)
    return graph_surface([[] for _ in range(codim)], ((-size, size), (-size, size)), name="plane")


ZOO: Dict[str, Callable[..., Embedding]] = {
    "circle": circle,
    "sphere": sphere,
    "torus": torus,
    "clifford_torus": clifford_torus,
    "helix": helix,
    "helicoid": helicoid,
    "graph2d": graph2d,
    "graph_surface": graph_surface,
    "lorentz_graph2d": lorentz_graph2d,
    "plane": plane,
}


def build_embedding(name: str, **params: Any) -> Embedding:
    """
    Look up a zoo entry by name and build it.

    Raises:
        WeylTubeValidationError: If the name is unknown or a parameter is rejected
    """
    factory = ZOO.get(name)
    if factory is None:
        raise WeylTubeValidationError(
            f"unknown manifold, choose one of {sorted(ZOO)}", field="manifold", value=name
        )
    try:
        embedding = factory(**params)
    except TypeError as exc:
        raise WeylTubeValidationError(str(exc), field="manifold.params", value=params) from exc
    logger.debug("Embedding built", name=name, n=embedding.n, m=embedding.m)
    return embedding
