"""Tensor-product quadrature over a parameter box."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import structlog
from numpy.polynomial.legendre import leggauss

from ..config.constants import REFINEMENT_FACTOR
from ..config.settings import get_settings
from ..exceptions.client import WeylTubeValidationError

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class ParameterGrid:
    """Nodes ``(K, n)`` and weights ``(K,)`` of a tensor-product rule."""

    nodes: np.ndarray
    weights: np.ndarray
    gauss_legendre_order: int
    trapezoid_nodes: int

    @property
    def size(self) -> int:
        return int(self.weights.size)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Weighted sum over the leading axis of ``values``."""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))


def axis_rule(lo: float, hi: float, periodic: bool, order: int, trapezoid: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre on ``[lo, hi]`` or the uniform trapezoid rule on a period."""
    width = hi - lo
    if periodic:
        nodes = lo + width * np.arange(trapezoid) / trapezoid
        return nodes, np.full(trapezoid, width / trapezoid)
    x, w = leggauss(order)
    return lo + 0.5 * width * (x + 1.0), 0.5 * width * w


def parameter_grid(
    box: Sequence[Tuple[float, float]],
    periodic: Sequence[bool],
    gauss_legendre_order: Optional[int] = None,
    trapezoid_nodes: Optional[int] = None,
) -> ParameterGrid:
    """
    Tensor product of per-axis rules.

    Args:
        box: ``(lo, hi)`` per axis
        periodic: Periodicity flag per axis
        gauss_legendre_order: Nodes per non-periodic axis (settings default)
        trapezoid_nodes: Nodes per periodic axis (settings default)
    """
    settings = get_settings()
    order = gauss_legendre_order or settings.gauss_legendre_order
    trapezoid = trapezoid_nodes or settings.trapezoid_nodes
    if order < 2 or trapezoid < 4:
        raise WeylTubeValidationError("quadrature needs order >= 2 and >= 4 periodic nodes", field="quadrature")
    if len(box) != len(periodic):
        raise WeylTubeValidationError("box and periodicity disagree", field="quadrature")
    for lo, hi in box:
        if not hi > lo:
            raise WeylTubeValidationError("empty parameter interval", field="quadrature.box", value=(lo, hi))

    rules = [axis_rule(lo, hi, p, order, trapezoid) for (lo, hi), p in zip(box, periodic)]
    meshes = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    weight_meshes = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    nodes = np.stack([mesh.ravel() for mesh in meshes], axis=1)
    weights = np.prod(np.stack([w.ravel() for w in weight_meshes], axis=1), axis=1)
    return ParameterGrid(nodes, weights, order, trapezoid)


def refined(grid: ParameterGrid, box: Sequence[Tuple[float, float]], periodic: Sequence[bool]) -> ParameterGrid:
    """The same rule with every axis refined by the refinement factor."""
    return parameter_grid(
        box,
        periodic,
        grid.gauss_legendre_order * REFINEMENT_FACTOR,
        grid.trapezoid_nodes * REFINEMENT_FACTOR,
    )
