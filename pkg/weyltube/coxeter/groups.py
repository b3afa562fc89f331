"""Finite reflection groups as explicit orthogonal matrix groups."""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.linalg import cholesky, null_space

from ..config.constants import (
    ERROR_ENUMERATION_OUT_OF_SCOPE,
    EXCEPTIONAL_DEGREES,
    FIXED_ORDERS,
    UNENUMERATED_TYPES,
)
from ..config.settings import get_settings
from ..exceptions.base import EnumerationOutOfScopeError, GroupEnumerationError
from ..exceptions.client import WeylTubeValidationError
from ..models.common import GroupType

logger = structlog.get_logger(__name__)

# Coxeter matrices (chain diagrams) of the exceptional non-simply-laced types
_CHAIN_LABELS: Dict[str, Tuple[int, ...]] = {
    "H3": (5, 3),
    "H4": (5, 3, 3),
    "F4": (3, 4, 3),
}


@dataclass(frozen=True, eq=False)
class ReflectionGroup:
    """Enumerated finite reflection group acting on ``R^m``."""

    group_type: GroupType
    m: int
    label: str
    generators: Tuple[np.ndarray, ...]
    elements: Tuple[np.ndarray, ...]
    degrees: Tuple[int, ...]
    k: Optional[int] = None
    exact: bool = False
    seconds: float = field(default=0.0, compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def second_degree(self) -> float:
        """``d_2``; for rank 1 there is no second degree and every degree is allowed."""
        return self.degrees[1] if len(self.degrees) > 1 else math.inf

    def stacked(self) -> np.ndarray:
        """Elements as a float array of shape ``(order, m, m)``."""
        return np.stack([np.asarray(g, dtype=float) for g in self.elements])

    def __repr__(self) -> str:
        return f"ReflectionGroup({self.label}, order={self.order})"


def reflection_matrix(root: Sequence[float]) -> np.ndarray:
    """``I - 2 a a^T / (a . a)``."""
    a = np.asarray(root, dtype=float)
    return np.eye(a.size) - 2.0 * np.outer(a, a) / float(a @ a)


def _integer_reflection(root: Sequence[int]) -> np.ndarray:
    a = np.asarray(root, dtype=np.int64)
    norm = int(a @ a)
    outer = 2 * np.outer(a, a)
    if np.any(outer % norm):
        raise ValueError(f"root {tuple(root)} does not give an integral reflection")
    return np.eye(a.size, dtype=np.int64) - outer // norm


def coxeter_gram(labels: Sequence[int]) -> np.ndarray:
    """Gram matrix ``-cos(pi / m_ij)`` of unit simple roots for a chain diagram."""
    rank = len(labels) + 1
    gram = np.eye(rank)
    for i, label in enumerate(labels):
        gram[i, i + 1] = gram[i + 1, i] = -math.cos(math.pi / label)
    return gram


def simple_roots_from_gram(gram: np.ndarray) -> np.ndarray:
    """Rows are unit simple roots realizing ``gram`` (lower Cholesky factor)."""
    return cholesky(gram, lower=True)


def _type_a_generators(m: int) -> List[np.ndarray]:
    # permutation reflections of R^{m+1} restricted to the sum-zero hyperplane
    basis = null_space(np.ones((1, m + 1)))
    generators = []
    for i in range(m):
        root = np.zeros(m + 1)
        root[i], root[i + 1] = 1.0, -1.0
        generators.append(basis.T @ reflection_matrix(root) @ basis)
    return generators


def _type_b_generators(m: int) -> List[np.ndarray]:
    roots = []
    for i in range(m - 1):
        root = [0] * m
        root[i], root[i + 1] = 1, -1
        roots.append(root)
    last = [0] * m
    last[-1] = 1
    roots.append(last)
    return [_integer_reflection(r) for r in roots]


def _type_d_generators(m: int) -> List[np.ndarray]:
    roots = []
    for i in range(m - 1):
        root = [0] * m
        root[i], root[i + 1] = 1, -1
        roots.append(root)
    last = [0] * m
    last[-2], last[-1] = 1, 1
    roots.append(last)
    return [_integer_reflection(r) for r in roots]


def _dihedral_generators(k: int) -> List[np.ndarray]:
    angle = math.pi / k
    return [
        reflection_matrix([1.0, 0.0]),
        reflection_matrix([-math.cos(angle), math.sin(angle)]),
    ]


def _chain_generators(label: str) -> List[np.ndarray]:
    roots = simple_roots_from_gram(coxeter_gram(_CHAIN_LABELS[label]))
    return [reflection_matrix(root) for root in roots]


def classical_order(group_type: GroupType, m: int, k: Optional[int] = None) -> int:
    """Order of the group from the classical formulas."""
    kind = GroupType(group_type)
    if kind is GroupType.A:
        return math.factorial(m + 1)
    if kind is GroupType.B:
        return 2**m * math.factorial(m)
    if kind is GroupType.D:
        return 2 ** (m - 1) * math.factorial(m)
    if kind is GroupType.I2:
        return 2 * k
    return FIXED_ORDERS[kind.value]


def invariant_degrees(group_type: GroupType, m: Optional[int] = None, k: Optional[int] = None) -> Tuple[int, ...]:
    """Degrees ``d_1 <= ... <= d_m`` of the basic invariants."""
    kind = GroupType(group_type)
    if kind is GroupType.A:
        return tuple(range(2, m + 2))
    if kind is GroupType.B:
        return tuple(range(2, 2 * m + 1, 2))
    if kind is GroupType.D:
        return tuple(sorted(list(range(2, 2 * m - 1, 2)) + [m]))
    if kind is GroupType.I2:
        return tuple(sorted((2, k)))
    return EXCEPTIONAL_DEGREES[kind.value]


def group_label(group_type: GroupType, m: Optional[int] = None, k: Optional[int] = None) -> str:
    kind = GroupType(group_type)
    if kind is GroupType.I2:
        return f"I2({k})"
    if kind in (GroupType.A, GroupType.B, GroupType.D):
        return f"{kind.value}{m}"
    return kind.value


def _normalize_request(
    group_type: GroupType | str, m: Optional[int], k: Optional[int]
) -> Tuple[GroupType, int, Optional[int]]:
    text = group_type.value if isinstance(group_type, GroupType) else str(group_type).upper()
    if text in ("H3", "H4", "F4", "E6", "E7", "E8"):
        return GroupType(text), int(text[1]), None
    if text.startswith("I2") or text == "I":
        if k is None and text not in ("I2", "I"):
            k = int(text[2:].strip("()"))
        if k is None or k < 3:
            raise WeylTubeValidationError("dihedral type needs k >= 3", field="k", value=k)
        return GroupType.I2, 2, int(k)
    if text[:1] in ("A", "B", "D"):
        if m is None and len(text) > 1:
            m = int(text[1:])
        kind = GroupType(text[:1])
        minimum = {GroupType.A: 1, GroupType.B: 2, GroupType.D: 3}[kind]
        if m is None or m < minimum:
            raise WeylTubeValidationError(
                f"type {kind.value} needs rank m >= {minimum}", field="m", value=m
            )
        return kind, int(m), None
    raise WeylTubeValidationError("unsupported reflection group type", field="type", value=group_type)


def _closure(generators: Sequence[np.ndarray], tolerance: float, integral: bool) -> List[np.ndarray]:
    """Breadth-first closure of the generators under left multiplication."""
    m = generators[0].shape[0]
    identity = np.eye(m, dtype=np.int64 if integral else float)

    def key(matrix: np.ndarray) -> bytes:
        if integral:
            return matrix.tobytes()
        return np.rint(matrix / tolerance).astype(np.int64).tobytes()

    seen = {key(identity)}
    elements = [identity]
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for generator in generators:
            product = generator @ current
            product_key = key(product)
            if product_key not in seen:
                seen.add(product_key)
                elements.append(product)
                queue.append(product)
    return elements


def build_group(
    group_type: GroupType | str,
    m: Optional[int] = None,
    k: Optional[int] = None,
    *,
    tolerance: Optional[float] = None,
) -> ReflectionGroup:
    """
    Enumerate a finite reflection group from its simple reflections.

    Args:
        group_type: ``A``, ``B``, ``D`` (with ``m``), ``I2`` (with ``k``), ``H3``, ``H4``, ``F4``;
            strings such as ``"B3"`` or ``"I2(5)"`` are accepted
        m: Rank for the infinite families
        k: Dihedral parameter
        tolerance: Rounding granularity of the deduplication key

    Returns:
        ReflectionGroup with all elements enumerated

    Raises:
        EnumerationOutOfScopeError: For E6, E7, E8
        GroupEnumerationError: If the closure misses the classical order
    """
    kind, rank, k = _normalize_request(group_type, m, k)
    if kind.value in UNENUMERATED_TYPES:
        raise EnumerationOutOfScopeError(kind.value, ERROR_ENUMERATION_OUT_OF_SCOPE)
    tolerance = tolerance or get_settings().group_round_tolerance
    label = group_label(kind, rank, k)

    started = time.perf_counter()
    if kind is GroupType.A:
        generators = _type_a_generators(rank)
    elif kind is GroupType.B:
        generators = _type_b_generators(rank)
    elif kind is GroupType.D:
        generators = _type_d_generators(rank)
    elif kind is GroupType.I2:
        generators = _dihedral_generators(k)
    else:
        generators = _chain_generators(kind.value)
    integral = all(g.dtype == np.int64 for g in generators)
    elements = _closure(generators, tolerance, integral)
    seconds = time.perf_counter() - started

    expected = classical_order(kind, rank, k)
    if len(elements) != expected:
        raise GroupEnumerationError(label, len(elements), expected)

    logger.info("Group enumerated", type=label, order=len(elements), seconds=round(seconds, 3))
    return ReflectionGroup(
        group_type=kind,
        m=rank,
        label=label,
        generators=tuple(generators),
        elements=tuple(elements),
        degrees=invariant_degrees(kind, rank, k),
        k=k,
        exact=integral,
        seconds=seconds,
    )
