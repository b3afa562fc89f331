"""The Lipschitz-Killing contraction ``H_d`` of a curvature tensor."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Tuple

import numpy as np

from ..config.constants import MAX_HD_DEGREE
from ..exceptions.client import WeylTubeValidationError
from ..polycore.averaging import double_factorial

Pair = Tuple[int, int]
# one contraction term in position space: sign and the (lower pair, upper pair) blocks
Term = Tuple[int, Tuple[Tuple[Pair, Pair], ...]]


def _parity(sequence: Tuple[int, ...]) -> int:
    inversions = sum(1 for a, b in itertools.combinations(sequence, 2) if a > b)
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def pair_partitions(d: int) -> Tuple[Tuple[Pair, ...], ...]:
    """All partitions of ``0..d-1`` into ascending pairs, pairs sorted by first entry."""
    if d % 2:
        return ()

    def build(rest: Tuple[int, ...]) -> List[Tuple[Pair, ...]]:
        if not rest:
            return [()]
        first, tail = rest[0], rest[1:]
        out = []
        for k, partner in enumerate(tail):
            remaining = tail[:k] + tail[k + 1 :]
            for partition in build(remaining):
                out.append(((first, partner),) + partition)
        return out

    return tuple(build(tuple(range(d))))


def coupling_sign(lower: Tuple[Pair, ...], upper: Tuple[Pair, ...]) -> int:
    """Sign of the permutation taking the concatenated lower pairs to the concatenated upper pairs."""
    flat_lower = tuple(x for pair in lower for x in pair)
    flat_upper = tuple(x for pair in upper for x in pair)
    return _parity(flat_lower) * _parity(flat_upper)


@lru_cache(maxsize=None)
def coupling_terms(d: int) -> Tuple[Term, ...]:
    """
    Unordered block sets for a ``d``-subset, in position space.

    The lower partition is kept in canonical order and every ordering of the
    upper pairs is matched against it, so each set of blocks appears once.
    """
    terms: List[Term] = []
    for lower in pair_partitions(d):
        for upper_partition in pair_partitions(d):
            for upper in itertools.permutations(upper_partition):
                blocks = tuple(zip(lower, upper))
                terms.append((coupling_sign(lower, upper), blocks))
    return tuple(terms)


def _component(R: Any, i: int, j: int, k: int, l: int) -> Any:
    if R.ndim == 4:
        return R[i, j, k, l]
    return R[..., i, j, k, l]


def contract_Hd(R: np.ndarray, n: int, d: int) -> Any:
    """
    ``H_d``: signed sum over ``d``-subsets and pair couplings of products of ``R_ij^{kl}``.

    Works on float arrays, on object arrays of ``Fraction`` and on stacks
    whose trailing four axes are the curvature indices (values then come
    back per leading index).

    Args:
        R: ``R_ij^{kl}`` indexed ``[..., i, j, k, l]``
        n: Intrinsic dimension
        d: Even degree with ``0 <= d <= n``

    Returns:
        ``H_d`` (scalar, ``Fraction`` or array)
    """
    if d % 2:
        raise WeylTubeValidationError("H_d is defined for even d only", field="d", value=d)
    if not 0 <= d <= n:
        raise WeylTubeValidationError(f"d must lie in [0, {n}]", field="d", value=d)
    if d > MAX_HD_DEGREE:
        raise WeylTubeValidationError(f"H_d is limited to d <= {MAX_HD_DEGREE}", field="d", value=d)
    R = np.asarray(R)
    if R.shape[-4:] != (n,) * 4:
        raise WeylTubeValidationError("curvature must have trailing shape (n, n, n, n)", field="R", value=R.shape)
    if d == 0:
        if R.ndim == 4:
            return Fraction(1) if R.dtype == object else 1.0
        return np.ones(R.shape[:-4])

    total: Any = 0
    terms = coupling_terms(d)
    for subset in itertools.combinations(range(n), d):
        for sign, blocks in terms:
            product: Any = sign
            for (a, b), (c, e) in blocks:
                product = product * _component(R, subset[a], subset[b], subset[c], subset[e])
            total = total + product
    return total


def lipschitz_killing_integrands(R: np.ndarray, n: int) -> Dict[int, Any]:
    """``H_d`` for every even ``d <= n``."""
    return {d: contract_Hd(R, n, d) for d in range(0, n + 1, 2)}


def identity_curvature(n: int) -> np.ndarray:
    """Exact ``R_ij^{kl} = delta_i^k delta_j^l - delta_j^k delta_i^l`` as an object array."""
    R = np.zeros((n, n, n, n), dtype=object)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        R[i, j, k, l] = Fraction(int(i == k and j == l) - int(j == k and i == l))
    return R


def identity_normalization(n: int, d: int) -> int:
    """``C(n, d) (d - 1)!!``, the value of ``H_d`` on the identity curvature."""
    return math.comb(n, d) * double_factorial(d - 1)
