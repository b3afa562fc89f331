"""Haar-distributed random orthogonal matrices."""

from __future__ import annotations

from typing import Optional, Union

import numpy as np
from scipy.linalg import qr

from ..exceptions.base import DimensionMismatchError

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]


def _generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _sign_corrected_q(z: np.ndarray) -> np.ndarray:
    q, r = qr(z)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def haar_sample_orthogonal(m: int, seed: SeedLike = None) -> np.ndarray:
    """
    Draw one matrix from Haar measure on ``O(m)``.

    A Gaussian matrix is QR-factored and the columns of ``Q`` are multiplied
    by the signs of ``diag(R)``, which makes the distribution exactly Haar.

    Args:
        m: Matrix size, at least 1
        seed: Integer seed, ``SeedSequence`` or an existing generator

    Returns:
        ``(m, m)`` orthogonal matrix
    """
    if m < 1:
        raise DimensionMismatchError("orthogonal group needs m >= 1", actual=m)
    rng = _generator(seed)
    return _sign_corrected_q(rng.standard_normal((m, m)))


def haar_samples(m: int, count: int, seed: SeedLike = None, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """``count`` independent Haar samples stacked into shape ``(count, m, m)``."""
    if m < 1:
        raise DimensionMismatchError("orthogonal group needs m >= 1", actual=m)
    generator = rng if rng is not None else _generator(seed)
    gaussians = generator.standard_normal((count, m, m))
    q, r = np.linalg.qr(gaussians)
    signs = np.sign(np.diagonal(r, axis1=1, axis2=2))
    signs[signs == 0] = 1.0
    return q * signs[:, None, :]
