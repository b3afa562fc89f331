"""Normal frames and the first and second fundamental forms."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
import structlog
from scipy.linalg import null_space

from ..config.constants import (
    ERROR_FRAME_BREAKDOWN,
    FRAME_BREAKDOWN_TOLERANCE,
    FRAME_TOLERANCE,
)
from ..exceptions.base import FrameBreakdownError, ImmersionError
from .embedding import Embedding, Jet

logger = structlog.get_logger(__name__)


def _tangent_projector(jet: Jet, eta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Induced metric ``g = J^T eta J`` and the eta-orthogonal projector onto the normal space."""
    J = jet.d1
    g = J.T @ (eta[:, None] * J)
    ginv = np.linalg.inv(g)
    projector = np.eye(J.shape[0]) - J @ ginv @ J.T @ np.diag(eta)
    return g, projector


def _check_metric(g: np.ndarray, u: Sequence[float]) -> None:
    eigenvalues = np.linalg.eigvalsh(0.5 * (g + g.T))
    if eigenvalues.min() <= FRAME_BREAKDOWN_TOLERANCE * max(1.0, abs(eigenvalues.max())):
        raise ImmersionError(u)


@lru_cache(maxsize=64)
def reference_normals(embedding: Embedding) -> np.ndarray:
    """
    Fixed normal basis at the box center, ordered spacelike first.

    Used as Gram-Schmidt candidates for embeddings without their own.
    """
    center = embedding.center
    jet = embedding.jet(center)
    eta = np.asarray(embedding.signature.eta, dtype=float)
    g = jet.d1.T @ (eta[:, None] * jet.d1)
    _check_metric(g, center)
    basis = null_space(jet.d1.T * eta[None, :])  # columns eta-orthogonal to the tangents
    gram = basis.T @ (eta[:, None] * basis)
    values, vectors = np.linalg.eigh(gram)
    order = np.argsort(-values)
    rotated = basis @ vectors[:, order]
    for k in range(rotated.shape[1]):
        pivot = np.argmax(np.abs(rotated[:, k]))
        if rotated[pivot, k] < 0:
            rotated[:, k] = -rotated[:, k]
    return rotated.T


def normal_frame(embedding: Embedding, u: Sequence[float], jet: Optional[Jet] = None) -> np.ndarray:
    """
    Orthonormal normal frame at ``u`` with ``n_p . n_q = eta_pq``.

    The candidates (the embedding's own, or the center reference basis) are
    stripped of their tangent parts and Gram-Schmidt orthonormalized in the
    ambient signature. The sign of each normalized vector must match the
    normal block ``diag(1, ..., 1, -1)``.

    Args:
        embedding: Embedding to frame
        u: Parameter point
        jet: Precomputed jet at ``u``

    Returns:
        ``(m, n + m)`` array whose rows are ``n_1 .. n_m``

    Raises:
        ImmersionError: If the induced metric is not positive definite
        FrameBreakdownError: On a null or dependent normal direction
    """
    u = np.asarray(u, dtype=float)
    jet = jet if jet is not None else embedding.jet(u)
    eta = np.asarray(embedding.signature.eta, dtype=float)
    g, projector = _tangent_projector(jet, eta)
    _check_metric(g, u)

    if embedding.candidates is not None:
        candidates = np.asarray(embedding.candidates(u), dtype=float)
    else:
        candidates = reference_normals(embedding)
    block = embedding.signature.normal_block(embedding.m)

    frame = np.empty((embedding.m, embedding.ambient_dimension))
    for p in range(embedding.m):
        v = projector @ candidates[p]
        for q in range(p):
            v = v - block[q] * float(np.sum(v * eta * frame[q])) * frame[q]
        norm2 = float(np.sum(v * eta * v))
        scale = float(np.sum(candidates[p] ** 2)) or 1.0
        if abs(norm2) <= FRAME_BREAKDOWN_TOLERANCE * scale:
            raise FrameBreakdownError(u, f"{ERROR_FRAME_BREAKDOWN}: null normal direction {p + 1}")
        if np.sign(norm2) != block[p]:
            raise FrameBreakdownError(u, f"{ERROR_FRAME_BREAKDOWN}: normal {p + 1} has the wrong causal type")
        frame[p] = v / np.sqrt(abs(norm2))
    return frame


def frame_defect(embedding: Embedding, u: Sequence[float], frame: np.ndarray, jet: Optional[Jet] = None) -> float:
    """Max of ``|n_p . n_q - eta_pq|`` and ``|d_i r . n_p|``."""
    jet = jet if jet is not None else embedding.jet(np.asarray(u, dtype=float))
    eta = np.asarray(embedding.signature.eta, dtype=float)
    gram = frame @ (eta[:, None] * frame.T)
    block = np.diag(embedding.signature.normal_block(embedding.m))
    tangency = jet.d1.T @ (eta[:, None] * frame.T)
    return float(max(np.max(np.abs(gram - block)), np.max(np.abs(tangency))))


@dataclass(frozen=True)
class FundamentalForms:
    """Metric data and second fundamental form at one node."""

    u: np.ndarray
    g: np.ndarray  # (n, n)
    ginv: np.ndarray  # (n, n)
    sqrt_det_g: float
    frame: np.ndarray  # (m, N)
    h: np.ndarray  # (n, n, m)  h_ij^p
    h_raised: np.ndarray  # (n, n, m)  [i, j, p] = h_i^{jp}
    normal_block: np.ndarray  # (m,)


def second_fundamental_form(jet: Jet, frame: np.ndarray, eta: np.ndarray, block: np.ndarray) -> np.ndarray:
    """``h_ij^p = eta^pp (d_i d_j r . n_p)`` with the dot taken in the ambient signature."""
    h = np.einsum("aij,a,pa->ijp", jet.d2, eta, frame)
    return h * block[None, None, :]


def fundamental_forms(
    embedding: Embedding,
    u: Sequence[float],
    *,
    jet: Optional[Jet] = None,
    frame: Optional[np.ndarray] = None,
) -> FundamentalForms:
    """
    Induced metric and second fundamental form at ``u``.

    Raising uses ``h_i^{jp} = sum_k g^{jk} h_ki^p``.

    Raises:
        ImmersionError: If ``g`` is not positive definite
    """
    u = np.asarray(u, dtype=float)
    jet = jet if jet is not None else embedding.jet(u)
    frame = frame if frame is not None else normal_frame(embedding, u, jet)
    eta = np.asarray(embedding.signature.eta, dtype=float)
    block = embedding.signature.normal_block(embedding.m)

    g = jet.d1.T @ (eta[:, None] * jet.d1)
    g = 0.5 * (g + g.T)
    _check_metric(g, u)
    ginv = np.linalg.inv(g)
    h = second_fundamental_form(jet, frame, eta, block)
    h = 0.5 * (h + h.transpose(1, 0, 2))
    h_raised = np.einsum("jk,kip->ijp", ginv, h)
    if FRAME_TOLERANCE < frame_defect(embedding, u, frame, jet):
        logger.debug("Frame defect above tolerance", u=u.tolist())
    return FundamentalForms(
        u=u,
        g=g,
        ginv=ginv,
        sqrt_det_g=float(np.sqrt(np.linalg.det(g))),
        frame=frame,
        h=h,
        h_raised=h_raised,
        normal_block=block,
    )


def rotate_frame(forms: FundamentalForms, rotation: np.ndarray) -> FundamentalForms:
    """
    Replace ``n_p`` by ``sum_q Q_pq n_q`` for a constant ``Q`` preserving the normal block.

    ``h`` transforms as ``h^p -> sum_q eta^pp Q_pq eta_qq h^q``.
    """
    Q = np.asarray(rotation, dtype=float)
    block = forms.normal_block
    mix = block[:, None] * Q * block[None, :]
    return FundamentalForms(
        u=forms.u,
        g=forms.g,
        ginv=forms.ginv,
        sqrt_det_g=forms.sqrt_det_g,
        frame=Q @ forms.frame,
        h=np.einsum("pq,ijq->ijp", mix, forms.h),
        h_raised=np.einsum("pq,ijq->ijp", mix, forms.h_raised),
        normal_block=block,
    )
