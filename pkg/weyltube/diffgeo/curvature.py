"""Christoffel symbols, intrinsic Riemann tensor and the Gauss/Codazzi residuals."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from ..config.settings import get_settings
from ..utils.sample_slicer import map_chunks
from .embedding import Embedding, Jet
from .frames import FundamentalForms, fundamental_forms, normal_frame
from .lipschitz_killing import lipschitz_killing_integrands

logger = structlog.get_logger(__name__)


def metric_derivatives(jet: Jet, eta: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    ``g_ij``, ``d_k g_ij`` and ``d_l d_k g_ij`` by the chain rule on the jet.

    Returns arrays indexed ``[i, j]``, ``[k, i, j]`` and ``[l, k, i, j]``.
    """
    J, H, T = jet.d1, jet.d2, jet.d3
    g = np.einsum("ai,a,aj->ij", J, eta, J)
    dg = np.einsum("aki,a,aj->kij", H, eta, J) + np.einsum("ai,a,akj->kij", J, eta, H)
    ddg = (
        np.einsum("alki,a,aj->lkij", T, eta, J)
        + np.einsum("aki,a,alj->lkij", H, eta, H)
        + np.einsum("ali,a,akj->lkij", H, eta, H)
        + np.einsum("ai,a,alkj->lkij", J, eta, T)
    )
    return g, dg, ddg


@dataclass(frozen=True)
class IntrinsicCurvature:
    """Levi-Civita data at one node; ``gamma[k, i, j] = Gamma_ij^k``."""

    gamma: np.ndarray
    riemann: np.ndarray  # [i, j, k, l] = R_ij^{kl}

    @property
    def scalar(self) -> float:
        """``S = sum_{i,j} R_ij^{ij}``."""
        return float(np.einsum("ijij->", self.riemann))


def christoffel_riemann_from_metric(g: np.ndarray, dg: np.ndarray, ddg: np.ndarray) -> IntrinsicCurvature:
    """
    Christoffel symbols and ``R_ij^{kl}`` from the metric and its first two derivatives.

    Uses ``R^l_{kij} = d_i Gamma^l_{kj} - d_j Gamma^l_{ki} + Gamma^l_{ip} Gamma^p_{kj}
    - Gamma^l_{jp} Gamma^p_{ki}`` and raises with ``R_ij^{kl} = sum_n g^{ln} R^k_{nij}``.
    """
    ginv = np.linalg.inv(g)
    # first kind: gamma1[l, i, j] = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    gamma1 = 0.5 * (dg.transpose(2, 0, 1) + dg.transpose(2, 1, 0) - dg)
    gamma = np.einsum("kl,lij->kij", ginv, gamma1)

    dginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
    dgamma1 = 0.5 * (
        ddg.transpose(0, 3, 1, 2) + ddg.transpose(0, 3, 2, 1) - ddg
    )  # [m, l, i, j]
    dgamma = np.einsum("mkl,lij->mkij", dginv, gamma1) + np.einsum("kl,mlij->mkij", ginv, dgamma1)

    # rud[l, k, i, j] = R^l_{kij}
    rud = (
        np.einsum("ilkj->lkij", dgamma)
        - np.einsum("jlki->lkij", dgamma)
        + np.einsum("lip,pkj->lkij", gamma, gamma)
        - np.einsum("ljp,pki->lkij", gamma, gamma)
    )
    riemann = np.einsum("ln,knij->ijkl", ginv, rud)
    return IntrinsicCurvature(gamma=gamma, riemann=riemann)


def christoffel_riemann(embedding: Embedding, u: Sequence[float], jet: Optional[Jet] = None) -> IntrinsicCurvature:
    """
    Christoffel symbols and intrinsic Riemann tensor at ``u`` from the metric alone.

    Metric derivatives come from the embedding jet (analytic for the zoo,
    finite differences otherwise); the second fundamental form is not used.
    """
    u = np.asarray(u, dtype=float)
    jet = jet if jet is not None else embedding.jet(u)
    eta = np.asarray(embedding.signature.eta, dtype=float)
    g, dg, ddg = metric_derivatives(jet, eta)
    return christoffel_riemann_from_metric(0.5 * (g + g.T), dg, ddg)


def gauss_riemann(h_raised: np.ndarray, block: np.ndarray) -> np.ndarray:
    """
    ``R_ij^{kl} = h_i^k . h_j^l - h_j^k . h_i^l`` with the normal dot weighted by ``eta_pp``.

    Generic over float and object (exact) arrays.
    """
    h = np.asarray(h_raised)
    if h.dtype != object:
        first = np.einsum("ikp,p,jlp->ijkl", h, np.asarray(block, dtype=float), h)
        return first - first.transpose(1, 0, 2, 3)
    n, _, m = h.shape
    out = np.zeros((n, n, n, n), dtype=object)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        out[i, j, k, l] = sum(
            block[p] * (h[i, k, p] * h[j, l, p] - h[j, k, p] * h[i, l, p]) for p in range(m)
        )
    return out


def _axis_steps(embedding: Embedding, u: np.ndarray) -> Tuple[np.ndarray, bool]:
    widths = np.array([hi - lo for lo, hi in embedding.box])
    steps = 10.0 * get_settings().fd_step * widths
    clamped = False
    for axis, periodic in enumerate(embedding.periodic):
        if periodic:
            continue
        lo, hi = embedding.box[axis]
        room = min(u[axis] - lo, hi - u[axis]) / 2.0
        if steps[axis] > room:
            steps[axis] = max(room, 1e-8 * widths[axis])
            clamped = True
    return steps, clamped


def _frame_fields(embedding: Embedding, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    jet = embedding.jet(v)
    forms = fundamental_forms(embedding, v, jet=jet)
    return forms.h, forms.frame


def codazzi_residual(
    embedding: Embedding,
    u: Sequence[float],
    forms: FundamentalForms,
    gamma: np.ndarray,
) -> Tuple[float, bool]:
    """
    Max-norm of the Codazzi-Mainardi equations with normal-connection terms.

    ``d_k h_ij^p - d_i h_kj^p + sum_q (w_kq^p h_ij^q - w_iq^p h_kj^q)
    - Gamma_kj^l h_il^p + Gamma_ij^l h_kl^p`` where
    ``w_kq^p = eta_pp (d_k n_q . n_p)``. Derivatives of ``h`` and of the
    frame are fourth-order central differences of the frame field.

    Returns:
        (residual, clamped) where ``clamped`` flags a shrunk stencil
    """
    u = np.asarray(u, dtype=float)
    n = embedding.n
    eta = np.asarray(embedding.signature.eta, dtype=float)
    block = forms.normal_block
    steps, clamped = _axis_steps(embedding, u)

    dh = np.empty((n,) + forms.h.shape)  # [k, i, j, p]
    dframe = np.empty((n,) + forms.frame.shape)  # [k, q, a]
    for k in range(n):
        e = np.zeros(n)
        e[k] = steps[k]
        samples = [_frame_fields(embedding, u + s * e) for s in (-2, -1, 1, 2)]
        weights = (1.0, -8.0, 8.0, -1.0)
        dh[k] = sum(w * s[0] for w, s in zip(weights, samples)) / (12 * steps[k])
        dframe[k] = sum(w * s[1] for w, s in zip(weights, samples)) / (12 * steps[k])

    omega = np.einsum("kqa,a,pa->kqp", dframe, eta, forms.frame) * block[None, None, :]
    h = forms.h
    term = (
        dh
        + np.einsum("kqp,ijq->kijp", omega, h)
        + np.einsum("lij,klp->kijp", gamma, h)
    )
    # residual[k, i, j, p] = term[k, i, j, p] - term[i, k, j, p] after cancelling Gamma_ki
    residual = term - term.transpose(1, 0, 2, 3)
    return float(np.max(np.abs(residual))) if residual.size else 0.0, clamped


@dataclass(frozen=True)
class NodeCurvature:
    """Everything computed at one node."""

    u: np.ndarray
    forms: FundamentalForms
    intrinsic: IntrinsicCurvature
    extrinsic_riemann: np.ndarray
    hd: Dict[int, float]
    clamped: bool = False


def node_curvature(embedding: Embedding, u: Sequence[float]) -> NodeCurvature:
    u = np.asarray(u, dtype=float)
    jet = embedding.jet(u)
    frame = normal_frame(embedding, u, jet)
    forms = fundamental_forms(embedding, u, jet=jet, frame=frame)
    intrinsic = christoffel_riemann(embedding, u, jet)
    extrinsic = gauss_riemann(forms.h_raised, forms.normal_block)
    hd = {d: float(v) for d, v in lipschitz_killing_integrands(intrinsic.riemann, embedding.n).items()}
    return NodeCurvature(u, forms, intrinsic, extrinsic, hd, clamped=jet.clamped)


def gauss_codazzi_residuals(embedding: Embedding, u: Sequence[float]) -> Tuple[float, float]:
    """
    Max-norm residuals of the Gauss and Codazzi equations at ``u``.

    The Gauss residual compares the Christoffel-path ``R_ij^{kl}`` with the
    one built from the second fundamental form.
    """
    node = node_curvature(embedding, u)
    gauss = float(np.max(np.abs(node.intrinsic.riemann - node.extrinsic_riemann)))
    codazzi, _ = codazzi_residual(embedding, u, node.forms, node.intrinsic.gamma)
    return gauss, codazzi


@dataclass(frozen=True)
class CurvatureField:
    """Per-node geometry stacked over a grid of parameter points."""

    nodes: np.ndarray  # (K, n)
    g: np.ndarray  # (K, n, n)
    ginv: np.ndarray
    sqrt_det_g: np.ndarray  # (K,)
    frames: np.ndarray  # (K, m, N)
    h: np.ndarray  # (K, n, n, m)
    h_raised: np.ndarray
    gamma: np.ndarray  # (K, n, n, n)
    riemann: np.ndarray  # (K, n, n, n, n)
    extrinsic_riemann: np.ndarray
    hd: Dict[int, np.ndarray] = field(default_factory=dict)
    clamped: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))

    @property
    def size(self) -> int:
        return int(self.nodes.shape[0])

    @property
    def scalar(self) -> np.ndarray:
        return np.einsum("kijij->k", self.riemann)

    def gauss_residual(self) -> float:
        return float(np.max(np.abs(self.riemann - self.extrinsic_riemann)))


def curvature_field(embedding: Embedding, nodes: np.ndarray, threads: Optional[int] = None) -> CurvatureField:
    """Evaluate ``node_curvature`` over ``nodes`` (a parallel map) and stack the results."""
    nodes = np.atleast_2d(np.asarray(nodes, dtype=float))
    threads = threads if threads is not None else get_settings().threads
    results: List[NodeCurvature] = map_chunks(lambda u: node_curvature(embedding, u), list(nodes), threads)
    degrees = sorted(results[0].hd) if results else []
    field_ = CurvatureField(
        nodes=nodes,
        g=np.stack([r.forms.g for r in results]),
        ginv=np.stack([r.forms.ginv for r in results]),
        sqrt_det_g=np.array([r.forms.sqrt_det_g for r in results]),
        frames=np.stack([r.forms.frame for r in results]),
        h=np.stack([r.forms.h for r in results]),
        h_raised=np.stack([r.forms.h_raised for r in results]),
        gamma=np.stack([r.intrinsic.gamma for r in results]),
        riemann=np.stack([r.intrinsic.riemann for r in results]),
        extrinsic_riemann=np.stack([r.extrinsic_riemann for r in results]),
        hd={d: np.array([r.hd[d] for r in results]) for d in degrees},
        clamped=np.array([r.clamped for r in results], dtype=bool),
    )
    logger.debug("Curvature field built", manifold=embedding.name, nodes=field_.size)
    return field_


def residual_summary(embedding: Embedding, nodes: np.ndarray) -> Dict[str, float]:
    """Worst Gauss/Codazzi residuals and scalar curvature range over ``nodes``."""
    gauss_worst, codazzi_worst = 0.0, 0.0
    scalars = []
    clamped = False
    for u in np.atleast_2d(nodes):
        node = node_curvature(embedding, u)
        gauss_worst = max(gauss_worst, float(np.max(np.abs(node.intrinsic.riemann - node.extrinsic_riemann))))
        codazzi, was_clamped = codazzi_residual(embedding, u, node.forms, node.intrinsic.gamma)
        codazzi_worst = max(codazzi_worst, codazzi)
        clamped = clamped or was_clamped or node.clamped
        scalars.append(node.intrinsic.scalar)
    summary = {
        "gauss_residual": gauss_worst,
        "codazzi_residual": codazzi_worst,
        "scalar_min": float(min(scalars)) if scalars else math.nan,
        "scalar_max": float(max(scalars)) if scalars else math.nan,
        "nodes": float(len(scalars)),
        "clamped": float(clamped),
    }
    logger.info("Residuals computed", manifold=embedding.name, **summary)
    return summary
