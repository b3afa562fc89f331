"""Embedded submanifold geometry: frames, fundamental forms and curvature."""

from .curvature import (
    CurvatureField,
    IntrinsicCurvature,
    NodeCurvature,
    christoffel_riemann,
    codazzi_residual,
    curvature_field,
    gauss_codazzi_residuals,
    gauss_riemann,
    node_curvature,
    residual_summary,
)
from .embedding import (
    Embedding,
    Jet,
    Signature,
    embedding_from_callable,
    embedding_from_sympy,
    finite_difference_jet,
)
from .frames import (
    FundamentalForms,
    frame_defect,
    fundamental_forms,
    normal_frame,
    rotate_frame,
)
from .lipschitz_killing import (
    contract_Hd,
    coupling_terms,
    identity_curvature,
    identity_normalization,
    lipschitz_killing_integrands,
    pair_partitions,
)
from .zoo import ZOO, build_embedding

__all__ = [
    "CurvatureField",
    "Embedding",
    "FundamentalForms",
    "IntrinsicCurvature",
    "Jet",
    "NodeCurvature",
    "Signature",
    "ZOO",
    "build_embedding",
    "christoffel_riemann",
    "codazzi_residual",
    "contract_Hd",
    "coupling_terms",
    "curvature_field",
    "embedding_from_callable",
    "embedding_from_sympy",
    "finite_difference_jet",
    "frame_defect",
    "fundamental_forms",
    "gauss_codazzi_residuals",
    "gauss_riemann",
    "identity_curvature",
    "identity_normalization",
    "lipschitz_killing_integrands",
    "node_curvature",
    "normal_frame",
    "pair_partitions",
    "residual_summary",
    "rotate_frame",
]
