"""The tube integrand ``det(delta_i^j - sum_p t_p h_i^{jp})`` as a polynomial in ``t``."""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence

import numpy as np

from ..diffgeo.embedding import Signature
from ..domains.moments import MomentTable
from ..polycore import Coefficient, Poly, poly_det, tangent_block


def lowered_variables(m: int, block: Optional[Sequence[float]] = None) -> List[Poly]:
    """``t_p = eta_pq t^q`` for a diagonal normal block."""
    block = block if block is not None else [1] * m
    return [Poly.variable(m, p) * int(round(float(block[p]))) for p in range(m)]


def integrand_poly(h_raised: np.ndarray, signature: Signature | Sequence[float] | None = None) -> Poly:
    """
    Exact polynomial ``det(delta_i^j - sum_p t_p h_i^{jp})`` of degree at most ``n``.

    Args:
        h_raised: ``h_i^{jp}`` indexed ``[i, j, p]``
        signature: Ambient signature or the normal block itself; Euclidean when omitted

    Returns:
        ``Poly`` in the ``m`` normal coordinates
    """
    h = np.asarray(h_raised)
    m = h.shape[2]
    if isinstance(signature, Signature):
        block = signature.normal_block(m)
    else:
        block = signature
    return poly_det(tangent_block(h, lowered_variables(m, block)))


def degree_integrals(poly: Poly, table: MomentTable) -> Dict[int, Coefficient]:
    """``int_D (degree-d part of poly) dt`` per degree, in units of the table scale."""
    table.require(max(poly.degree, 0))
    out: Dict[int, Coefficient] = {}
    for alpha, coeff in poly.terms.items():
        d = sum(alpha)
        out[d] = out.get(d, 0) + coeff * table.shape(alpha)
    return out
