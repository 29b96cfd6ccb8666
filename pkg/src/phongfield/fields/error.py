"""两个切向量场之间的相对误差"""

from __future__ import annotations

import numpy as np

from phongfield.fem.assembly import triangle_chunks
from phongfield.fem.basis import TangentBasis
from phongfield.fem.quadrature import QuadratureRule
from phongfield.fields.evaluation import as_ambient
from phongfield.models.field import AmbientField, VertexField


def _ambient(basis: TangentBasis, f: AmbientField | VertexField) -> AmbientField:
    return as_ambient(basis, f) if isinstance(f, VertexField) else f


def squared_norms(
    basis: TangentBasis,
    x: AmbientField | VertexField,
    x_ref: AmbientField | VertexField,
    q: QuadratureRule | None = None,
) -> tuple[float, float, float]:
    """网格上积分得到的 (||x - x_ref||^2, ||x||^2, ||x_ref||^2)"""
    q = q or basis.quadrature
    x, x_ref = _ambient(basis, x), _ambient(basis, x_ref)
    diff = norm_x = norm_ref = 0.0
    for idx in triangle_chunks(basis.mesh.num_triangles):
        area = basis.patch(idx).sqrt_det_g
        for point, w in zip(q.points, q.weights):
            st = np.broadcast_to(point, (len(idx), 2))
            a = x(idx, st)
            b = x_ref(idx, st)
            weight = w * area
            diff += float(weight @ np.einsum("pa,pa->p", a - b, a - b))
            norm_x += float(weight @ np.einsum("pa,pa->p", a, a))
            norm_ref += float(weight @ np.einsum("pa,pa->p", b, b))
    return diff, norm_x, norm_ref


def field_error(
    basis: TangentBasis,
    x: AmbientField | VertexField,
    x_ref: AmbientField | VertexField,
    q: QuadratureRule | None = None,
) -> float | None:
    """sqrt(||x - x_ref||^2 / (||x||^2 + ||x_ref||^2)).

    两个场都为零时返回 None，由调用方抛出 UndefinedMetricError。
    E(x, -x) = sqrt(2)，取值不以 1 为上限。
    """
    diff, norm_x, norm_ref = squared_norms(basis, x, x_ref, q)
    den = norm_x + norm_ref
    if den == 0.0:
        return None
    return float(np.sqrt(diff / den))
