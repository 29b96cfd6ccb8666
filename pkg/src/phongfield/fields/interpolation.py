"""满足稀疏顶点约束的最光滑切向量场"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from phongfield.core.constants import EnergyKind
from phongfield.core.exceptions import ParameterError
from phongfield.core.logging_config import get_logger
from phongfield.fem.basis import TangentBasis
from phongfield.fem.solvers import solve_constrained
from phongfield.models.field import VertexField
from phongfield.schemas.energy import EnergySpec

logger = get_logger(__name__)


def frame_coefficients(basis: TangentBasis, vertex: int, vector) -> np.ndarray:
    """约束的 (a, b) 标架系数

    二维输入直接视为标架系数；三维输入投影到顶点标架，丢弃法向分量。
    """
    v = np.asarray(vector, dtype=np.float64).ravel()
    if v.size == 2:
        return v
    if v.size == 3:
        return basis.frames[vertex] @ v
    raise ParameterError("constraint vectors must have 2 or 3 components", vertex=vertex)


def constraint_map(basis: TangentBasis, constraints: Mapping[int, np.ndarray]) -> dict[int, float]:
    """逐顶点约束展开成逐自由度取值 {2i + k: 系数}"""
    fixed: dict[int, float] = {}
    for vertex, vector in constraints.items():
        vertex = int(vertex)
        if not 0 <= vertex < basis.num_vertices:
            raise ParameterError("constraint vertex out of range", vertex=vertex)
        a, b = frame_coefficients(basis, vertex, vector)
        fixed[2 * vertex] = float(a)
        fixed[2 * vertex + 1] = float(b)
    return fixed


def interpolate_sparse(
    basis: TangentBasis,
    constraints: Mapping[int, np.ndarray],
    spec: EnergySpec | EnergyKind | str = EnergyKind.CONNECTION,
) -> VertexField:
    """在顶点约束下最小化给定能量

    Raises:
        ParameterError: 没有任何约束
        SingularSystemError: 约束系统奇异，例如约束未能固定调和场的 Hodge 能量
    """
    if not constraints:
        raise ParameterError("interpolation needs at least one constraint")
    if not isinstance(spec, EnergySpec):
        spec = EnergySpec.from_kind(spec)
    S = basis.stiffness(spec)
    fixed = constraint_map(basis, constraints)
    logger.info(f"Interpolating {len(constraints)} constraints with weights {spec.weights}")
    return VertexField(solve_constrained(S, fixed, label="interpolation"))


def energy(basis: TangentBasis, f: VertexField, spec: EnergySpec | EnergyKind | str) -> float:
    """场在某能量下的二次型 x^T S x"""
    if not isinstance(spec, EnergySpec):
        spec = EnergySpec.from_kind(spec)
    x = f.coeffs
    return float(x @ (basis.stiffness(spec) @ x))
