"""向量热输运

一步后向 Euler 联络 Laplacian 扩散源向量；两次标量扩散（源模长与源指示函数）
之比给出模长，再乘到单位化后的方向上。

约定：
- 向量扩散总是用一致质量矩阵
- 标量扩散默认用集中质量矩阵，扩散后的指示函数保持为正
- lumped=False 时标量扩散改用一致质量矩阵，远离源处指示函数可能为负
- |phi| 低于 HEAT_PHI_FLOOR 时截断并告警
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from phongfield.core.config import settings
from phongfield.core.constants import EnergyKind
from phongfield.core.exceptions import ParameterError
from phongfield.core.logging_config import get_logger
from phongfield.fem.basis import TangentBasis
from phongfield.fem.solvers import SpdFactor
from phongfield.fields.interpolation import frame_coefficients
from phongfield.models.field import VertexField

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class HeatResult:
    """向量热输运结果及中间扩散量

    Attributes:
        field: 输运后的向量场（方向 * 模长）
        direction: 单位化的向量扩散结果
        magnitude: 标量扩散模长 u / phi
        indicator: 扩散后的源指示函数 phi
        t: 扩散时间
    """

    field: VertexField
    direction: VertexField
    magnitude: np.ndarray
    indicator: np.ndarray
    t: float


def default_time(basis: TangentBasis) -> float:
    """平均边长的平方"""
    return basis.mesh.mesh.mean_edge_length ** 2


def _scalar_diffusion(basis: TangentBasis, t: float, rhs: np.ndarray, lumped: bool = True) -> np.ndarray:
    M = basis.scalar_mass(lumped=lumped)
    A = M + t * basis.scalar_stiffness()
    return SpdFactor(A, label="scalar heat").solve(M @ rhs)


def vector_heat(
    basis: TangentBasis,
    sources: Mapping[int, np.ndarray],
    t: float | None = None,
    lumped: bool = True,
) -> HeatResult:
    """把源向量沿曲面输运

    Args:
        basis: 网格的有限元空间
        sources: 顶点 -> 切向量（2D 标架系数或 3D 向量）
        t: 扩散时间，默认平均边长平方
        lumped: 标量扩散是否用集中质量矩阵；False 时用一致质量矩阵

    Raises:
        ParameterError: 没有源、源顶点越界或 t 不为正
    """
    if not sources:
        raise ParameterError("vector heat needs at least one source")
    t = default_time(basis) if t is None else float(t)
    if not t > 0:
        raise ParameterError("diffusion time must be positive", t=t)

    V = basis.num_vertices
    Y0 = np.zeros((V, 2))
    u0 = np.zeros(V)
    delta = np.zeros(V)
    for vertex, vector in sources.items():
        vertex = int(vertex)
        if not 0 <= vertex < V:
            raise ParameterError("source vertex out of range", vertex=vertex)
        coeffs = frame_coefficients(basis, vertex, vector)
        Y0[vertex] = coeffs
        u0[vertex] = np.linalg.norm(coeffs)
        delta[vertex] = 1.0

    M = basis.vector_mass()
    A = M + t * basis.stiffness(EnergyKind.CONNECTION)
    Y = SpdFactor(A, label="vector heat").solve(M @ Y0.ravel()).reshape(V, 2)

    scalars = _scalar_diffusion(basis, t, np.stack([u0, delta], axis=1), lumped=lumped)
    u, phi = scalars[:, 0], scalars[:, 1]

    floor = settings.HEAT_PHI_FLOOR
    small = np.abs(phi) < floor
    if small.any():
        logger.warning(
            f"vector heat: clamping {int(small.sum())} indicator values below {floor:.0e}"
        )
        phi = np.where(small, floor, phi)
    if (phi < 0).any():
        # 单源时 u = |v| * phi，负值处比值不变
        logger.warning(f"vector heat: {int((phi < 0).sum())} negative indicator values (lumped={lumped})")
    magnitude = u / phi

    norms = np.linalg.norm(Y, axis=1)
    direction = np.divide(Y, norms[:, None], out=np.zeros_like(Y), where=norms[:, None] > 0)
    return HeatResult(
        field=VertexField.from_pairs(direction * magnitude[:, None]),
        direction=VertexField.from_pairs(direction),
        magnitude=magnitude,
        indicator=phi,
        t=t,
    )


def source_labels(
    basis: TangentBasis,
    sources: Sequence[int],
    t: float | None = None,
    lumped: bool = True,
) -> np.ndarray:
    """每个顶点上扩散指示函数最大的源在 ``sources`` 中的下标"""
    sources = [int(s) for s in sources]
    if not sources:
        raise ParameterError("labeling needs at least one source")
    t = default_time(basis) if t is None else float(t)
    V = basis.num_vertices
    indicators = np.zeros((V, len(sources)))
    indicators[sources, np.arange(len(sources))] = 1.0
    diffused = _scalar_diffusion(basis, t, indicators, lumped=lumped)
    return np.argmax(diffused.reshape(V, len(sources)), axis=1)
