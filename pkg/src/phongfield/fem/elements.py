"""标量帽函数基与输运向量基的单元矩阵

向量基：omega_{2i+k}(p) = psi_i(p) R_i(p) t_{2i+k}，R_i(p) 把角点法向 n_i
旋转到 Phong 法向 N(p)。协变导数为环境空间导数经实现微分的拉回。
所有函数都对 TrianglePatch 中的三角形批量计算。
"""

from dataclasses import dataclass

import numpy as np

from phongfield.core.exceptions import ParameterError
from phongfield.fem.quadrature import QuadratureRule, quadrature_3pt
from phongfield.geometry.endomorphism import decompose_arrays, hom_inner_arrays, weighted_projection
from phongfield.geometry.gauss_map import (
    corner_transport_derivatives,
    corner_transports,
    gauss_map,
    realization,
)
from phongfield.models.endo import Endo2
from phongfield.models.patch import HAT_GRADIENTS, BaryPoint, TrianglePatch, as_st, hat_values
from phongfield.schemas.energy import EnergySpec

_SCALAR_MASS = np.array([
    [2.0, 1.0, 1.0],
    [1.0, 2.0, 1.0],
    [1.0, 1.0, 2.0],
]) / 24.0


@dataclass(frozen=True, eq=False)
class ElementMatrix:
    """批量单元矩阵

    Attributes:
        k: 每顶点自由度（标量 1，向量 2）
        values: 形状 (T, 3k, 3k)
    """

    k: int
    values: np.ndarray

    def __post_init__(self):
        n = 3 * self.k
        if self.values.shape[-2:] != (n, n):
            raise ParameterError("element matrix shape does not match k", k=self.k)

    def __len__(self) -> int:
        return len(self.values)

    def asymmetry(self) -> float:
        return float(np.abs(self.values - np.swapaxes(self.values, -1, -2)).max(initial=0.0))


@dataclass(frozen=True, eq=False)
class BasisSample:
    """向量基在 patch 中每个三角形同一点处的取值

    Attributes:
        N: (T, 3) Phong 法向
        dN: (T, 3, 2) 其 Jacobian
        dphi_t: (T, 3, 2) 实现微分
        dphi_t_inv: (T, 2, 3) 其左逆
        values: (T, 6, 3) 实现后的基向量
        dvalues: (T, 6, 3, 2) 基向量的环境 Jacobian
        cov: (T, 6, 2, 2) 协变导数
    """

    psi: np.ndarray
    N: np.ndarray
    dN: np.ndarray
    dphi_t: np.ndarray
    dphi_t_inv: np.ndarray
    values: np.ndarray
    dvalues: np.ndarray | None
    cov: np.ndarray | None


def sample_basis(
    patch: TrianglePatch,
    p: BaryPoint | np.ndarray,
    derivatives: bool = True,
) -> BasisSample:
    """在 p 处求六个基函数的值（可选同时求导数）"""
    st = as_st(p, len(patch))
    psi = hat_values(st)
    N, dN = gauss_map(patch, st)
    dphi_t, dphi_t_inv = realization(patch, st, N=N)

    R = corner_transports(patch, N)  # (T, 3, 3, 3)
    Rt = np.einsum("tiab,tikb->tika", R, patch.frames)  # (T, 3, 2, 3)
    T = len(patch)
    values = (psi[:, :, None, None] * Rt).reshape(T, 6, 3)

    dvalues = cov = None
    if derivatives:
        dR = corner_transport_derivatives(patch, N, dN)  # (T, 3, 2, 3, 3)
        dRt = np.einsum("tisab,tikb->tikas", dR, patch.frames)  # (T, 3, 2, 3, 2)
        dvalues = (
            Rt[..., None] * HAT_GRADIENTS[None, :, None, None, :]
            + psi[:, :, None, None, None] * dRt
        ).reshape(T, 6, 3, 2)
        cov = np.einsum("tpa,tjas->tjps", dphi_t_inv, dvalues)

    return BasisSample(
        psi=psi,
        N=N,
        dN=dN,
        dphi_t=dphi_t,
        dphi_t_inv=dphi_t_inv,
        values=values,
        dvalues=dvalues,
        cov=cov,
    )


def vector_basis_eval(patch: TrianglePatch, j: int, p: BaryPoint | np.ndarray) -> np.ndarray:
    """Realized basis vector omega_j(p), shape (T, 3)."""
    return sample_basis(patch, p, derivatives=False).values[:, j]


def vector_basis_covariant_derivative(
    patch: TrianglePatch,
    j: int,
    p: BaryPoint | np.ndarray,
) -> Endo2:
    """omega_j 在 p 处的协变导数，表示为 T_p 上的自同态"""
    return Endo2(sample_basis(patch, p).cov[:, j], patch.g)


def vector_basis_covariant_derivative_fd(
    patch: TrianglePatch,
    j: int,
    p: BaryPoint | np.ndarray,
    h: float = 1e-5,
) -> Endo2:
    """``vector_basis_covariant_derivative`` 的中心差分版本（仅供测试）

    沿 s、t 对实现场差分，再经 p 处的实现微分拉回。
    """
    st = np.array(as_st(p, len(patch)))
    base = sample_basis(patch, st, derivatives=False)
    cols = []
    for axis in range(2):
        step = np.zeros(2)
        step[axis] = h
        plus = sample_basis(patch, st + step, derivatives=False).values[:, j]
        minus = sample_basis(patch, st - step, derivatives=False).values[:, j]
        cols.append((plus - minus) / (2.0 * h))
    dvalue = np.stack(cols, axis=-1)
    return Endo2(base.dphi_t_inv @ dvalue, patch.g)


# ============= 标量单元 =============

def scalar_element_mass(patch: TrianglePatch) -> ElementMatrix:
    """P1 质量矩阵闭式解：sqrt(det g) * [对角 1/12，非对角 1/24]"""
    return ElementMatrix(1, patch.sqrt_det_g[:, None, None] * _SCALAR_MASS)


def scalar_element_mass_quadrature(patch: TrianglePatch, q: QuadratureRule | None = None) -> ElementMatrix:
    q = q or quadrature_3pt()
    psi = hat_values(q.points)  # (Q, 3)
    local = np.einsum("q,qi,qj->ij", q.weights, psi, psi)
    return ElementMatrix(1, patch.sqrt_det_g[:, None, None] * local)


def scalar_element_stiffness(patch: TrianglePatch) -> ElementMatrix:
    """P1 刚度矩阵，等于嵌入三角形的 cotangent 公式"""
    values = 0.5 * patch.sqrt_det_g[:, None, None] * np.einsum(
        "ia,tab,jb->tij", HAT_GRADIENTS, patch.g_inv, HAT_GRADIENTS
    )
    return ElementMatrix(1, values)


# ============= 向量单元 =============

def sample_quadrature(
    patch: TrianglePatch,
    q: QuadratureRule | None = None,
    derivatives: bool = True,
) -> list[BasisSample]:
    q = q or quadrature_3pt()
    return [sample_basis(patch, point, derivatives=derivatives) for point in q.points]


def vector_element_mass(
    patch: TrianglePatch,
    q: QuadratureRule | None = None,
    samples: list[BasisSample] | None = None,
) -> ElementMatrix:
    """m_ij = sum_q w_q sqrt(det g) <omega_i, omega_j>."""
    q = q or quadrature_3pt()
    samples = samples or sample_quadrature(patch, q, derivatives=False)
    values = np.zeros((len(patch), 6, 6))
    for w, sample in zip(q.weights, samples):
        values += w * np.einsum("tia,tja->tij", sample.values, sample.values)
    values *= patch.sqrt_det_g[:, None, None]
    return ElementMatrix(2, values)


def _symmetrize(values: np.ndarray) -> np.ndarray:
    return 0.5 * (values + np.swapaxes(values, -1, -2))


def vector_element_stiffness(
    patch: TrianglePatch,
    q: QuadratureRule | None = None,
    spec: EnergySpec | None = None,
    samples: list[BasisSample] | None = None,
) -> ElementMatrix:
    """s_ij = sum_q w_q sqrt(det g) sum_c c_c <P_c cov_i, P_c cov_j>.

    各分量为正交投影，故加权和等于 <cov_i, sum_c c_c P_c cov_j>。
    """
    q = q or quadrature_3pt()
    spec = spec or EnergySpec.connection()
    samples = samples or sample_quadrature(patch, q)
    g = patch.g[:, None]
    g_inv = patch.g_inv[:, None]
    values = np.zeros((len(patch), 6, 6))
    for w, sample in zip(q.weights, samples):
        weighted = weighted_projection(sample.cov, g, g_inv, spec.weights)
        values += w * np.einsum(
            "tpq,tirq,trs,tjsp->tij", patch.g_inv, sample.cov, patch.g, weighted, optimize=True
        )
    values *= patch.sqrt_det_g[:, None, None]
    return ElementMatrix(2, _symmetrize(values))


def vector_element_stiffness_components(
    patch: TrianglePatch,
    q: QuadratureRule | None = None,
    samples: list[BasisSample] | None = None,
) -> tuple[ElementMatrix, ElementMatrix, ElementMatrix]:
    """一次采样得到标量、无迹、反对称三个刚度矩阵"""
    q = q or quadrature_3pt()
    samples = samples or sample_quadrature(patch, q)
    g = patch.g[:, None]
    g_inv = patch.g_inv[:, None]
    out = np.zeros((3, len(patch), 6, 6))
    for w, sample in zip(q.weights, samples):
        parts = decompose_arrays(sample.cov, g, g_inv)
        for c, part in enumerate(parts):
            out[c] += w * np.einsum(
                "tpq,tirq,trs,tjsp->tij", patch.g_inv, part, patch.g, part, optimize=True
            )
    out *= patch.sqrt_det_g[None, :, None, None]
    return tuple(ElementMatrix(2, _symmetrize(m)) for m in out)


def vector_element_direct_stiffness(
    patch: TrianglePatch,
    q: QuadratureRule | None = None,
    samples: list[BasisSample] | None = None,
) -> ElementMatrix:
    """不做分解，直接积分 tr(g^-1 cov_i^T g cov_j)"""
    q = q or quadrature_3pt()
    samples = samples or sample_quadrature(patch, q)
    values = np.zeros((len(patch), 6, 6))
    for w, sample in zip(q.weights, samples):
        values += w * hom_inner_arrays(
            sample.cov[:, :, None], sample.cov[:, None, :],
            patch.g[:, None, None], patch.g_inv[:, None, None],
        )
    values *= patch.sqrt_det_g[:, None, None]
    return ElementMatrix(2, values)
