"""谱向量场与特征空间的散度分级

约定：
- 特征值升序；近简并的连续特征值组成一个簇（cluster），按簇整体分级
- 分级后每对为 (x_i, J x_i)，J x_i 经 M 投影回原特征空间
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import sparse

from phongfield.core.config import settings
from phongfield.core.constants import EigenConfig, EnergyKind
from phongfield.core.exceptions import OddEigenspaceError, ParameterError
from phongfield.core.logging_config import get_logger
from phongfield.fem.basis import TangentBasis
from phongfield.fem.rotation import apply_J
from phongfield.fem.solvers import EigenResult, smallest_generalized_eigs
from phongfield.schemas.energy import EnergySpec

logger = get_logger(__name__)


def eigenfields(
    basis: TangentBasis,
    spec: EnergySpec | EnergyKind | str,
    k: int,
    lumped: bool = False,
    config: EigenConfig | None = None,
) -> EigenResult:
    """能量刚度矩阵相对向量质量矩阵的最小 k 个特征对"""
    if not isinstance(spec, EnergySpec):
        spec = EnergySpec.from_kind(spec)
    return smallest_generalized_eigs(
        basis.stiffness(spec),
        basis.vector_mass(lumped=lumped),
        k,
        config=config,
        label=f"vector pencil {spec.weights}",
    )


def rayleigh_quotients(A: sparse.spmatrix, M: sparse.spmatrix, X: np.ndarray) -> np.ndarray:
    """逐列 Rayleigh 商 x^T A x / x^T M x"""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    num = np.einsum("ij,ij->j", X, A @ X)
    den = np.einsum("ij,ij->j", X, M @ X)
    return num / den


def eigen_clusters(
    values: np.ndarray,
    rtol: float | None = None,
    atol: float | None = None,
) -> list[slice]:
    """把升序特征值切分为近简并簇

    相邻的 a, b 满足 |b - a| <= rtol * |a + b| + atol * max|lambda| 时属于同一簇。

    Args:
        values: 升序特征值
        rtol: 相对间隙阈值，默认 settings.EIGEN_CLUSTER_RTOL
        atol: 相对最大特征值的绝对阈值，默认 settings.EIGEN_CLUSTER_ATOL

    Returns:
        覆盖全部下标的连续切片列表
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        return []
    rtol = settings.EIGEN_CLUSTER_RTOL if rtol is None else rtol
    atol = settings.EIGEN_CLUSTER_ATOL if atol is None else atol
    scale = float(np.abs(v).max())
    joined = np.abs(np.diff(v)) <= rtol * np.abs(v[1:] + v[:-1]) + atol * scale
    starts = [0, *(np.flatnonzero(~joined) + 1).tolist()]
    stops = [*starts[1:], v.size]
    return [slice(a, b) for a, b in zip(starts, stops)]


@dataclass(frozen=True, eq=False)
class GradedEigenspace:
    """按 (x_i, J x_i) 成对排列的特征空间基

    Attributes:
        vectors: (dim, 2k)；每对第一个在剩余子空间中散度能量最小
        divergence: (k,) 每对第一个向量的散度能量
    """

    vectors: np.ndarray
    divergence: np.ndarray


def grade_eigenspace(basis: TangentBasis, X: np.ndarray) -> GradedEigenspace:
    """按散度能量重排一个特征空间的基

    求解约化广义问题 (X^T T X) c = lambda (X^T M X) c，T 为散度刚度；
    取最小的 k 个 c_i，输出 {X c_i, P J X c_i}，P 为到 span(X) 的 M 正交投影。

    Raises:
        ParameterError: X 形状不是 (2|V|, m)
        OddEigenspaceError: m 为奇数
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != basis.dim:
        raise ParameterError("eigenspace must have shape (2|V|, m)", shape=list(X.shape))
    m_cols = X.shape[1]
    if m_cols % 2:
        raise OddEigenspaceError(m_cols)
    k = m_cols // 2

    M = basis.vector_mass()
    T = basis.stiffness(EnergyKind.DIVERGENCE)
    m = X.T @ (M @ X)
    m = 0.5 * (m + m.T)
    t = X.T @ (T @ X)
    t = 0.5 * (t + t.T)
    values, C = scipy.linalg.eigh(t, m, subset_by_index=[0, k - 1])

    first = X @ C
    rotated = apply_J(first)
    # 投影回 span(X)
    rotated = X @ np.linalg.solve(m, X.T @ (M @ rotated))
    out = np.empty((basis.dim, m_cols))
    out[:, 0::2] = first
    out[:, 1::2] = rotated
    logger.debug(f"Graded eigenspace of dimension {m_cols}: divergence {np.round(values, 6)}")
    return GradedEigenspace(vectors=out, divergence=values)


@dataclass(frozen=True, eq=False)
class GradedSpectrum:
    """逐簇分级后的特征场

    Attributes:
        vectors: (dim, k) 分级后的列
        cluster: (k,) 每列所属簇编号
        divergence: (k,) 每列的散度 Rayleigh 商 x^T T x / x^T M x
    """

    vectors: np.ndarray
    cluster: np.ndarray
    divergence: np.ndarray


def grade_spectrum(
    basis: TangentBasis,
    result: EigenResult,
    rtol: float | None = None,
    atol: float | None = None,
) -> GradedSpectrum:
    """把特征对按近简并簇分组，逐簇调用 grade_eigenspace

    Raises:
        OddEigenspaceError: 某个簇的维数为奇数
    """
    clusters = eigen_clusters(result.values, rtol, atol)
    blocks: list[np.ndarray] = []
    labels: list[int] = []
    for c, block in enumerate(clusters):
        size = block.stop - block.start
        if size % 2:
            raise OddEigenspaceError(size, start=block.start)
        blocks.append(grade_eigenspace(basis, result.vectors[:, block]).vectors)
        labels.extend([c] * size)

    vectors = np.concatenate(blocks, axis=1)
    divergence = rayleigh_quotients(basis.stiffness(EnergyKind.DIVERGENCE), basis.vector_mass(), vectors)
    logger.info(f"Graded {len(result)} eigenfields in {len(clusters)} clusters")
    return GradedSpectrum(vectors=vectors, cluster=np.asarray(labels, dtype=np.int64), divergence=divergence)


def j_pair_defects(basis: TangentBasis, result: EigenResult) -> np.ndarray:
    """J x_{2i} 去掉 span{x_{2i}, x_{2i+1}} 分量后的 M 范数

    数值小说明特征对按 90 度旋转成对出现。
    """
    M = basis.vector_mass()
    X = result.vectors
    defects = []
    for i in range(X.shape[1] // 2):
        pair = X[:, 2 * i:2 * i + 2]
        y = apply_J(pair[:, 0])
        coeffs = np.linalg.solve(pair.T @ (M @ pair), pair.T @ (M @ y))
        r = y - pair @ coeffs
        defects.append(np.sqrt(max(float(r @ (M @ r)), 0.0)))
    return np.asarray(defects)


def pair_gaps(values: np.ndarray) -> np.ndarray:
    """每对的 |lambda_{2i+1} - lambda_{2i}| / |lambda_{2i+1} + lambda_{2i}|"""
    v = np.asarray(values, dtype=np.float64)
    n = len(v) // 2
    a, b = v[0:2 * n:2], v[1:2 * n:2]
    den = np.abs(a + b)
    return np.abs(b - a) / np.where(den > 0, den, 1.0)
