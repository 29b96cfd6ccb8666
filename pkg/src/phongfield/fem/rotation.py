"""逐顶点 90 度旋转 J 及其满足的不变性恒等式"""

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import norm as sparse_norm

from phongfield.models.mesh import OrientedMesh


def build_J(mesh: OrientedMesh | int) -> sparse.csr_matrix:
    """绕各顶点法向旋转 90 度的块对角矩阵

    每个顶点块为 [[0, -1], [1, 0]]。标架右手（t_1 = n x t_0）时，
    J x 的实现场等于 N x（x 的实现场）。
    """
    n = mesh if isinstance(mesh, (int, np.integer)) else mesh.num_vertices
    even = 2 * np.arange(n)
    rows = np.concatenate([even, even + 1])
    cols = np.concatenate([even + 1, even])
    data = np.concatenate([-np.ones(n), np.ones(n)])
    return sparse.csr_matrix((data, (rows, cols)), shape=(2 * n, 2 * n))


def apply_J(coeffs: np.ndarray) -> np.ndarray:
    """不构造矩阵直接计算 J x；x 形状为 (2V,) 或 (2V, m)"""
    x = np.asarray(coeffs)
    pairs = x.reshape(-1, 2, *x.shape[1:])
    out = np.empty_like(pairs)
    out[:, 0] = -pairs[:, 1]
    out[:, 1] = pairs[:, 0]
    return out.reshape(x.shape)


def relative_frobenius(a: sparse.spmatrix, b: sparse.spmatrix) -> float:
    """||a - b||_F / ||a + b||_F."""
    num = sparse_norm(a - b)
    den = sparse_norm(a + b)
    return float(num / den) if den > 0 else float(num)


def conjugate(J: sparse.spmatrix, A: sparse.spmatrix) -> sparse.csr_matrix:
    """J^T A J."""
    return (J.T @ A @ J).tocsr()


def rotation_invariance(
    mass: sparse.spmatrix,
    divergence: sparse.spmatrix,
    traceless: sparse.spmatrix,
    curl: sparse.spmatrix,
) -> dict[str, float]:
    """向量空间的三个旋转恒等式

    M 与无迹刚度在 J 共轭下不变；J 交换散度刚度与旋度刚度。

    Returns:
        ``mass``: ||M - J^T M J|| / ||M + J^T M J||
        ``traceless``: 无迹刚度的同一比值
        ``div_curl``: ||T - J^T A J|| / ||T + J^T A J||，T 为散度刚度，A 为旋度刚度
    """
    J = build_J(mass.shape[0] // 2)
    return {
        "mass": relative_frobenius(mass, conjugate(J, mass)),
        "traceless": relative_frobenius(traceless, conjugate(J, traceless)),
        "div_curl": relative_frobenius(divergence, conjugate(J, curl)),
    }
