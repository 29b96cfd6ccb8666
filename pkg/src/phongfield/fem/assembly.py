"""全局稀疏组装

三角形 t 的单元矩阵散布到全局下标 tri[t, m] * K + k。

约定：
- 三角形按下标顺序分块处理，线程池按块顺序 map
- 合并后的三元组列表与求和结果与线程数无关
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING, Callable, Sequence

import numpy as np
from scipy import sparse

from phongfield.core.config import settings
from phongfield.core.constants import BasisKind
from phongfield.core.logging_config import get_logger, get_perf_logger
from phongfield.fem.elements import ElementMatrix, sample_basis
from phongfield.fem.quadrature import QuadratureRule
from phongfield.models.field import AmbientField
from phongfield.models.mesh import OrientedMesh, TriangleMesh
from phongfield.models.patch import hat_values

if TYPE_CHECKING:
    from phongfield.fem.basis import TangentBasis

logger = get_logger(__name__)
perf_logger = get_perf_logger()

# chunk of triangle indices -> (len, 3K, 3K)
ElementFn = Callable[[np.ndarray], "ElementMatrix | np.ndarray"]


def dof_indices(triangles: np.ndarray, K: int) -> np.ndarray:
    """局部槽位 m * K + k 对应的全局自由度，形状 (T, 3K)"""
    return (triangles[:, :, None] * K + np.arange(K)).reshape(len(triangles), 3 * K)


def triangle_chunks(num_triangles: int, chunk: int | None = None) -> list[np.ndarray]:
    chunk = chunk or settings.ASSEMBLY_CHUNK
    return [
        np.arange(start, min(start + chunk, num_triangles))
        for start in range(0, num_triangles, chunk)
    ]


def _values(elem) -> np.ndarray:
    return elem.values if isinstance(elem, ElementMatrix) else np.asarray(elem)


def assemble_many(
    mesh: OrientedMesh | TriangleMesh,
    element_fn: Callable[[np.ndarray], Sequence["ElementMatrix | np.ndarray"]],
    K: int,
    count: int,
    *,
    chunk: int | None = None,
    workers: int | None = None,
    label: str = "matrix",
) -> list[sparse.csr_matrix]:
    """每块做一次单元计算，同时组装 ``count`` 个全局矩阵

    Args:
        mesh: 提供三角形下标的网格
        element_fn: 三角形下标块 -> ``count`` 批单元矩阵
        K: 每顶点自由度
        count: 每块产出的矩阵个数
        chunk: 每块三角形数（默认 settings.ASSEMBLY_CHUNK）
        workers: 线程数（默认 settings.ASSEMBLY_WORKERS）

    Returns:
        重复项已求和的 (K|V|, K|V|) CSR 矩阵列表
    """
    workers = workers or settings.ASSEMBLY_WORKERS
    triangles = mesh.triangles
    dim = K * len(mesh.vertices)
    chunks = triangle_chunks(len(triangles), chunk)
    start = time.perf_counter()

    def _local(idx: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[np.ndarray]]:
        values = [_values(e) for e in element_fn(idx)]
        dofs = dof_indices(triangles[idx], K)
        shape = (len(idx), 3 * K, 3 * K)
        rows = np.broadcast_to(dofs[:, :, None], shape).ravel()
        cols = np.broadcast_to(dofs[:, None, :], shape).ravel()
        return rows, cols, [v.ravel() for v in values]

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_local, chunks))
    else:
        parts = [_local(idx) for idx in chunks]

    if parts:
        rows = np.concatenate([p[0] for p in parts])
        cols = np.concatenate([p[1] for p in parts])
    else:
        rows = cols = np.zeros(0, dtype=np.int64)

    matrices = []
    for c in range(count):
        vals = np.concatenate([p[2][c] for p in parts]) if parts else np.zeros(0)
        matrix = sparse.coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
        matrix.sum_duplicates()
        matrices.append(matrix)

    perf_logger.info(
        f"assemble {label}: {len(triangles)} triangles, dim {dim}, "
        f"nnz {matrices[0].nnz if matrices else 0}, {time.perf_counter() - start:.3f}s"
    )
    return matrices


def assemble(
    mesh: OrientedMesh | TriangleMesh,
    element_fn: ElementFn,
    K: int,
    *,
    chunk: int | None = None,
    workers: int | None = None,
    label: str = "matrix",
) -> sparse.csr_matrix:
    """由批量单元矩阵组装一个 (K|V|, K|V|) 全局矩阵

    ``element_fn`` 把三角形下标块映射为 ElementMatrix 或 (len, 3K, 3K) 数组。
    """
    return assemble_many(
        mesh, lambda idx: (element_fn(idx),), K, 1, chunk=chunk, workers=workers, label=label
    )[0]


def lump(matrix: sparse.spmatrix) -> sparse.csr_matrix:
    """按行求和的对角集中"""
    return sparse.diags(np.asarray(matrix.sum(axis=1)).ravel()).tocsr()


def assemble_rhs(
    space: "TangentBasis",
    field: AmbientField,
    kind: BasisKind | str = BasisKind.VECTOR,
    q: QuadratureRule | None = None,
) -> np.ndarray:
    """弱形式 b_i = 网格上 <basis_i, field> 的积分

    向量场与实现后的 3D 基向量做欧氏内积；标量场与帽函数相乘。
    """
    kind = BasisKind(kind)
    q = q or space.quadrature
    K = kind.dofs_per_vertex
    mesh = space.mesh
    b = np.zeros(K * mesh.num_vertices)

    for idx in triangle_chunks(mesh.num_triangles):
        patch = space.patch(idx)
        dofs = dof_indices(mesh.triangles[idx], K)
        local = np.zeros((len(idx), 3 * K))
        for point, w in zip(q.points, q.weights):
            st = np.broadcast_to(point, (len(idx), 2))
            values = field(idx, st)
            if kind is BasisKind.SCALAR:
                values = np.asarray(values).reshape(len(idx))
                local += w * hat_values(st) * values[:, None]
            else:
                sample = sample_basis(patch, point, derivatives=False)
                local += w * np.einsum("tja,ta->tj", sample.values, values)
        local *= patch.sqrt_det_g[:, None]
        b += np.bincount(dofs.ravel(), weights=local.ravel(), minlength=b.size)
    return b
