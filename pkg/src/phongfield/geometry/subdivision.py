"""闭三角网格的 Loop 细分"""

import numpy as np
from scipy import sparse

from phongfield.core.constants import NormalMode
from phongfield.core.exceptions import BoundaryUnsupportedError
from phongfield.core.logging_config import get_logger
from phongfield.geometry.normals import compute_vertex_normals, loop_beta
from phongfield.models.mesh import OrientedMesh, TriangleMesh

logger = get_logger(__name__)


def subdivision_matrix(mesh: TriangleMesh) -> sparse.csr_matrix:
    """旧位置到新位置的稀疏 (V + E, V) 矩阵

    第 0..V-1 行为重新定位的原顶点，第 V + e 行为边 e 上的新点。
    """
    if not mesh.is_closed:
        raise BoundaryUnsupportedError("loop_subdivide", mesh.boundary_edge_count)

    V = mesh.num_vertices
    E = mesh.num_edges
    edges = mesh.edges
    tris = mesh.triangles
    tri_edges = mesh.triangle_edges

    valence = np.bincount(edges.ravel(), minlength=V)
    beta = np.array([loop_beta(n) if n > 0 else 0.0 for n in valence])

    rows = [np.arange(V), edges[:, 0], edges[:, 1]]
    cols = [np.arange(V), edges[:, 1], edges[:, 0]]
    vals = [1.0 - valence * beta, beta[edges[:, 0]], beta[edges[:, 1]]]

    # 边点：两端点 3/8，两个对角顶点 1/8
    rows += [V + np.arange(E), V + np.arange(E)]
    cols += [edges[:, 0], edges[:, 1]]
    vals += [np.full(E, 3.0 / 8.0), np.full(E, 3.0 / 8.0)]
    opposite = tris[:, [2, 0, 1]]  # corner opposite half-edge j
    rows.append(V + tri_edges.ravel())
    cols.append(opposite.ravel())
    vals.append(np.full(tri_edges.size, 1.0 / 8.0))

    return sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(V + E, V),
    )


def subdivide_connectivity(mesh: TriangleMesh) -> np.ndarray:
    """每个三角形一分为四，保持定向"""
    V = mesh.num_vertices
    tris = mesh.triangles
    m = V + mesh.triangle_edges  # m[:, 0] on (a, b), m[:, 1] on (b, c), m[:, 2] on (c, a)
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    m_ab, m_bc, m_ca = m[:, 0], m[:, 1], m[:, 2]
    new = np.stack(
        [
            np.stack([a, m_ab, m_ca], axis=1),
            np.stack([b, m_bc, m_ab], axis=1),
            np.stack([c, m_ca, m_bc], axis=1),
            np.stack([m_ab, m_bc, m_ca], axis=1),
        ],
        axis=1,
    )
    return new.reshape(-1, 3)


def loop_subdivide(
    mesh: OrientedMesh,
    normal_mode: NormalMode | str = NormalMode.LOOP_LIMIT,
) -> OrientedMesh:
    """一次 Loop 细分，法向重新计算

    Raises:
        BoundaryUnsupportedError: 网格存在边界边
    """
    tri_mesh = mesh.mesh
    S = subdivision_matrix(tri_mesh)
    vertices = S @ tri_mesh.vertices
    refined = TriangleMesh(vertices, subdivide_connectivity(tri_mesh))
    logger.debug(
        f"Loop subdivision: {tri_mesh.num_triangles} -> {refined.num_triangles} triangles"
    )
    return OrientedMesh(refined, compute_vertex_normals(refined, normal_mode))
