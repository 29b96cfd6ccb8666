"""三角网格的拓扑检查与度量工具"""

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from phongfield.core.config import settings
from phongfield.core.exceptions import (
    DegenerateTriangleError,
    NonManifoldError,
    OrientationError,
    TopologyError,
)
from phongfield.core.logging_config import get_logger
from phongfield.models.mesh import OrientedMesh, TriangleMesh

logger = get_logger(__name__)


def check_manifold(mesh: TriangleMesh) -> None:
    """每条无向边恰好邻接一个或两个三角形"""
    counts = mesh.edge_face_counts
    if counts.size and counts.max() > 2:
        worst = int(np.argmax(counts))
        a, b = mesh.edges[worst]
        raise NonManifoldError((int(a), int(b)), int(counts[worst]))


def check_orientation(mesh: TriangleMesh) -> None:
    """共享边在两侧三角形中方向相反"""
    tris = mesh.triangles
    directed = np.stack([tris, np.roll(tris, -1, axis=1)], axis=-1).reshape(-1, 2)
    uniq, counts = np.unique(directed, axis=0, return_counts=True)
    if counts.size and counts.max() > 1:
        a, b = uniq[int(np.argmax(counts))]
        raise OrientationError((int(a), int(b)))


def check_degenerate(mesh: TriangleMesh, eps: float | None = None) -> None:
    """三角形面积不超过 eps * 总面积 时视为退化

    阈值相对总面积，整体缩放不改变判定结果。
    """
    eps = settings.DEGENERATE_AREA_EPS if eps is None else eps
    areas = mesh.face_areas
    if areas.size and areas.min() <= eps * areas.sum():
        tri = int(np.argmin(areas))
        raise DegenerateTriangleError(tri, float(areas[tri]))


def validate_mesh(mesh: TriangleMesh, area_eps: float | None = None) -> TriangleMesh:
    """依次执行流形、定向与退化检查

    Returns:
        原网格，便于链式调用
    """
    check_manifold(mesh)
    check_orientation(mesh)
    check_degenerate(mesh, area_eps)
    return mesh


def vertex_adjacency(mesh: TriangleMesh) -> sparse.csr_matrix:
    """Symmetric 0/1 vertex adjacency matrix."""
    e = mesh.edges
    n = mesh.num_vertices
    data = np.ones(2 * len(e))
    rows = np.concatenate([e[:, 0], e[:, 1]])
    cols = np.concatenate([e[:, 1], e[:, 0]])
    return sparse.csr_matrix((data, (rows, cols)), shape=(n, n))


def component_count(mesh: TriangleMesh) -> int:
    used = np.unique(mesh.triangles)
    adj = vertex_adjacency(mesh)[used][:, used]
    count, _ = connected_components(adj, directed=False)
    return int(count)


def genus(mesh: TriangleMesh | OrientedMesh) -> int:
    """闭连通曲面的亏格 g = (2 - V + E - F) / 2

    Raises:
        TopologyError: 网格不闭合或不连通
    """
    if isinstance(mesh, OrientedMesh):
        mesh = mesh.mesh
    if not mesh.is_closed:
        raise TopologyError(
            "genus requires a closed mesh", boundary_edges=mesh.boundary_edge_count
        )
    components = component_count(mesh)
    if components != 1:
        raise TopologyError("genus requires a connected mesh", components=components)
    chi = mesh.euler_characteristic()
    return (2 - chi) // 2


def aspect_ratios(mesh: TriangleMesh | OrientedMesh) -> np.ndarray:
    """Circumradius over twice the inradius per triangle (1 for equilateral)."""
    if isinstance(mesh, OrientedMesh):
        mesh = mesh.mesh
    c = mesh.corners()
    a = np.linalg.norm(c[:, 1] - c[:, 2], axis=1)
    b = np.linalg.norm(c[:, 2] - c[:, 0], axis=1)
    d = np.linalg.norm(c[:, 0] - c[:, 1], axis=1)
    area = mesh.face_areas
    semi = 0.5 * (a + b + d)
    # R = abd / (4A), r = A / s
    return a * b * d * semi / (8.0 * area**2)


def rescale_unit_area(mesh: OrientedMesh) -> OrientedMesh:
    """以原点为中心缩放顶点，使总面积为 1"""
    area = mesh.mesh.total_area
    if not area > 0:
        raise TopologyError("cannot rescale a zero-area mesh", area=float(area))
    factor = 1.0 / np.sqrt(area)
    logger.debug(f"Rescaling mesh by {factor:.6g} (area {area:.6g})")
    return mesh.with_vertices(mesh.vertices * factor)
