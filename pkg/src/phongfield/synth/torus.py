"""由平坦正方形环面的周期 Delaunay 剖分生成随机环面

嵌入为 Phi(s, t) = ((2 + cos t) cos s, sin t, (2 + cos t) sin s)，两个参数均以 2 pi
为周期，旋转轴为 e_y。
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay, QhullError, cKDTree

from phongfield.core.constants import TORUS_MAJOR_RADIUS, TORUS_MINOR_RADIUS
from phongfield.core.exceptions import GenerationError, ParameterError
from phongfield.core.logging_config import get_logger
from phongfield.geometry.topology import validate_mesh
from phongfield.models.mesh import OrientedMesh, TriangleMesh

logger = get_logger(__name__)

PERIOD = 2.0 * np.pi
MAX_ATTEMPTS = 5
DUPLICATE_RADIUS = 1e-9


# ========== 嵌入 ==========

def torus_embedding(uv: np.ndarray) -> np.ndarray:
    """Phi(s, t) for parameters of shape (..., 2)."""
    s, t = uv[..., 0], uv[..., 1]
    a = TORUS_MAJOR_RADIUS + TORUS_MINOR_RADIUS * np.cos(t)
    return np.stack([a * np.cos(s), TORUS_MINOR_RADIUS * np.sin(t), a * np.sin(s)], axis=-1)


def torus_jacobian(uv: np.ndarray) -> np.ndarray:
    """dPhi, shape (..., 3, 2)."""
    s, t = uv[..., 0], uv[..., 1]
    r = TORUS_MINOR_RADIUS
    a = TORUS_MAJOR_RADIUS + r * np.cos(t)
    zero = np.zeros_like(s)
    d_s = np.stack([-a * np.sin(s), zero, a * np.cos(s)], axis=-1)
    d_t = np.stack([-r * np.sin(t) * np.cos(s), r * np.cos(t), -r * np.sin(t) * np.sin(s)], axis=-1)
    return np.stack([d_s, d_t], axis=-1)


def torus_hessian(uv: np.ndarray) -> np.ndarray:
    """Second derivatives H[..., :, a, b] = d^2 Phi / du_a du_b, shape (..., 3, 2, 2)."""
    s, t = uv[..., 0], uv[..., 1]
    r = TORUS_MINOR_RADIUS
    a = TORUS_MAJOR_RADIUS + r * np.cos(t)
    zero = np.zeros_like(s)
    ss = np.stack([-a * np.cos(s), zero, -a * np.sin(s)], axis=-1)
    st = np.stack([r * np.sin(t) * np.sin(s), zero, -r * np.sin(t) * np.cos(s)], axis=-1)
    tt = np.stack([-r * np.cos(t) * np.cos(s), -r * np.sin(t), -r * np.cos(t) * np.sin(s)], axis=-1)
    return np.stack([np.stack([ss, st], axis=-1), np.stack([st, tt], axis=-1)], axis=-1)


def torus_normals(uv: np.ndarray) -> np.ndarray:
    """外向单位法向 (cos s cos t, sin t, sin s cos t)"""
    s, t = uv[..., 0], uv[..., 1]
    return np.stack([np.cos(s) * np.cos(t), np.sin(t), np.sin(s) * np.cos(t)], axis=-1)


def azimuthal_directions(points: np.ndarray) -> np.ndarray:
    """绕旋转轴环流的单位向量 e_y x p"""
    d = np.stack([points[:, 2], np.zeros(len(points)), -points[:, 0]], axis=1)
    return d / np.linalg.norm(d, axis=1, keepdims=True)


# ========== 网格生成 ==========

@dataclass(frozen=True, eq=False)
class TorusMesh:
    """生成的环面及其参数空间数据

    Attributes:
        mesh: 带解析法向的嵌入网格
        params: (V, 2) 顶点参数，取值于 [0, 2 pi)^2
        corner_params: (T, 3, 2) 各三角形角点的展开参数，跨周期缝的三角形坐标保持连续
        seed: 采样种子
    """

    mesh: OrientedMesh
    params: np.ndarray
    corner_params: np.ndarray
    seed: int

    @property
    def num_vertices(self) -> int:
        return self.mesh.num_vertices

    def points(self, tri_idx: np.ndarray, st: np.ndarray) -> np.ndarray:
        """Parameter coordinates sum_i psi_i u_i at barycentric points, (P, 2)."""
        uv = self.corner_params[tri_idx]
        s, t = st[..., 0:1], st[..., 1:2]
        return uv[:, 0] + s * (uv[:, 1] - uv[:, 0]) + t * (uv[:, 2] - uv[:, 0])

    def param_differential(self, tri_idx: np.ndarray) -> np.ndarray:
        """d u / d(s, t) per triangle, (P, 2, 2)."""
        uv = self.corner_params[tri_idx]
        return np.stack([uv[:, 1] - uv[:, 0], uv[:, 2] - uv[:, 0]], axis=-1)


def _has_duplicates(points: np.ndarray) -> bool:
    tree = cKDTree(points, boxsize=PERIOD)
    return bool(tree.query_pairs(DUPLICATE_RADIUS))


def _circumcenters(p: np.ndarray) -> np.ndarray:
    a, b, c = p[:, 0], p[:, 1], p[:, 2]
    ba, ca = b - a, c - a
    d = 2.0 * (ba[:, 0] * ca[:, 1] - ba[:, 1] * ca[:, 0])
    nb = (ba**2).sum(axis=1)
    nc = (ca**2).sum(axis=1)
    ux = (ca[:, 1] * nb - ba[:, 1] * nc) / d
    uy = (ba[:, 0] * nc - ca[:, 0] * nb) / d
    return a + np.stack([ux, uy], axis=1)


def periodic_delaunay(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """平坦 2 pi 周期正方形上点集的 Delaunay 剖分

    把点平铺到相邻八个周期后在平面上剖分，保留外心落在基本区域内的三角形，
    顶点编号取模 n。

    Returns:
        (逆时针三角形 (T, 3), corner_params (T, 3, 2))
    """
    n = len(points)
    offsets = PERIOD * np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)], dtype=np.float64)
    tiled = (points[None, :, :] + offsets[:, None, :]).reshape(-1, 2)
    try:
        tri = Delaunay(tiled)
    except QhullError as e:
        raise GenerationError(f"planar Delaunay failed: {e}") from e

    simplices = tri.simplices.astype(np.int64)
    corners = tiled[simplices]
    center = _circumcenters(corners)
    keep = np.all((center >= 0.0) & (center < PERIOD), axis=1)
    simplices, corners = simplices[keep], corners[keep]

    e1 = corners[:, 1] - corners[:, 0]
    e2 = corners[:, 2] - corners[:, 0]
    cw = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0] < 0
    simplices[cw] = simplices[cw][:, [0, 2, 1]]
    corners[cw] = corners[cw][:, [0, 2, 1]]
    return simplices % n, corners


def _is_valid_torus(mesh: TriangleMesh, n: int) -> bool:
    return (
        mesh.num_triangles == 2 * n
        and mesh.is_closed
        and mesh.euler_characteristic() == 0
        and mesh.edge_face_counts.max() == 2
    )


def gen_torus(n: int, seed: int) -> TorusMesh:
    """n 个顶点的随机环面

    Raises:
        ParameterError: n < 16
        GenerationError: 找不到有效的周期剖分
    """
    if n < 16:
        raise ParameterError("a torus needs at least 16 points", n=n)
    rng = np.random.default_rng(seed)
    points = rng.uniform(0.0, PERIOD, (n, 2))

    for attempt in range(MAX_ATTEMPTS):
        if _has_duplicates(points):
            logger.warning(f"torus attempt {attempt + 1}: duplicate samples, resampling")
            points = rng.uniform(0.0, PERIOD, (n, 2))
            continue
        triangles, corner_params = periodic_delaunay(points)
        # ds x dt 指向内侧，参数空间逆时针对应内向法向
        triangles = triangles[:, [0, 2, 1]]
        corner_params = corner_params[:, [0, 2, 1]]
        mesh = TriangleMesh(torus_embedding(points), triangles)
        if _is_valid_torus(mesh, n):
            break
        logger.warning(f"torus attempt {attempt + 1}: invalid periodic triangulation, jittering")
        points = np.mod(points + 1e-9 * rng.standard_normal(points.shape), PERIOD)
    else:
        raise GenerationError("no valid periodic triangulation", n=n, seed=seed)

    validate_mesh(mesh)
    logger.info(f"Torus: {mesh.num_vertices} vertices, {mesh.num_triangles} triangles (seed {seed})")
    return TorusMesh(
        mesh=OrientedMesh(mesh, torus_normals(points)),
        params=points,
        corner_params=corner_params,
        seed=seed,
    )


def empty_circumcircle_violations(torus: TorusMesh, count: int, rng: np.random.Generator) -> int:
    """未通过平坦 Delaunay 检验的采样内部边数

    对两个三角形共享的边，一侧的对角顶点不得严格落在另一侧的外接圆内，
    坐标展开到第一个三角形所在周期。
    """
    mesh = torus.mesh.mesh
    tri_edges = mesh.triangle_edges
    owners: dict[int, list[tuple[int, int]]] = {}
    for t, row in enumerate(tri_edges.tolist()):
        for j, e in enumerate(row):
            owners.setdefault(e, []).append((t, j))

    edges = rng.choice(mesh.num_edges, size=min(count, mesh.num_edges), replace=False)
    violations = 0
    for e in edges.tolist():
        (t0, j0), (t1, j1) = owners[e]
        p = torus.corner_params[t0]
        center = _circumcenters(p[None])[0]
        radius = np.linalg.norm(p[0] - center)
        q = torus.corner_params[t1]
        opposite = q[(j1 + 2) % 3]
        # 平移 q，使其共享边副本与 p 的一致
        a = mesh.triangles[t0, j0]
        shift = p[j0] - q[list(mesh.triangles[t1]).index(a)]
        d = np.linalg.norm(opposite + shift - center)
        if d < radius * (1.0 - 1e-9):
            violations += 1
    return violations
