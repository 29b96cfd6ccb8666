"""顶点法向估计

支持两种模式：

- area-weighted: 顶点周围未归一化面法向之和再归一化
- loop-limit: 一环 Loop 细分模板取 settings.LOOP_STENCIL_POWER 次幂，作用于顶点
  及其有序一环，取所得扇形的面积加权法向；边界顶点退回 area-weighted
"""

from collections import defaultdict

import numpy as np

from phongfield.core.config import settings
from phongfield.core.constants import NormalMode
from phongfield.core.exceptions import IsolatedVertexError
from phongfield.core.logging_config import get_logger
from phongfield.models.mesh import TriangleMesh

logger = get_logger(__name__)


def area_weighted_normals(mesh: TriangleMesh) -> np.ndarray:
    acc = np.zeros((mesh.num_vertices, 3))
    cross = mesh.face_cross
    for k in range(3):
        np.add.at(acc, mesh.triangles[:, k], cross)
    norms = np.linalg.norm(acc, axis=1)
    if np.any(norms == 0):
        raise IsolatedVertexError(int(np.flatnonzero(norms == 0)[0]))
    return acc / norms[:, None]


def loop_beta(valence: int) -> float:
    """Loop's vertex weight for the given valence."""
    n = float(valence)
    return (5.0 / 8.0 - (3.0 / 8.0 + 0.25 * np.cos(2.0 * np.pi / n)) ** 2) / n


def loop_stencil(valence: int) -> np.ndarray:
    """(1 + n) x (1 + n) 一环 Loop 模板

    第 0 行为顶点规则；第 1 + j 行为通往环顶点 j 的边规则，对角顶点为 j - 1 与 j + 1。
    """
    n = valence
    beta = loop_beta(n)
    S = np.zeros((n + 1, n + 1))
    S[0, 0] = 1.0 - n * beta
    S[0, 1:] = beta
    for j in range(n):
        S[1 + j, 0] = 3.0 / 8.0
        S[1 + j, 1 + j] += 3.0 / 8.0
        S[1 + j, 1 + (j - 1) % n] += 1.0 / 8.0
        S[1 + j, 1 + (j + 1) % n] += 1.0 / 8.0
    return S


def ordered_rings(mesh: TriangleMesh) -> dict[int, np.ndarray]:
    """内部顶点的逆时针一环

    一环不闭合的顶点（边界或非流形扇形）不在结果中。
    """
    nxt: dict[int, dict[int, int]] = defaultdict(dict)
    for a, b, c in mesh.triangles.tolist():
        nxt[a][b] = c
        nxt[b][c] = a
        nxt[c][a] = b

    rings: dict[int, np.ndarray] = {}
    for v, succ in nxt.items():
        start = next(iter(succ))
        ring = [start]
        cur = succ.get(start)
        while cur is not None and cur != start and len(ring) <= len(succ):
            ring.append(cur)
            cur = succ.get(cur)
        if cur == start and len(ring) == len(succ):
            rings[v] = np.array(ring, dtype=np.int64)
    return rings


def loop_limit_normals(mesh: TriangleMesh, power: int | None = None) -> np.ndarray:
    power = settings.LOOP_STENCIL_POWER if power is None else power
    normals = area_weighted_normals(mesh)
    rings = ordered_rings(mesh)

    fallback = mesh.num_vertices - len(rings)
    if fallback:
        logger.warning(
            f"loop-limit normals: {fallback} boundary or non-manifold vertices "
            f"use area-weighted normals"
        )

    by_valence: dict[int, list[int]] = defaultdict(list)
    for v, ring in rings.items():
        by_valence[len(ring)].append(v)

    for valence, verts in by_valence.items():
        if valence < 3:
            continue
        verts_arr = np.array(verts, dtype=np.int64)
        ring_idx = np.stack([rings[v] for v in verts])
        local = np.concatenate([verts_arr[:, None], ring_idx], axis=1)
        stencil = np.linalg.matrix_power(loop_stencil(valence), power)
        pts = np.einsum("ij,bja->bia", stencil, mesh.vertices[local])
        center = pts[:, :1]
        ring_pts = pts[:, 1:] - center
        fan = np.cross(ring_pts, np.roll(ring_pts, -1, axis=1)).sum(axis=1)
        norms = np.linalg.norm(fan, axis=1)
        ok = norms > 0
        normals[verts_arr[ok]] = fan[ok] / norms[ok, None]

    return normals


def compute_vertex_normals(
    mesh: TriangleMesh,
    mode: NormalMode | str = NormalMode.LOOP_LIMIT,
) -> np.ndarray:
    """逐顶点单位法向 (V, 3)

    Raises:
        IsolatedVertexError: 存在没有关联三角形的顶点
    """
    mode = NormalMode(mode)
    if mode is NormalMode.AREA_WEIGHTED:
        return area_weighted_normals(mesh)
    return loop_limit_normals(mesh)
