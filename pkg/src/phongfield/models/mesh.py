"""三角网格模型

顶点坐标、三角形索引与顶点法向的不可变容器，边、面积等派生量惰性计算并缓存。
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from phongfield.core.exceptions import (
    InconsistentNormalError,
    MeshIndexError,
    ParameterError,
)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TriangleMesh:
    """顶点 (V, 3) 与三角形 (T, 3)

    构造时只检查索引范围；流形、定向与退化由 ``geometry.topology.validate_mesh`` 检查。
    """

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        verts = np.array(self.vertices, dtype=np.float64, copy=True)
        tris = np.array(self.triangles, dtype=np.int64, copy=True)

        if verts.ndim != 2 or verts.shape[1] != 3:
            raise ParameterError("vertices must have shape (V, 3)", shape=list(verts.shape))
        if tris.size == 0:
            tris = tris.reshape(0, 3)
        if tris.ndim != 2 or tris.shape[1] != 3:
            raise ParameterError("triangles must have shape (T, 3)", shape=list(tris.shape))
        if tris.size:
            bad = (tris < 0) | (tris >= len(verts))
            if bad.any():
                raise MeshIndexError(int(tris[bad][0]), len(verts))

        object.__setattr__(self, "vertices", _freeze(verts))
        object.__setattr__(self, "triangles", _freeze(tris))

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def corners(self, tri_idx: np.ndarray | None = None) -> np.ndarray:
        """Corner positions, shape (T, 3, 3)."""
        tris = self.triangles if tri_idx is None else self.triangles[tri_idx]
        return self.vertices[tris]

    @cached_property
    def face_cross(self) -> np.ndarray:
        """未归一化面法向 (v1 - v0) x (v2 - v0)"""
        c = self.corners()
        return np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0])

    @cached_property
    def face_areas(self) -> np.ndarray:
        return 0.5 * np.linalg.norm(self.face_cross, axis=1)

    @property
    def total_area(self) -> float:
        return float(self.face_areas.sum())

    @cached_property
    def face_normals(self) -> np.ndarray:
        norms = np.linalg.norm(self.face_cross, axis=1, keepdims=True)
        return self.face_cross / np.where(norms > 0, norms, 1.0)

    @cached_property
    def _edge_data(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        # 三角形 t 的半边 j 为 tri[t, j] -> tri[t, (j + 1) % 3]
        tris = self.triangles
        directed = np.stack([tris, np.roll(tris, -1, axis=1)], axis=-1).reshape(-1, 2)
        undirected = np.sort(directed, axis=1)
        edges, inverse, counts = np.unique(
            undirected, axis=0, return_inverse=True, return_counts=True
        )
        return edges, inverse.reshape(-1, 3), counts

    @property
    def edges(self) -> np.ndarray:
        """去重后的无向边 (E, 2)，按字典序排列"""
        return self._edge_data[0]

    @property
    def triangle_edges(self) -> np.ndarray:
        """每个三角形半边 j 对应的边索引 (T, 3)"""
        return self._edge_data[1]

    @property
    def edge_face_counts(self) -> np.ndarray:
        return self._edge_data[2]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def boundary_edge_count(self) -> int:
        return int(np.count_nonzero(self.edge_face_counts == 1))

    @property
    def is_closed(self) -> bool:
        return self.boundary_edge_count == 0

    @cached_property
    def mean_edge_length(self) -> float:
        e = self.edges
        return float(np.linalg.norm(self.vertices[e[:, 1]] - self.vertices[e[:, 0]], axis=1).mean())

    def euler_characteristic(self) -> int:
        used = np.unique(self.triangles).size
        return used - self.num_edges + self.num_triangles

    def scaled(self, factor: float) -> "TriangleMesh":
        return TriangleMesh(self.vertices * factor, self.triangles)


@dataclass(frozen=True, eq=False)
class OrientedMesh:
    """带逐顶点单位法向的 TriangleMesh

    构造时重新归一化法向。每个角点法向与面法向的内积必须为正，否则报告出错的三角形。
    """

    mesh: TriangleMesh
    normals: np.ndarray

    def __post_init__(self):
        normals = np.array(self.normals, dtype=np.float64, copy=True)
        if normals.shape != (self.mesh.num_vertices, 3):
            raise ParameterError(
                "normals must have shape (V, 3)",
                shape=list(normals.shape),
                num_vertices=self.mesh.num_vertices,
            )
        norms = np.linalg.norm(normals, axis=1)
        if np.any(norms < 1e-12):
            vertex = int(np.argmin(norms))
            raise InconsistentNormalError(f"zero normal at vertex {vertex}", vertex=vertex)
        normals /= norms[:, None]
        object.__setattr__(self, "normals", _freeze(normals))

        consistency = self.corner_consistency()
        if consistency.size and consistency.min() <= 0.0:
            tri = int(np.argmin(consistency.min(axis=1)))
            raise InconsistentNormalError(
                f"corner normal opposes face normal in triangle {tri}",
                triangle=tri,
                value=float(consistency.min()),
            )

    @property
    def vertices(self) -> np.ndarray:
        return self.mesh.vertices

    @property
    def triangles(self) -> np.ndarray:
        return self.mesh.triangles

    @property
    def num_vertices(self) -> int:
        return self.mesh.num_vertices

    @property
    def num_triangles(self) -> int:
        return self.mesh.num_triangles

    def corner_consistency(self) -> np.ndarray:
        """<n_corner, n_face> per triangle corner, shape (T, 3)."""
        corner_normals = self.normals[self.mesh.triangles]
        return np.einsum("tka,ta->tk", corner_normals, self.mesh.face_normals)

    def min_consistency(self) -> float:
        c = self.corner_consistency()
        return float(c.min()) if c.size else 1.0

    def with_vertices(self, vertices: np.ndarray) -> "OrientedMesh":
        return OrientedMesh(TriangleMesh(vertices, self.mesh.triangles), self.normals)
