"""逐三角形几何

TrianglePatch 缓存一个或多个三角形的几何量：角点坐标与法向、嵌入微分、度量
以及各角点切标架。所有数组都带前导三角形轴。
"""

from dataclasses import dataclass, field

import numpy as np

from phongfield.core.exceptions import DegenerateTriangleError, ParameterError
from phongfield.models.mesh import OrientedMesh

# 第 i 行为 d(psi_i)/d(s, t)，psi = (1 - s - t, s, t)
HAT_GRADIENTS = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])
HAT_GRADIENTS.setflags(write=False)


@dataclass(frozen=True)
class BaryPoint:
    """单位直角三角形中的点 (s, t)"""

    s: float
    t: float

    def __post_init__(self):
        tol = 1e-12
        if self.s < -tol or self.t < -tol or self.s + self.t > 1.0 + tol:
            raise ParameterError(
                "barycentric point outside the unit triangle", s=self.s, t=self.t
            )

    def as_array(self) -> np.ndarray:
        return np.array([self.s, self.t])

    @classmethod
    def corner(cls, i: int) -> "BaryPoint":
        return cls(*((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))[i])

    @classmethod
    def barycenter(cls) -> "BaryPoint":
        return cls(1.0 / 3.0, 1.0 / 3.0)


def as_st(p, count: int) -> np.ndarray:
    """Broadcast a BaryPoint, (2,) or (count, 2) input to shape (count, 2)."""
    if isinstance(p, BaryPoint):
        p = p.as_array()
    st = np.asarray(p, dtype=np.float64)
    if st.shape == (2,):
        return np.broadcast_to(st, (count, 2))
    if st.shape != (count, 2):
        raise ParameterError("point array must have shape (2,) or (T, 2)", shape=list(st.shape))
    return st


def hat_values(st: np.ndarray) -> np.ndarray:
    """psi_i(s, t), shape (..., 3)."""
    s, t = st[..., 0], st[..., 1]
    return np.stack([1.0 - s - t, s, t], axis=-1)


@dataclass(frozen=True, eq=False)
class TrianglePatch:
    """一批三角形的缓存几何

    Attributes:
        corners: (T, 3, 3) 角点坐标 v_0, v_1, v_2
        normals: (T, 3, 3) 角点单位法向 n_0, n_1, n_2
        frames: (T, 3, 2, 3) 各角点正交标架，frames[:, i, k] 即 t_{2i+k}
        index: (T,) 源三角形索引，用于诊断信息
    """

    corners: np.ndarray
    normals: np.ndarray
    frames: np.ndarray
    index: np.ndarray
    dphi: np.ndarray = field(init=False)
    g: np.ndarray = field(init=False)
    g_inv: np.ndarray = field(init=False)
    sqrt_det_g: np.ndarray = field(init=False)
    face_normal: np.ndarray = field(init=False)

    def __post_init__(self):
        c = self.corners
        dphi = np.stack([c[:, 1] - c[:, 0], c[:, 2] - c[:, 0]], axis=-1)
        g = np.einsum("tai,taj->tij", dphi, dphi)
        det = g[:, 0, 0] * g[:, 1, 1] - g[:, 0, 1] * g[:, 1, 0]
        if np.any(det <= 0):
            bad = int(self.index[np.argmin(det)])
            raise DegenerateTriangleError(bad, float(0.5 * np.sqrt(max(det.min(), 0.0))))
        g_inv = np.empty_like(g)
        g_inv[:, 0, 0] = g[:, 1, 1]
        g_inv[:, 1, 1] = g[:, 0, 0]
        g_inv[:, 0, 1] = -g[:, 0, 1]
        g_inv[:, 1, 0] = -g[:, 1, 0]
        g_inv /= det[:, None, None]

        cross = np.cross(dphi[..., 0], dphi[..., 1])
        sqrt_det = np.sqrt(det)

        object.__setattr__(self, "dphi", dphi)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "g_inv", g_inv)
        object.__setattr__(self, "sqrt_det_g", sqrt_det)
        object.__setattr__(self, "face_normal", cross / np.linalg.norm(cross, axis=1, keepdims=True))

    def __len__(self) -> int:
        return len(self.corners)

    @classmethod
    def from_mesh(
        cls,
        mesh: OrientedMesh,
        frames: np.ndarray,
        tri_idx: np.ndarray | None = None,
    ) -> "TrianglePatch":
        """收集给定三角形的几何（默认全部三角形）

        Args:
            mesh: 源网格
            frames: 逐顶点标架 (V, 2, 3)
            tri_idx: 可选的三角形索引
        """
        if tri_idx is None:
            tri_idx = np.arange(mesh.num_triangles)
        tri_idx = np.asarray(tri_idx, dtype=np.int64)
        tris = mesh.triangles[tri_idx]
        return cls(
            corners=mesh.vertices[tris],
            normals=mesh.normals[tris],
            frames=frames[tris],
            index=tri_idx,
        )

    @classmethod
    def single(
        cls,
        corners: np.ndarray,
        normals: np.ndarray,
        frames: np.ndarray,
    ) -> "TrianglePatch":
        """A one-triangle patch from (3, 3) corners, (3, 3) normals, (3, 2, 3) frames."""
        normals = np.asarray(normals, dtype=np.float64)
        normals = normals / np.linalg.norm(normals, axis=-1, keepdims=True)
        return cls(
            corners=np.asarray(corners, dtype=np.float64)[None],
            normals=normals[None],
            frames=np.asarray(frames, dtype=np.float64)[None],
            index=np.zeros(1, dtype=np.int64),
        )

    def metric_condition(self) -> np.ndarray:
        """各三角形度量 g 的条件数"""
        eig = np.linalg.eigvalsh(self.g)
        return eig[:, 1] / eig[:, 0]
