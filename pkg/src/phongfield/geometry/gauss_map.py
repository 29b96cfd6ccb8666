"""Phong 高斯映射、实现映射与角点输运"""

import numpy as np

from phongfield.core.config import settings
from phongfield.core.exceptions import InconsistentNormalError
from phongfield.geometry.rodrigues import rodrigues, rodrigues_directional_derivative
from phongfield.models.patch import BaryPoint, TrianglePatch, as_st, hat_values


def gauss_map(patch: TrianglePatch, p: BaryPoint | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """插值单位法向 N(p) 及其关于 (s, t) 的 Jacobian

    Returns:
        N (T, 3) 与 dN (T, 3, 2)，满足 dN^T N = 0

    Raises:
        InconsistentNormalError: 插值法向几乎为零
    """
    st = as_st(p, len(patch))
    psi = hat_values(st)
    m = np.einsum("ti,tia->ta", psi, patch.normals)
    norm = np.linalg.norm(m, axis=1)
    if np.any(norm < settings.NORMAL_NORM_EPS):
        worst = int(np.argmin(norm))
        tri = int(patch.index[worst])
        raise InconsistentNormalError(
            f"interpolated normal vanishes in triangle {tri}",
            triangle=tri,
            norm=float(norm[worst]),
        )
    N = m / norm[:, None]
    n = patch.normals
    D = np.stack([n[:, 1] - n[:, 0], n[:, 2] - n[:, 0]], axis=-1)
    proj = np.eye(3) - N[:, :, None] * N[:, None, :]
    dN = (proj @ D) / norm[:, None, None]
    return N, dN


def realization(
    patch: TrianglePatch,
    p: BaryPoint | np.ndarray,
    N: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """实现微分 R(n, N(p)) dPhi 及其左逆

    Returns:
        (dphi_t, dphi_t_inv)，形状分别为 (T, 3, 2) 与 (T, 2, 3)
    """
    if N is None:
        N, _ = gauss_map(patch, p)
    R = rodrigues(patch.face_normal, N, index=patch.index)
    dphi_t = R @ patch.dphi
    dphi_t_inv = patch.g_inv @ np.swapaxes(patch.dphi, 1, 2) @ np.swapaxes(R, 1, 2)
    return dphi_t, dphi_t_inv


def corner_transport(patch: TrianglePatch, i: int, p: BaryPoint | np.ndarray) -> np.ndarray:
    """R_i(p) = R(n_i, N(p)), shape (T, 3, 3)."""
    N, _ = gauss_map(patch, p)
    return rodrigues(patch.normals[:, i], N, index=patch.index)


def corner_transports(patch: TrianglePatch, N: np.ndarray) -> np.ndarray:
    """R_i(p) for all three corners, shape (T, 3, 3, 3)."""
    return rodrigues(patch.normals, N[:, None, :], index=patch.index[:, None])


def corner_transport_derivatives(patch: TrianglePatch, N: np.ndarray, dN: np.ndarray) -> np.ndarray:
    """dR_i/d(s, t) for all corners, shape (T, 3, 2, 3, 3)."""
    return rodrigues_directional_derivative(
        patch.normals, N[:, None, :], dN[:, None, :, :], index=patch.index[:, None]
    )


def default_frames(normals: np.ndarray) -> np.ndarray:
    """与各法向正交的确定性右手标架

    t_0 为 e_1 投影后归一化（法向接近 e_1 时改用 e_2），t_1 = n x t_0。

    Returns:
        标架 (V, 2, 3)
    """
    normals = np.asarray(normals, dtype=np.float64)
    a = np.zeros_like(normals)
    use_e1 = np.abs(normals[:, 0]) < 0.9
    a[use_e1, 0] = 1.0
    a[~use_e1, 1] = 1.0
    t0 = a - normals * np.einsum("va,va->v", normals, a)[:, None]
    t0 /= np.linalg.norm(t0, axis=1, keepdims=True)
    t1 = np.cross(normals, t0)
    return np.stack([t0, t1], axis=1)


def rotate_frames(frames: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """在切平面内按给定角度旋转各顶点标架"""
    c = np.cos(angles)[:, None]
    s = np.sin(angles)[:, None]
    t0, t1 = frames[:, 0], frames[:, 1]
    return np.stack([c * t0 + s * t1, -s * t0 + c * t1], axis=1)
