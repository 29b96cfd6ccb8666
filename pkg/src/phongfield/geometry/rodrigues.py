"""单位向量之间的最小角旋转及其导数

R(v, w) = I + K + K^2 / (1 + <v, w>)，K = w v^T - v w^T。所有函数在前导轴上广播。
"""

import numpy as np

from phongfield.core.config import settings
from phongfield.core.exceptions import AntipodalError

_EYE3 = np.eye(3)


def _margin(v: np.ndarray, w: np.ndarray, index: np.ndarray | None, eps: float | None) -> np.ndarray:
    eps = settings.ANTIPODAL_EPS if eps is None else eps
    margin = 1.0 + np.einsum("...i,...i->...", v, w)
    if np.any(margin < eps):
        flat = np.atleast_1d(margin).ravel()
        worst = int(np.argmin(flat))
        tri = None
        if index is not None:
            idx = np.broadcast_to(index, np.shape(margin)).ravel()
            tri = int(idx[worst])
        raise AntipodalError(float(flat[worst]), triangle=tri)
    return margin


def _cross_matrix(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """K = w v^T - v w^T."""
    return w[..., :, None] * v[..., None, :] - v[..., :, None] * w[..., None, :]


def rodrigues(
    v: np.ndarray,
    w: np.ndarray,
    index: np.ndarray | None = None,
    eps: float | None = None,
) -> np.ndarray:
    """把单位向量 v 转到单位向量 w 的旋转

    Args:
        v: 单位向量 (..., 3)
        w: 单位向量 (..., 3)
        index: 可选的三角形索引，失败时写入错误信息
        eps: 1 + <v, w> 的对跖阈值，默认 settings.ANTIPODAL_EPS

    Returns:
        旋转矩阵 (..., 3, 3)

    Raises:
        AntipodalError: v 与 w（近似）反向
    """
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    margin = _margin(v, w, index, eps)
    K = _cross_matrix(v, w)
    return _EYE3 + K + (K @ K) / margin[..., None, None]


def rodrigues_directional_derivative(
    v: np.ndarray,
    w: np.ndarray,
    dw: np.ndarray,
    index: np.ndarray | None = None,
    eps: float | None = None,
) -> np.ndarray:
    """R(v, w(s, t)) 沿 s 与 t 的导数

    Args:
        v: 固定单位向量 (..., 3)
        w: 单位向量 w(p) (..., 3)
        dw: w 关于 (s, t) 的 Jacobian (..., 3, 2)

    Returns:
        (..., 2, 3, 3) 数组，[..., a, :, :] 为 dR/d(s, t)_a
    """
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    dw = np.asarray(dw, dtype=np.float64)
    margin = _margin(v, w, index, eps)

    K = _cross_matrix(v, w)
    K2 = K @ K
    dw_cols = np.moveaxis(dw, -1, -2)  # (..., 2, 3)
    v_b = v[..., None, :]
    dK = _cross_matrix(v_b, dw_cols)  # (..., 2, 3, 3)
    dc = np.einsum("...i,...ai->...a", v, dw_cols)

    K_b = K[..., None, :, :]
    m = margin[..., None, None, None]
    return dK + (dK @ K_b + K_b @ dK) / m - K2[..., None, :, :] * (dc[..., None, None] / m**2)
