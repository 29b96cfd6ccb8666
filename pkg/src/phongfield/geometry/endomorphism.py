"""切平面自同态的正交分解

取度量伴随 m* = g^-1 m^T g，End(V) 分解为恒等映射的标量倍、无迹自伴映射
与反自伴映射三部分，它们在 <a, b> = tr(g^-1 a^T g b) 下两两正交。
"""

import numpy as np

from phongfield.models.endo import Endo2

_EYE2 = np.eye(2)


def adjoint(m: np.ndarray, g: np.ndarray, g_inv: np.ndarray) -> np.ndarray:
    """g^-1 m^T g, broadcasting over leading axes of m."""
    return g_inv @ np.swapaxes(m, -1, -2) @ g


def decompose_arrays(
    m: np.ndarray,
    g: np.ndarray,
    g_inv: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``decompose`` 的数组版本：(scalar, traceless, antisym)"""
    m_adj = adjoint(m, g, g_inv)
    trace = m[..., 0, 0] + m[..., 1, 1]
    scalar = 0.5 * trace[..., None, None] * _EYE2
    sym = 0.5 * (m + m_adj)
    antisym = 0.5 * (m - m_adj)
    return scalar, sym - scalar, antisym


def weighted_projection(
    m: np.ndarray,
    g: np.ndarray,
    g_inv: np.ndarray,
    weights: tuple[float, float, float],
) -> np.ndarray:
    """sum_c weights[c] * P_c(m)."""
    parts = decompose_arrays(m, g, g_inv)
    out = np.zeros_like(m)
    for c, part in zip(weights, parts):
        if c:
            out = out + c * part
    return out


def decompose(e: Endo2) -> tuple[Endo2, Endo2, Endo2]:
    """把 e 拆成标量、无迹对称与反对称部分"""
    scalar, traceless, antisym = decompose_arrays(e.m, e.g, e.g_inv)
    return Endo2(scalar, e.g), Endo2(traceless, e.g), Endo2(antisym, e.g)


def hom_inner_arrays(a: np.ndarray, b: np.ndarray, g: np.ndarray, g_inv: np.ndarray) -> np.ndarray:
    """tr(g^-1 a^T g b) over matching leading axes."""
    return np.einsum("...pq,...rq,...rs,...sp->...", g_inv, a, g, b)


def hom_inner_product(a: Endo2, b: Endo2) -> np.ndarray | float:
    """共享度量的两个自同态的标准内积"""
    value = hom_inner_arrays(a.m, b.m, a.g, a.g_inv)
    return float(value) if np.ndim(value) == 0 else value
