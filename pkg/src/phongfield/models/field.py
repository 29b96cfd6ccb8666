"""切向量场的表示"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from phongfield.core.exceptions import ParameterError

# (tri_idx (P,), st (P, 2)) -> values (P, 3) or (P,)
FieldEvaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class VertexField:
    """逐顶点标架基下的系数

    ``coeffs[2 * i + k]`` 对应锚定在顶点 i、标架向量为 t_k 的基场。
    """

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=np.float64, copy=True).ravel()
        if coeffs.size % 2:
            raise ParameterError("vertex field needs an even number of coefficients", size=coeffs.size)
        if not np.all(np.isfinite(coeffs)):
            raise ParameterError("vertex field has non-finite coefficients")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def num_vertices(self) -> int:
        return self.coeffs.size // 2

    def pairs(self) -> np.ndarray:
        """系数整理为 (V, 2)"""
        return self.coeffs.reshape(-1, 2)

    def realize_at_vertices(self, frames: np.ndarray) -> np.ndarray:
        """各顶点处的 3D 向量 a * t_0 + b * t_1，形状 (V, 3)"""
        return np.einsum("vk,vka->va", self.pairs(), frames)

    @classmethod
    def zeros(cls, num_vertices: int) -> "VertexField":
        return cls(np.zeros(2 * num_vertices))

    @classmethod
    def from_pairs(cls, pairs: np.ndarray) -> "VertexField":
        return cls(np.asarray(pairs, dtype=np.float64).reshape(-1))


@dataclass(frozen=True, eq=False)
class AmbientField:
    """在 (三角形, 重心坐标点) 处求值的场

    Attributes:
        evaluator: 批量求值；切向量场返回 3D 向量，否则返回标量
        jacobian: 可选，取值关于重心坐标 (s, t) 的导数 (P, 3, 2)
        name: 日志中使用的名称
    """

    evaluator: FieldEvaluator
    jacobian: Optional[FieldEvaluator] = None
    name: str = "field"

    def __call__(self, tri_idx: np.ndarray, st: np.ndarray) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(tri_idx), np.asarray(st, dtype=np.float64)))

    @property
    def has_jacobian(self) -> bool:
        return self.jacobian is not None

    def derivative(self, tri_idx: np.ndarray, st: np.ndarray) -> np.ndarray:
        if self.jacobian is None:
            raise ParameterError(f"{self.name} has no analytic jacobian")
        return np.asarray(self.jacobian(np.asarray(tri_idx), np.asarray(st, dtype=np.float64)))

    @classmethod
    def zero(cls) -> "AmbientField":
        return cls(
            evaluator=lambda tri, st: np.zeros((len(tri), 3)),
            jacobian=lambda tri, st: np.zeros((len(tri), 3, 2)),
            name="zero",
        )
