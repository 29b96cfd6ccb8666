"""单位直角三角形（面积 1/2）上的求积公式"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from phongfield.core.exceptions import ParameterError


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """(s, t) 坐标下的求积点 (Q, 2)，权重为正且和为 1/2"""

    points: np.ndarray
    weights: np.ndarray
    name: str = "custom"

    def __post_init__(self):
        points = np.array(self.points, dtype=np.float64)
        weights = np.array(self.weights, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != 2 or len(points) != len(weights):
            raise ParameterError("quadrature points must have shape (Q, 2) matching weights")
        if abs(weights.sum() - 0.5) > 1e-14 or np.any(weights <= 0):
            raise ParameterError("quadrature weights must be positive and sum to 1/2")
        s, t = points[:, 0], points[:, 1]
        if np.any(s <= 0) or np.any(t <= 0) or np.any(s + t >= 1):
            raise ParameterError("quadrature points must be strictly interior")
        points.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return len(self.weights)

    def integrate(self, fn) -> float:
        """在单位三角形上积分 fn(s, t)"""
        return float(sum(w * fn(p[0], p[1]) for p, w in zip(self.points, self.weights)))


@lru_cache(maxsize=None)
def quadrature_3pt() -> QuadratureRule:
    """对称内点 3 点公式，2 次精确"""
    a, b = 1.0 / 6.0, 2.0 / 3.0
    return QuadratureRule(
        points=np.array([[a, a], [b, a], [a, b]]),
        weights=np.full(3, 1.0 / 6.0),
        name="3pt",
    )


@lru_cache(maxsize=None)
def quadrature_6pt() -> QuadratureRule:
    """对称内点 6 点公式，4 次精确"""
    a1, w1 = 0.445948490915965, 0.223381589678011
    a2, w2 = 0.091576213509771, 0.109951743655322
    b1, b2 = 1.0 - 2.0 * a1, 1.0 - 2.0 * a2
    points = np.array([
        [a1, a1], [b1, a1], [a1, b1],
        [a2, a2], [b2, a2], [a2, b2],
    ])
    weights = 0.5 * np.array([w1, w1, w1, w2, w2, w2])
    # 截断后的权重重新归一化
    weights *= 0.5 / weights.sum()
    return QuadratureRule(points=points, weights=weights, name="6pt")


QUADRATURE_RULES = {
    "3pt": quadrature_3pt,
    "6pt": quadrature_6pt,
}


def get_quadrature(name: str | None) -> QuadratureRule:
    if name is None:
        return quadrature_3pt()
    try:
        return QUADRATURE_RULES[name]()
    except KeyError:
        raise ParameterError(f"unknown quadrature rule {name!r}", choices=list(QUADRATURE_RULES))
