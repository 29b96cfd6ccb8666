"""参考切平面上的自同态"""

from dataclasses import dataclass

import numpy as np

from phongfield.core.exceptions import ParameterError


@dataclass(frozen=True, eq=False)
class Endo2:
    """2x2 自同态 m 及度量它的度量 g

    两者均可带前导批量轴，形状为 (..., 2, 2)。
    """

    m: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=np.float64)
        g = np.asarray(self.g, dtype=np.float64)
        if m.shape[-2:] != (2, 2) or g.shape[-2:] != (2, 2):
            raise ParameterError("endomorphism and metric must be 2x2")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "g", g)

    @property
    def g_inv(self) -> np.ndarray:
        return np.linalg.inv(self.g)

    def __add__(self, other: "Endo2") -> "Endo2":
        return Endo2(self.m + other.m, self.g)

    def __sub__(self, other: "Endo2") -> "Endo2":
        return Endo2(self.m - other.m, self.g)

    def __mul__(self, scale: float) -> "Endo2":
        return Endo2(self.m * scale, self.g)

    __rmul__ = __mul__
