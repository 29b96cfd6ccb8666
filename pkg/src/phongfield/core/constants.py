"""数值常量

集中管理法向、能量、基函数与实验产物相关的枚举和固定配置。
"""

from dataclasses import dataclass
from enum import Enum, IntEnum


class NormalMode(str, Enum):
    """顶点法向估计方式"""
    AREA_WEIGHTED = "area-weighted"
    LOOP_LIMIT = "loop-limit"


class EnergyKind(str, Enum):
    """具名的协变导数能量

    每种能量对协变导数的标量、无迹对称、反对称三个分量加权。
    """
    CONNECTION = "connection"
    HODGE = "hodge"
    ANTI_HOLOMORPHIC = "anti-holomorphic"
    KILLING = "killing"
    DIVERGENCE = "divergence"
    CURL = "curl"

    @property
    def weights(self) -> tuple[float, float, float]:
        """该能量的 (c_scalar, c_traceless, c_antisym)"""
        return ENERGY_WEIGHTS[self]

    @classmethod
    def all_values(cls) -> list[str]:
        """获取所有能量名称（用于 CLI choices）"""
        return [e.value for e in cls]


ENERGY_WEIGHTS: dict[EnergyKind, tuple[float, float, float]] = {
    EnergyKind.CONNECTION: (1.0, 1.0, 1.0),
    EnergyKind.HODGE: (1.0, 0.0, 1.0),
    EnergyKind.ANTI_HOLOMORPHIC: (0.0, 1.0, 0.0),
    EnergyKind.KILLING: (1.0, 1.0, 0.0),
    EnergyKind.DIVERGENCE: (1.0, 0.0, 0.0),
    EnergyKind.CURL: (0.0, 0.0, 1.0),
}

# (1, 0, 1) 能量是 div^2 + curl^2 Dirichlet 能量的一半，与 cotangent 特征值比较时乘回
HODGE_COTAN_SCALE = 2.0


class BasisKind(str, Enum):
    """右端项使用的有限元基"""
    SCALAR = "scalar"
    VECTOR = "vector"

    @property
    def dofs_per_vertex(self) -> int:
        return 1 if self is BasisKind.SCALAR else 2


class Tessellation(str, Enum):
    """括号基准使用的球面剖分"""
    ICOSA = "icosa"
    HULL = "hull"


class ExitCode(IntEnum):
    """进程退出码"""
    OK = 0
    PRECONDITION = 2
    NO_CONVERGENCE = 3


# CSV 列增删或改名时递增
CSV_SCHEMA_VERSION = "1"


# ============= 特征求解配置 =============

@dataclass(frozen=True)
class EigenConfig:
    """广义特征求解配置

    Attributes:
        tol: 传给 ARPACK 的相对残差容差
        max_iter: Arnoldi 最大重启次数
        shift_scale: sigma = -shift_scale * trace(S) / dim
        dense_max_dim: 不超过该维度时使用稠密求解
        residual_tol: 返回特征对可接受的最大相对残差
    """
    tol: float = 1e-9
    max_iter: int = 500
    shift_scale: float = 1e-6
    dense_max_dim: int = 400
    residual_tol: float = 1e-6

    @classmethod
    def from_settings(cls) -> "EigenConfig":
        from phongfield.core.config import settings
        return cls(
            tol=settings.EIGEN_TOL,
            max_iter=settings.EIGEN_MAX_ITER,
            shift_scale=settings.EIGEN_SHIFT_SCALE,
            dense_max_dim=settings.DENSE_EIGEN_MAX_DIM,
        )


# 各向异性球面采样使用的椭球半轴
ANISO_SEMI_AXES: tuple[float, float, float] = (1.0, 4.0, 1.0)

# 环面嵌入半径
TORUS_MAJOR_RADIUS = 2.0
TORUS_MINOR_RADIUS = 1.0
