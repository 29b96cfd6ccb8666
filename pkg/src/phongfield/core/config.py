#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
核心配置文件
使用 Pydantic Settings 管理所有可调参数
"""

from pathlib import Path
from importlib.metadata import version, PackageNotFoundError

from pydantic_settings import BaseSettings
from pydantic import Field

# 从 pyproject.toml 读取版本号
try:
    _version = version("phongfield")
except PackageNotFoundError:
    _version = "0.1.0"


class Settings(BaseSettings):
    """应用配置类"""

    PROJECT_NAME: str = "phongfield"
    PROJECT_VERSION: str = _version

    # 日志配置
    LOG_LEVEL: str = "INFO"
    LOG_DIR: Path = Field(default=Path("logs"), description="滚动日志文件目录")
    LOG_TO_FILE: bool = Field(default=False, description="同时写入 LOG_DIR")

    # 产物配置
    OUTPUT_DIR: Path = Field(
        default=Path("results"),
        description="实验报告、CSV 与 PLY 产物的根目录",
    )

    # 几何容差
    ANTIPODAL_EPS: float = Field(
        default=1e-8,
        description="1 + <v, w> 低于该值时拒绝 Rodrigues 旋转",
    )
    DEGENERATE_AREA_EPS: float = Field(
        default=1e-14,
        description="面积不超过 eps * 网格总面积的三角形视为退化",
    )
    NORMAL_NORM_EPS: float = Field(
        default=1e-8,
        description="归一化前 |sum psi_i n_i| 的下限",
    )
    LOOP_STENCIL_POWER: int = Field(
        default=10,
        description="Loop 极限法向所用一环模板的幂次",
    )

    # 求解器配置
    SOLVE_RTOL: float = 1e-10
    EIGEN_TOL: float = 1e-9
    EIGEN_MAX_ITER: int = 500
    EIGEN_SHIFT_SCALE: float = Field(
        default=1e-6,
        description="shift-invert 使用 sigma = -scale * trace(S) / dim",
    )
    DENSE_EIGEN_MAX_DIM: int = Field(
        default=400,
        description="不超过该维度的广义特征问题使用稠密求解",
    )
    EIGEN_CLUSTER_RTOL: float = Field(
        default=0.1,
        description="相邻特征值 |b - a| <= rtol * |a + b| 时视为同一近简并簇",
    )
    EIGEN_CLUSTER_ATOL: float = Field(
        default=1e-6,
        description="近零特征值的绝对簇阈值（乘以最大 |lambda|）",
    )

    # 组装配置
    ASSEMBLY_WORKERS: int = Field(default=1, ge=1, description="组装线程数")
    ASSEMBLY_CHUNK: int = Field(default=4096, ge=1, description="每个组装块的三角形数")

    # 实验配置
    DEFAULT_SEEDS: int = 10
    HEAT_PHI_FLOOR: float = 1e-300
    FIELD_CHUNK: int = Field(default=4096, ge=1, description="带限场每次求值的点数")

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        env_prefix = "PHONGFIELD_"
        case_sensitive = True

    def get_output_path(self, experiment: str | None = None) -> Path:
        """获取产物目录，不存在时创建

        Args:
            experiment: 可选的实验子目录
        """
        out = self.OUTPUT_DIR
        if experiment:
            out = out / experiment
        out.mkdir(parents=True, exist_ok=True)
        return out

    def get_log_path(self) -> Path:
        """获取日志目录，不存在时创建"""
        self.LOG_DIR.mkdir(parents=True, exist_ok=True)
        return self.LOG_DIR


# 全局配置实例
settings = Settings()
