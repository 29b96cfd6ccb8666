#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""实验参数 Schema

每个 CLI 子命令对应一个参数模型；报告中记录的 parameters 即这些模型的 dump，
足以复现一次运行（包括随机种子）。
"""

from pathlib import Path
from typing import Literal, Optional

from pydantic import Field, model_validator

from phongfield.core.config import settings
from phongfield.core.constants import EnergyKind, Tessellation

from .base import BaseSchema

NormalsChoice = Literal["auto", "recompute", "area-weighted", "loop-limit"]
BracketModeChoice = Literal["project", "direct"]


class ExperimentParams(BaseSchema):
    """参数基类"""

    output_dir: Optional[Path] = Field(default=None, description="产物目录, 默认 OUTPUT_DIR/<实验名>")
    dump_matrices: bool = Field(default=False, description="以 Matrix Market 格式导出组装矩阵")


class MeshParams(ExperimentParams):
    mesh: str = Field(..., description="网格来源 token 或 OBJ 路径")
    normals: NormalsChoice = Field(default="auto", description="法向来源")
    unit_area: bool = Field(default=False, description="缩放至单位面积")


class SpectrumSphereParams(ExperimentParams):
    n: int = Field(default=10000, ge=4, description="随机球面顶点数")
    seeds: int = Field(default=settings.DEFAULT_SEEDS, ge=1, description="随机剖分个数")
    seed: int = Field(default=0, ge=0, description="首个种子, 第 i 次运行使用 seed + i")
    count: int = Field(default=30, ge=1, description="特征值个数")
    aniso: bool = False
    lump: bool = Field(default=False, description="使用集中质量矩阵")
    icosphere: Optional[int] = Field(default=None, ge=0, description="改用 icosphere, 给出细分次数")
    normals: NormalsChoice = "auto"


class HodgeCompareParams(MeshParams):
    count: int = Field(default=20, ge=1, description="配对特征值个数")
    subdivide: int = Field(default=0, ge=0, description="额外 Loop 细分次数")


class RotationInvarianceParams(MeshParams):
    pass


class BracketSphereParams(ExperimentParams):
    tess: Tessellation = Tessellation.ICOSA
    passes: int = Field(default=5, ge=0, description="icosphere 细分次数")
    n: int = Field(default=10000, ge=4, description="随机凸包顶点数")
    b: int = Field(default=2, ge=1, description="带宽")
    seed: int = Field(default=0, ge=0)
    coordinate: bool = Field(default=False, description="使用 pi(e1), pi(e2) 坐标场")
    mode: BracketModeChoice = "project"


class BracketTorusParams(ExperimentParams):
    n: int = Field(default=10000, ge=16)
    b: int = Field(default=5, ge=1)
    seeds: int = Field(default=settings.DEFAULT_SEEDS, ge=1)
    seed: int = Field(default=0, ge=0)
    mode: BracketModeChoice = "project"


class InterpolateParams(MeshParams):
    constraints: str = Field(..., description="v:a,b;v:a,b,c")
    energy: EnergyKind = EnergyKind.CONNECTION


class VectorHeatParams(MeshParams):
    sources: str = Field(..., description="v:a,b;v:a,b,c")
    t: Optional[float] = Field(default=None, gt=0.0, description="扩散时间, 默认平均边长平方")
    labels: bool = Field(default=False, description="同时输出最近源标签")
    consistent_mass: bool = Field(default=False, description="标量扩散改用一致质量矩阵")


class EigenfieldsParams(MeshParams):
    energy: EnergyKind = EnergyKind.CONNECTION
    k: int = Field(default=10, ge=1)
    lump: bool = False
    grade: bool = Field(default=False, description="按散度对成对特征空间排序")

    @model_validator(mode="after")
    def even_k_for_grading(self):
        if self.grade and self.k % 2:
            raise ValueError("--grade needs an even --k")
        return self
