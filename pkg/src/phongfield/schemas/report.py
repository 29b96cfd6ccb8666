#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""实验报告 Schema"""

import math
from typing import Any

from pydantic import Field, field_validator

from phongfield.core.config import settings

from .base import BaseSchema


class ExperimentReport(BaseSchema):
    """一次实验运行的机器可读结果

    parameters 足以复现本次运行（含随机种子）；所有指标均为有限实数。
    """

    experiment: str = Field(..., description="实验名称 (子命令)")
    parameters: dict[str, Any] = Field(default_factory=dict, description="完整参数, 含随机种子")
    metrics: dict[str, float] = Field(default_factory=dict, description="命名指标")
    artifacts: dict[str, str] = Field(default_factory=dict, description="产物路径 (CSV / PLY / MTX)")
    version: str = Field(default=settings.PROJECT_VERSION)

    @field_validator("metrics")
    @classmethod
    def metrics_finite(cls, v: dict[str, float]) -> dict[str, float]:
        bad = [k for k, x in v.items() if not math.isfinite(x)]
        if bad:
            raise ValueError(f"non-finite metrics: {', '.join(sorted(bad))}")
        return v
