#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""生成器参数 sidecar

Generated meshes are written next to a JSON file holding everything needed
to regenerate them.
"""

from typing import Any, Optional

from pydantic import Field

from phongfield.core.config import settings

from .base import BaseSchema


class GeneratorSidecar(BaseSchema):
    """一次合成网格生成的参数"""

    generator: str = Field(..., description="生成器: sphere / icosphere / torus")
    params: dict[str, Any] = Field(default_factory=dict, description="生成参数 (含 aniso / passes / normals)")
    seed: Optional[int] = Field(default=None, description="随机种子")
    num_vertices: int = Field(..., ge=0)
    num_triangles: int = Field(..., ge=0)
    version: str = Field(default=settings.PROJECT_VERSION, description="phongfield 版本")
