#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""phongfield 包

Tangent vector fields on triangle meshes with Phong-interpolated normals.
版本号从 pyproject.toml 读取。
"""

from importlib.metadata import version, PackageNotFoundError

try:
    __version__ = version("phongfield")
except PackageNotFoundError:
    # 开发模式下可能未安装包
    __version__ = "0.1.0"
