#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""领域模型"""

from .endo import Endo2
from .field import AmbientField, VertexField
from .mesh import OrientedMesh, TriangleMesh
from .patch import BaryPoint, TrianglePatch

__all__ = [
    "AmbientField",
    "BaryPoint",
    "Endo2",
    "OrientedMesh",
    "TriangleMesh",
    "TrianglePatch",
    "VertexField",
]
