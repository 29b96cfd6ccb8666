#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""几何模块：网格拓扑、法向、细分与切平面几何"""

from .endomorphism import decompose, hom_inner_product
from .gauss_map import corner_transport, default_frames, gauss_map, realization
from .normals import compute_vertex_normals
from .rodrigues import rodrigues, rodrigues_directional_derivative
from .subdivision import loop_subdivide
from .topology import aspect_ratios, genus, rescale_unit_area, validate_mesh

__all__ = [
    "aspect_ratios",
    "compute_vertex_normals",
    "corner_transport",
    "decompose",
    "default_frames",
    "gauss_map",
    "genus",
    "hom_inner_product",
    "loop_subdivide",
    "realization",
    "rescale_unit_area",
    "rodrigues",
    "rodrigues_directional_derivative",
    "validate_mesh",
]
