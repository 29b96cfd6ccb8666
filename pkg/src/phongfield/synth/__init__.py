#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""合成基准：生成网格、带限场与参考谱"""

from .bandlimited import (
    BandlimitedField,
    SphereBracket,
    SphereField,
    coordinate_fields,
    random_field_sphere,
    random_field_torus,
)
from .reference import sphere_connection_reference
from .sphere import gen_icosphere, gen_sphere_random
from .torus import TorusMesh, gen_torus

__all__ = [
    "BandlimitedField",
    "SphereBracket",
    "SphereField",
    "TorusMesh",
    "coordinate_fields",
    "gen_icosphere",
    "gen_sphere_random",
    "gen_torus",
    "random_field_sphere",
    "random_field_torus",
    "sphere_connection_reference",
]
