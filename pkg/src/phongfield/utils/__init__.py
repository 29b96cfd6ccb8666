"""utils 模块"""

from .parsing import MeshSource, parse_mesh_source, parse_vector_map

__all__ = ["MeshSource", "parse_mesh_source", "parse_vector_map"]
