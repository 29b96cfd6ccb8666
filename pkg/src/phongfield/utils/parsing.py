#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""命令行参数解析工具

把 CLI 传入的字符串 token 转换为网格与约束：
- 网格来源: ``torus:N[:seed]``、``sphere:N[:seed]``、``aniso-sphere:N[:seed]``、
  ``icosphere:P`` 或 OBJ 文件路径
- 向量约束: ``v:a,b;v:a,b,c``（2 个分量为标架系数，3 个分量为空间向量）
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from phongfield.core.constants import NormalMode
from phongfield.core.exceptions import ParameterError
from phongfield.geometry.normals import compute_vertex_normals
from phongfield.geometry.topology import rescale_unit_area
from phongfield.models.mesh import OrientedMesh
from phongfield.repositories.obj_repository import load_obj
from phongfield.schemas.generator import GeneratorSidecar
from phongfield.synth.sphere import gen_icosphere, gen_sphere_random
from phongfield.synth.torus import TorusMesh, gen_torus

# auto: OBJ vn 记录 / 生成网格的解析法向
NORMAL_CHOICES = ("auto", "recompute", NormalMode.AREA_WEIGHTED.value, NormalMode.LOOP_LIMIT.value)


@dataclass(frozen=True, eq=False)
class MeshSource:
    """解析后的网格 token

    Attributes:
        mesh: 定向网格
        label: 原始 token
        torus: 生成环面时的参数空间数据
        sidecar: 合成网格的生成参数
    """

    mesh: OrientedMesh
    label: str
    torus: Optional[TorusMesh] = None
    sidecar: Optional[GeneratorSidecar] = None


def to_int(token: str, what: str) -> int:
    """将 token 转换为整数，失败时抛出 ParameterError。"""
    try:
        return int(token)
    except (TypeError, ValueError):
        raise ParameterError(f"{what} must be an integer, got '{token}'") from None


def _seed(parts: list[str], index: int) -> int:
    return to_int(parts[index], "seed") if len(parts) > index else 0


def _with_normals(mesh: OrientedMesh, normals: str) -> OrientedMesh:
    if normals == "auto":
        return mesh
    mode = NormalMode.LOOP_LIMIT if normals == "recompute" else NormalMode(normals)
    return OrientedMesh(mesh.mesh, compute_vertex_normals(mesh.mesh, mode))


def parse_mesh_source(token: str, normals: str = "auto", unit_area: bool = False) -> MeshSource:
    """解析网格来源 token。

    Args:
        token: Generator token or OBJ path.
        normals: One of NORMAL_CHOICES.
        unit_area: Rescale the mesh to unit total area.

    Raises:
        ParameterError: On malformed tokens or a missing file.
    """
    if normals not in NORMAL_CHOICES:
        raise ParameterError(f"unknown normals mode '{normals}'", choices=list(NORMAL_CHOICES))

    parts = token.split(":")
    kind = parts[0].lower()
    torus = None
    if kind == "torus" and len(parts) in (2, 3):
        n, seed = to_int(parts[1], "vertex count"), _seed(parts, 2)
        torus = gen_torus(n, seed)
        mesh = torus.mesh
        sidecar_params: dict = {"n": n}
    elif kind in ("sphere", "aniso-sphere") and len(parts) in (2, 3):
        n, seed = to_int(parts[1], "vertex count"), _seed(parts, 2)
        aniso = kind == "aniso-sphere"
        mesh = gen_sphere_random(n, seed, aniso=aniso)
        sidecar_params = {"n": n, "aniso": aniso}
    elif kind == "icosphere" and len(parts) == 2:
        passes, seed = to_int(parts[1], "subdivision passes"), None
        mesh = gen_icosphere(passes)
        sidecar_params = {"passes": passes}
    else:
        path = Path(token)
        if not path.is_file():
            raise ParameterError(f"mesh source '{token}' is neither a generator token nor a file")
        mesh = load_obj(path, recompute_normals=normals != "auto")
        if normals == NormalMode.AREA_WEIGHTED.value:
            mesh = _with_normals(mesh, normals)
        if unit_area:
            mesh = rescale_unit_area(mesh)
        return MeshSource(mesh=mesh, label=token)

    if normals != "auto":
        if torus is not None:
            torus = TorusMesh(
                mesh=_with_normals(mesh, normals),
                params=torus.params,
                corner_params=torus.corner_params,
                seed=torus.seed,
            )
            mesh = torus.mesh
        else:
            mesh = _with_normals(mesh, normals)
    if unit_area:
        mesh = rescale_unit_area(mesh)
        # parameter data no longer matches the embedding
        torus = None
    sidecar = GeneratorSidecar(
        generator=kind,
        params={**sidecar_params, "normals": normals, "unit_area": unit_area},
        seed=seed,
        num_vertices=mesh.num_vertices,
        num_triangles=mesh.num_triangles,
    )
    return MeshSource(mesh=mesh, label=token, torus=torus, sidecar=sidecar)


def parse_vector_map(token: str) -> dict[int, np.ndarray]:
    """解析 ``v:a,b;v:a,b,c`` 形式的逐顶点向量。

    Raises:
        ParameterError: On malformed entries or repeated vertices.
    """
    out: dict[int, np.ndarray] = {}
    for entry in filter(None, (e.strip() for e in token.split(";"))):
        vertex, sep, values = entry.partition(":")
        if not sep:
            raise ParameterError(f"constraint '{entry}' must look like v:a,b")
        v = to_int(vertex.strip(), "vertex")
        if v in out:
            raise ParameterError(f"vertex {v} given twice", vertex=v)
        try:
            vec = np.array([float(x) for x in values.split(",")], dtype=np.float64)
        except ValueError:
            raise ParameterError(f"constraint '{entry}' has a non-numeric component") from None
        if vec.size not in (2, 3):
            raise ParameterError(f"constraint '{entry}' needs 2 or 3 components")
        out[v] = vec
    if not out:
        raise ParameterError("no constraints given")
    return out
