"""切向量场的 Lie 括号

逐点 [X, Y](p) = (grad Y)(p) X(p) - (grad X)(p) Y(p)，使用离散场的协变导数。
投影括号求解 M z = b，b 为逐点括号的弱形式。
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from phongfield.core.exceptions import ParameterError
from phongfield.core.logging_config import get_logger
from phongfield.fem.assembly import assemble_rhs
from phongfield.fem.basis import TangentBasis
from phongfield.fem.solvers import solve_spd
from phongfield.fields.evaluation import (
    FieldJet,
    ambient_field_jet,
    project_ambient,
    vertex_field_jet,
)
from phongfield.models.field import AmbientField, VertexField

logger = get_logger(__name__)

Field = VertexField | AmbientField


class BracketMode(str, Enum):
    """环境场输入的求导方式"""
    PROJECT = "project"  # 先投影到 span{omega}
    DIRECT = "direct"  # 使用解析 Jacobian


def _prepare(basis: TangentBasis, field: Field, mode: BracketMode) -> Field:
    if isinstance(field, VertexField):
        return field
    if mode is BracketMode.DIRECT:
        if not field.has_jacobian:
            raise ParameterError(f"direct bracket needs a jacobian for {field.name}")
        return field
    logger.debug(f"Projecting {field.name} onto the vector basis")
    return project_ambient(basis, field)


def _jet(basis: TangentBasis, field: Field, tri_idx, st) -> FieldJet:
    if isinstance(field, VertexField):
        return vertex_field_jet(basis, field, tri_idx, st)
    return ambient_field_jet(basis, field, tri_idx, st)


def _bracket_coords(jx: FieldJet, jy: FieldJet) -> np.ndarray:
    return (
        np.einsum("pij,pj->pi", jy.cov, jx.coords)
        - np.einsum("pij,pj->pi", jx.cov, jy.coords)
    )


def lie_bracket_pointwise(
    basis: TangentBasis,
    X: Field,
    Y: Field,
    tri_idx,
    st,
    mode: BracketMode | str = BracketMode.PROJECT,
) -> tuple[np.ndarray, np.ndarray]:
    """给定点处的 [X, Y]

    Returns:
        (coords, realized)：参考坐标下的括号 (P, 2) 与垂直于 Phong 法向的 3D 向量 (P, 3)
    """
    mode = BracketMode(mode)
    X = _prepare(basis, X, mode)
    Y = _prepare(basis, Y, mode)
    jx = _jet(basis, X, tri_idx, st)
    jy = _jet(basis, Y, tri_idx, st)
    coords = _bracket_coords(jx, jy)
    return coords, np.einsum("pai,pi->pa", jx.dphi_t, coords)


def bracket_field(
    basis: TangentBasis,
    X: Field,
    Y: Field,
    mode: BracketMode | str = BracketMode.PROJECT,
) -> AmbientField:
    """把逐点括号包装成 AmbientField（输入只预处理一次）"""
    mode = BracketMode(mode)
    X = _prepare(basis, X, mode)
    Y = _prepare(basis, Y, mode)

    def evaluator(tri_idx, st):
        jx = _jet(basis, X, tri_idx, st)
        jy = _jet(basis, Y, tri_idx, st)
        return np.einsum("pai,pi->pa", jx.dphi_t, _bracket_coords(jx, jy))

    return AmbientField(evaluator=evaluator, name="bracket")


def bracket_weak_rhs(
    basis: TangentBasis,
    X: Field,
    Y: Field,
    mode: BracketMode | str = BracketMode.PROJECT,
) -> np.ndarray:
    """b_i = integral of <omega_i, [X, Y]>."""
    return assemble_rhs(basis, bracket_field(basis, X, Y, mode))


def lie_bracket_project(
    basis: TangentBasis,
    X: Field,
    Y: Field,
    mode: BracketMode | str = BracketMode.PROJECT,
) -> VertexField:
    """逐点括号到 span{omega} 的投影：M z = b"""
    b = bracket_weak_rhs(basis, X, Y, mode)
    z = solve_spd(basis.vector_mass(), b, label="vector mass")
    return VertexField(z)
