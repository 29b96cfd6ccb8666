"""离散场求值，以及环境场到基上的投影"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from phongfield.core.exceptions import ParameterError
from phongfield.fem.assembly import assemble_rhs, dof_indices
from phongfield.fem.basis import TangentBasis
from phongfield.fem.elements import sample_basis
from phongfield.fem.solvers import solve_spd
from phongfield.geometry.gauss_map import gauss_map, realization
from phongfield.geometry.rodrigues import rodrigues, rodrigues_directional_derivative
from phongfield.models.endo import Endo2
from phongfield.models.field import AmbientField, VertexField
from phongfield.models.patch import HAT_GRADIENTS


@dataclass(frozen=True, eq=False)
class FieldJet:
    """一批点上场的取值与协变导数

    Attributes:
        value: (P, 3) 实现后的 3D 向量
        coords: (P, 2) 同一向量的参考坐标
        cov: (P, 2, 2) 协变导数
        g: (P, 2, 2) 所在三角形的度量
        dphi_t: (P, 3, 2) 实现微分
    """

    value: np.ndarray
    coords: np.ndarray
    cov: np.ndarray
    g: np.ndarray
    dphi_t: np.ndarray

    def derivative(self) -> Endo2:
        return Endo2(self.cov, self.g)


def _points(tri_idx, st) -> tuple[np.ndarray, np.ndarray]:
    tri_idx = np.atleast_1d(np.asarray(tri_idx, dtype=np.int64))
    st = np.asarray(st, dtype=np.float64)
    if st.shape == (2,):
        st = np.broadcast_to(st, (len(tri_idx), 2))
    if st.shape != (len(tri_idx), 2):
        raise ParameterError("points must have shape (P, 2)", shape=list(st.shape))
    return tri_idx, st


def local_coefficients(basis: TangentBasis, f: VertexField, tri_idx: np.ndarray) -> np.ndarray:
    """每个三角形六个局部基场的系数 (P, 6)"""
    if f.num_vertices != basis.num_vertices:
        raise ParameterError(
            "field size does not match the mesh",
            field_vertices=f.num_vertices,
            mesh_vertices=basis.num_vertices,
        )
    return f.coeffs[dof_indices(basis.mesh.triangles[tri_idx], 2)]


def vertex_field_jet(basis: TangentBasis, f: VertexField, tri_idx, st) -> FieldJet:
    tri_idx, st = _points(tri_idx, st)
    patch = basis.patch(tri_idx)
    sample = sample_basis(patch, st)
    c = local_coefficients(basis, f, tri_idx)
    value = np.einsum("pj,pja->pa", c, sample.values)
    return FieldJet(
        value=value,
        coords=np.einsum("pia,pa->pi", sample.dphi_t_inv, value),
        cov=np.einsum("pj,pjrs->prs", c, sample.cov),
        g=patch.g,
        dphi_t=sample.dphi_t,
    )


def ambient_field_jet(basis: TangentBasis, field: AmbientField, tri_idx, st) -> FieldJet:
    """由环境 Jacobian 得到解析场的 jet

    协变导数为环境导数经实现微分拉回，法向分量被丢弃。
    """
    tri_idx, st = _points(tri_idx, st)
    patch = basis.patch(tri_idx)
    N, _ = gauss_map(patch, st)
    dphi_t, dphi_t_inv = realization(patch, st, N=N)
    value = field(tri_idx, st)
    jac = field.derivative(tri_idx, st)
    return FieldJet(
        value=value,
        coords=np.einsum("pia,pa->pi", dphi_t_inv, value),
        cov=dphi_t_inv @ jac,
        g=patch.g,
        dphi_t=dphi_t,
    )


def eval_field(
    basis: TangentBasis,
    f: VertexField,
    tri_idx,
    st,
) -> tuple[np.ndarray, Endo2]:
    """f 在给定点处的实现值 (P, 3) 与协变导数"""
    jet = vertex_field_jet(basis, f, tri_idx, st)
    return jet.value, jet.derivative()


def as_ambient(basis: TangentBasis, f: VertexField, name: str = "vertex field") -> AmbientField:
    """把 VertexField 包装成带精确 Jacobian 的 AmbientField"""

    def evaluator(tri_idx, st):
        return vertex_field_jet(basis, f, tri_idx, st).value

    def jacobian(tri_idx, st):
        tri_idx, st = _points(tri_idx, st)
        sample = sample_basis(basis.patch(tri_idx), st)
        c = local_coefficients(basis, f, tri_idx)
        return np.einsum("pj,pjas->pas", c, sample.dvalues)

    return AmbientField(evaluator=evaluator, jacobian=jacobian, name=name)


def project_ambient(basis: TangentBasis, field: AmbientField, lumped: bool = False) -> VertexField:
    """环境场到 span{omega} 的 M 正交投影"""
    b = assemble_rhs(basis, field)
    z = solve_spd(basis.vector_mass(lumped=lumped), b, label="vector mass")
    return VertexField(z)


def gradient_field(basis: TangentBasis, u: np.ndarray, name: str = "gradient") -> AmbientField:
    """分片线性标量函数的实现梯度

    每个三角形上坐标梯度 g^-1 du 经实现微分送入 Phong 切平面，
    场通过 R(n, N(p)) 随 p 变化。
    """
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (basis.num_vertices,):
        raise ParameterError("scalar function must have one value per vertex", shape=list(u.shape))

    def _flat_gradient(tri_idx):
        patch = basis.patch(tri_idx)
        du = HAT_GRADIENTS.T @ u[basis.mesh.triangles[tri_idx]].T  # (2, P)
        grad = np.einsum("pab,bp->pa", patch.g_inv, du)
        return patch, np.einsum("pai,pi->pa", patch.dphi, grad)

    def evaluator(tri_idx, st):
        tri_idx, st = _points(tri_idx, st)
        patch, w = _flat_gradient(tri_idx)
        N, _ = gauss_map(patch, st)
        R = rodrigues(patch.face_normal, N, index=patch.index)
        return np.einsum("pab,pb->pa", R, w)

    def jacobian(tri_idx, st):
        tri_idx, st = _points(tri_idx, st)
        patch, w = _flat_gradient(tri_idx)
        N, dN = gauss_map(patch, st)
        dR = rodrigues_directional_derivative(patch.face_normal, N, dN, index=patch.index)
        return np.einsum("psab,pb->pas", dR, w)

    return AmbientField(evaluator=evaluator, jacobian=jacobian, name=name)
