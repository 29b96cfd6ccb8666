"""带闭式导数与括号的带限随机场

带限场是整数格 |k|_inf <= b 上的实三角多项式 Z(x) = sum_k c_k exp(i <k, x>)，
每个输出分量满足 c_{-k} = conj(c_k)。球面场取切向投影 pi(Z)(x) = Z(x) - x <Z(x), x>；
环面场是参数正方形上的平面场经 dPhi 推前。
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from phongfield.core.config import settings
from phongfield.core.exceptions import ParameterError
from phongfield.models.field import AmbientField
from phongfield.models.mesh import OrientedMesh
from phongfield.synth.torus import TorusMesh, torus_hessian, torus_jacobian

# 每个求值块的复数元素数
_BLOCK_ENTRIES = 2**24


class BandlimitedField:
    """R^d 上的实向量值三角多项式

    Attributes:
        bandwidth: b，频率取遍 [-b, b]^d
        coeffs: 复数组 (C, 2b+1, ..., 2b+1)
    """

    def __init__(self, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        sizes = coeffs.shape[1:]
        if not sizes or len(set(sizes)) != 1 or sizes[0] % 2 == 0:
            raise ParameterError("coefficients must have shape (C, 2b+1, ..., 2b+1)")
        lattice_axes = tuple(range(1, coeffs.ndim))
        # 共轭对称
        self.coeffs = 0.5 * (coeffs + np.conj(np.flip(coeffs, axis=lattice_axes)))
        self.components = coeffs.shape[0]
        self.dim = coeffs.ndim - 1
        self.bandwidth = (sizes[0] - 1) // 2
        self.frequencies = np.arange(-self.bandwidth, self.bandwidth + 1)

    @classmethod
    def random(cls, bandwidth: int, dim: int, components: int, rng: np.random.Generator) -> "BandlimitedField":
        """系数独立同分布，服从复平面正方形 [-1, 1]^2 上的均匀分布"""
        if bandwidth < 0:
            raise ParameterError("bandwidth must be nonnegative", bandwidth=bandwidth)
        shape = (components,) + (2 * bandwidth + 1,) * dim
        return cls(rng.uniform(-1.0, 1.0, shape) + 1j * rng.uniform(-1.0, 1.0, shape))

    @classmethod
    def constant(cls, value, dim: int) -> "BandlimitedField":
        """取给定值的常值场（带宽 0）"""
        value = np.asarray(value, dtype=np.float64)
        return cls(value.reshape((-1,) + (1,) * dim).astype(np.complex128))

    def _chunk(self) -> int:
        per_point = self.components * len(self.frequencies) ** max(self.dim - 1, 1)
        return max(1, min(settings.FIELD_CHUNK, _BLOCK_ENTRIES // per_point))

    def _contract(self, x: np.ndarray, derivative_axis: int | None = None) -> np.ndarray:
        """sum_k c_k prod_a E_a(x_a)[k_a], optionally times i k_axis; (P, C)."""
        tables = [np.exp(1j * x[:, a, None] * self.frequencies) for a in range(self.dim)]
        if derivative_axis is not None:
            tables[derivative_axis] = tables[derivative_axis] * (1j * self.frequencies)
        # 先收缩最后一个格轴：(C, n, ..., n) -> (P, C, n, ...)
        acc = np.einsum("c...k,pk->pc...", self.coeffs, tables[-1])
        for a in range(self.dim - 2, -1, -1):
            acc = np.einsum("pc...k,pk->pc...", acc, tables[a])
        return acc.real

    def __call__(self, x: np.ndarray) -> np.ndarray:
        """Values at points x of shape (P, d), returned as (P, C)."""
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        step = self._chunk()
        return np.concatenate(
            [self._contract(x[i:i + step]) for i in range(0, len(x), step)]
        ) if len(x) else np.zeros((0, self.components))

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        """Derivative dZ_c / dx_a at points x, shape (P, C, d)."""
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if not len(x):
            return np.zeros((0, self.components, self.dim))
        step = self._chunk()
        blocks = []
        for i in range(0, len(x), step):
            xi = x[i:i + step]
            blocks.append(np.stack([self._contract(xi, a) for a in range(self.dim)], axis=-1))
        return np.concatenate(blocks)


# ========== 球面 ==========

def _unit_points(mesh: OrientedMesh, tri_idx, st):
    """Radial projection x = y / |y| of the flat mesh point y; returns (x, y, |y|, dPhi)."""
    c = mesh.vertices[mesh.triangles[tri_idx]]
    dphi = np.stack([c[:, 1] - c[:, 0], c[:, 2] - c[:, 0]], axis=-1)
    y = c[:, 0] + np.einsum("pas,ps->pa", dphi, st)
    r = np.linalg.norm(y, axis=1)
    return y / r[:, None], r, dphi


class SphereVectorField:
    """以 R^3 上闭式给出的单位球面切向量场"""

    name = "sphere field"

    def value(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def jacobian(self, x: np.ndarray) -> np.ndarray | None:
        return None

    def on_mesh(self, mesh: OrientedMesh) -> AmbientField:
        """在网格点的径向投影处求值

        (s, t) 方向的 Jacobian 由环境 Jacobian、d(y / |y|) = (I - x x^T) / |y| 与 dPhi 链式相乘。
        """

        def evaluator(tri_idx, st):
            x, _, _ = _unit_points(mesh, tri_idx, st)
            return self.value(x)

        jacobian = None
        if type(self).jacobian is not SphereVectorField.jacobian:
            def jacobian(tri_idx, st):
                x, r, dphi = _unit_points(mesh, tri_idx, st)
                proj = (np.eye(3) - x[:, :, None] * x[:, None, :]) / r[:, None, None]
                return self.jacobian(x) @ proj @ dphi

        return AmbientField(evaluator=evaluator, jacobian=jacobian, name=self.name)


class SphereField(SphereVectorField):
    """pi(Z) for an R^3-valued band-limited Z."""

    def __init__(self, base: BandlimitedField, name: str = "sphere field"):
        if base.dim != 3 or base.components != 3:
            raise ParameterError("sphere fields need a 3D vector-valued base field")
        self.base = base
        self.name = name

    def value(self, x: np.ndarray) -> np.ndarray:
        Z = self.base(x)
        return Z - x * np.einsum("pa,pa->p", Z, x)[:, None]

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        """D pi(Z) = DZ - x (Z^T + x^T DZ) - <Z, x> I, shape (P, 3, 3)."""
        Z = self.base(x)
        DZ = self.base.jacobian(x)
        row = Z + np.einsum("pa,pab->pb", x, DZ)
        zx = np.einsum("pa,pa->p", Z, x)
        return DZ - x[:, :, None] * row[:, None, :] - zx[:, None, None] * np.eye(3)


class SphereBracket(SphereVectorField):
    """两个球面场的解析括号 pi(DY X - DX Y)"""

    def __init__(self, X: SphereField, Y: SphereField):
        self.X = X
        self.Y = Y
        self.name = f"[{X.name}, {Y.name}]"

    def value(self, x: np.ndarray) -> np.ndarray:
        Xv, Yv = self.X.value(x), self.Y.value(x)
        Z = (
            np.einsum("pab,pb->pa", self.Y.jacobian(x), Xv)
            - np.einsum("pab,pb->pa", self.X.jacobian(x), Yv)
        )
        return Z - x * np.einsum("pa,pa->p", Z, x)[:, None]


def random_field_sphere(b: int, seed: int | np.random.Generator) -> SphereField:
    """随机带限 R^3 场的切向投影"""
    if b < 1:
        raise ParameterError("bandwidth must be at least 1", b=b)
    rng = np.random.default_rng(seed)
    return SphereField(BandlimitedField.random(b, 3, 3, rng), name=f"sphere b={b}")


def random_sphere_pair(b: int, seed: int) -> tuple[SphereField, SphereField]:
    rng = np.random.default_rng(seed)
    return random_field_sphere(b, rng), random_field_sphere(b, rng)


def coordinate_fields() -> tuple[SphereField, SphereField]:
    """pi(e_1) and pi(e_2)."""
    return (
        SphereField(BandlimitedField.constant([1.0, 0.0, 0.0], 3), name="pi(e1)"),
        SphereField(BandlimitedField.constant([0.0, 1.0, 0.0], 3), name="pi(e2)"),
    )


# ========== 环面 ==========

class PlanarVectorField:
    """参数平面上 2 pi 周期的向量场"""

    name = "planar field"

    def value(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def jacobian(self, u: np.ndarray) -> np.ndarray | None:
        return None

    def on_torus(self, torus: TorusMesh) -> AmbientField:
        """在 u = sum_i psi_i u_i 处的推前 dPhi(u) X(u)

        (s, t) 方向的 Jacobian 为 (D^2 Phi[X] + dPhi DX) du/d(s, t)。
        """

        def evaluator(tri_idx, st):
            u = torus.points(tri_idx, st)
            return np.einsum("pab,pb->pa", torus_jacobian(u), self.value(u))

        jacobian = None
        if type(self).jacobian is not PlanarVectorField.jacobian:
            def jacobian(tri_idx, st):
                u = torus.points(tri_idx, st)
                X = self.value(u)
                d = np.einsum("piab,pb->pia", torus_hessian(u), X)
                d = d + torus_jacobian(u) @ self.jacobian(u)
                return d @ torus.param_differential(tri_idx)

        return AmbientField(evaluator=evaluator, jacobian=jacobian, name=self.name)


class PlanarField(PlanarVectorField):
    def __init__(self, base: BandlimitedField, name: str = "planar field"):
        if base.dim != 2 or base.components != 2:
            raise ParameterError("planar fields need a 2D vector-valued base field")
        self.base = base
        self.name = name

    def value(self, u: np.ndarray) -> np.ndarray:
        return self.base(u)

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        return self.base.jacobian(u)


class PlanarBracket(PlanarVectorField):
    """参数平面上的 DY X - DX Y"""

    def __init__(self, X: PlanarVectorField, Y: PlanarVectorField):
        self.X = X
        self.Y = Y
        self.name = f"[{X.name}, {Y.name}]"

    def value(self, u: np.ndarray) -> np.ndarray:
        return (
            np.einsum("pab,pb->pa", self.Y.jacobian(u), self.X.value(u))
            - np.einsum("pab,pb->pa", self.X.jacobian(u), self.Y.value(u))
        )


@dataclass(frozen=True)
class TorusFieldPair:
    """两个平面场及其解析括号"""

    X: PlanarField
    Y: PlanarField

    @property
    def bracket(self) -> PlanarBracket:
        return PlanarBracket(self.X, self.Y)


def random_field_torus(b: int, seed: int) -> TorusFieldPair:
    """一对频率 |k|_inf <= b 的随机周期平面场"""
    if b < 1:
        raise ParameterError("bandwidth must be at least 1", b=b)
    rng = np.random.default_rng(seed)
    return TorusFieldPair(
        X=PlanarField(BandlimitedField.random(b, 2, 2, rng), name=f"X b={b}"),
        Y=PlanarField(BandlimitedField.random(b, 2, 2, rng), name=f"Y b={b}"),
    )
