"""网格上的有限元空间：标架、三角形 patch 与缓存的全局矩阵"""

from __future__ import annotations

import threading

import numpy as np
from scipy import sparse

from phongfield.core.constants import EnergyKind
from phongfield.core.logging_config import get_logger
from phongfield.fem.assembly import assemble, assemble_many, lump
from phongfield.fem.elements import (
    sample_quadrature,
    scalar_element_mass,
    scalar_element_stiffness,
    vector_element_mass,
    vector_element_stiffness_components,
)
from phongfield.fem.quadrature import QuadratureRule, quadrature_3pt
from phongfield.geometry.gauss_map import default_frames
from phongfield.models.mesh import OrientedMesh
from phongfield.models.patch import TrianglePatch
from phongfield.schemas.energy import EnergySpec

logger = get_logger(__name__)

COMPONENTS = ("scalar", "traceless", "antisym")


class TangentBasis:
    """定向网格上的标量帽函数基与输运向量基

    全局矩阵在首次使用时组装并缓存；任意 EnergySpec 的刚度矩阵
    都是三个缓存分量矩阵的线性组合。

    Example:
        basis = TangentBasis(mesh)
        M = basis.vector_mass()
        S = basis.stiffness(EnergyKind.CONNECTION)
    """

    def __init__(
        self,
        mesh: OrientedMesh,
        frames: np.ndarray | None = None,
        quadrature: QuadratureRule | None = None,
    ):
        self.mesh = mesh
        self.frames = default_frames(mesh.normals) if frames is None else np.asarray(frames, dtype=np.float64)
        self.quadrature = quadrature or quadrature_3pt()
        self._cache: dict[str, sparse.csr_matrix] = {}
        self._lock = threading.Lock()

        cond = self.patch().metric_condition()
        self.max_metric_condition = float(cond.max()) if cond.size else 1.0
        logger.info(
            f"TangentBasis: {mesh.num_vertices} vertices, {mesh.num_triangles} triangles, "
            f"max cond(g) {self.max_metric_condition:.3g}, "
            f"min <n_i, n> {mesh.min_consistency():.4f}"
        )

    @property
    def num_vertices(self) -> int:
        return self.mesh.num_vertices

    @property
    def dim(self) -> int:
        """向量自由度个数 2|V|"""
        return 2 * self.mesh.num_vertices

    def patch(self, tri_idx: np.ndarray | None = None) -> TrianglePatch:
        return TrianglePatch.from_mesh(self.mesh, self.frames, tri_idx)

    def _cached(self, key: str, build) -> sparse.csr_matrix:
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    # ========== 标量空间 ==========

    def scalar_mass(self, lumped: bool = False) -> sparse.csr_matrix:
        M = self._cached(
            "scalar_mass",
            lambda: assemble(self.mesh, lambda idx: scalar_element_mass(self.patch(idx)), 1, label="scalar mass"),
        )
        return lump(M) if lumped else M

    def scalar_stiffness(self) -> sparse.csr_matrix:
        return self._cached(
            "scalar_stiffness",
            lambda: assemble(
                self.mesh, lambda idx: scalar_element_stiffness(self.patch(idx)), 1, label="scalar stiffness"
            ),
        )

    # ========== 向量空间 ==========

    def vector_mass(self, lumped: bool = False) -> sparse.csr_matrix:
        M = self._cached(
            "vector_mass",
            lambda: assemble(
                self.mesh,
                lambda idx: vector_element_mass(self.patch(idx), self.quadrature),
                2,
                label="vector mass",
            ),
        )
        return lump(M) if lumped else M

    def component_stiffness(self) -> dict[str, sparse.csr_matrix]:
        """标量（散度）、无迹、反对称（旋度）三个分量的刚度矩阵"""
        if not all(f"stiffness_{c}" in self._cache for c in COMPONENTS):
            self._assemble_components()
        return {c: self._cache[f"stiffness_{c}"] for c in COMPONENTS}

    def _assemble_components(self) -> None:
        q = self.quadrature

        def element(idx: np.ndarray):
            patch = self.patch(idx)
            return vector_element_stiffness_components(patch, q, sample_quadrature(patch, q))

        mats = assemble_many(self.mesh, element, 2, len(COMPONENTS), label="component stiffness")
        with self._lock:
            for name, m in zip(COMPONENTS, mats):
                self._cache[f"stiffness_{name}"] = m

    def stiffness(self, spec: EnergySpec | EnergyKind | str) -> sparse.csr_matrix:
        """能量规格或具名能量对应的全局刚度矩阵"""
        if not isinstance(spec, EnergySpec):
            spec = EnergySpec.from_kind(spec)
        spec.require_nonzero()
        parts = self.component_stiffness()
        total = None
        for c, name in zip(spec.weights, COMPONENTS):
            if c:
                total = c * parts[name] if total is None else total + c * parts[name]
        return total.tocsr()

    def matrices(self) -> dict[str, sparse.csr_matrix]:
        """已组装的全部矩阵，按名称索引"""
        return dict(self._cache)
