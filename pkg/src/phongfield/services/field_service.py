"""生成向量场的实验：稀疏插值、向量热方法与特征场

每个实验输出逐顶点 CSV 表，以及实现后 3D 向量的二进制 PLY 文件。
"""

import numpy as np

from phongfield.core.logging_config import get_logger
from phongfield.fem.basis import TangentBasis
from phongfield.fields.heat import source_labels, vector_heat
from phongfield.fields.interpolation import constraint_map, energy, interpolate_sparse
from phongfield.fields.spectral import eigenfields, grade_spectrum, j_pair_defects, pair_gaps
from phongfield.models.field import VertexField
from phongfield.repositories import CsvTable
from phongfield.schemas.params import EigenfieldsParams, InterpolateParams, VectorHeatParams
from phongfield.services.base_experiment import BaseExperimentService, ExperimentRun
from phongfield.utils.parsing import parse_mesh_source, parse_vector_map

logger = get_logger(__name__)


def vertex_table(name: str, basis: TangentBasis, f: VertexField, **extra) -> CsvTable:
    """逐顶点的标架系数与实现向量"""
    pairs = f.pairs()
    vec = f.realize_at_vertices(basis.frames)
    return CsvTable.from_columns(
        name,
        vertex=range(basis.num_vertices),
        a=pairs[:, 0].tolist(),
        b=pairs[:, 1].tolist(),
        vx=vec[:, 0].tolist(),
        vy=vec[:, 1].tolist(),
        vz=vec[:, 2].tolist(),
        **{k: list(v) for k, v in extra.items()},
    )


class InterpolateService(BaseExperimentService[InterpolateParams]):
    EXPERIMENT = "interpolate"
    PARAMS = InterpolateParams

    def execute(self, params: InterpolateParams, run: ExperimentRun) -> None:
        source = parse_mesh_source(params.mesh, params.normals, params.unit_area)
        self.write_mesh(run, source)
        constraints = parse_vector_map(params.constraints)
        basis = TangentBasis(source.mesh)
        f = interpolate_sparse(basis, constraints, params.energy)

        fixed = constraint_map(basis, constraints)
        residual = max(abs(f.coeffs[i] - v) for i, v in fixed.items())
        run.add_metric("energy", energy(basis, f, params.energy))
        run.add_metric("constraint_residual", residual)
        run.add_metric("num_constraints", len(constraints))
        self.write_table(run, vertex_table("interpolated", basis, f))
        self.write_field(run, source.mesh, f.realize_at_vertices(basis.frames), "interpolated")
        self.dump_matrices(run, params, basis)


class VectorHeatService(BaseExperimentService[VectorHeatParams]):
    EXPERIMENT = "vector-heat"
    PARAMS = VectorHeatParams

    def execute(self, params: VectorHeatParams, run: ExperimentRun) -> None:
        source = parse_mesh_source(params.mesh, params.normals, params.unit_area)
        self.write_mesh(run, source)
        sources = parse_vector_map(params.sources)
        basis = TangentBasis(source.mesh)
        result = vector_heat(basis, sources, params.t, lumped=not params.consistent_mass)

        extra = {"magnitude": result.magnitude.tolist(), "indicator": result.indicator.tolist()}
        if params.labels:
            labels = source_labels(basis, list(sources), result.t, lumped=not params.consistent_mass)
            extra["source"] = np.asarray(list(sources))[labels].tolist()
        self.write_table(run, vertex_table("vector_heat", basis, result.field, **extra))
        self.write_field(run, source.mesh, result.field.realize_at_vertices(basis.frames), "vector_heat")

        run.add_metric("t", result.t)
        run.add_metric("num_sources", len(sources))
        run.add_metric("min_indicator", result.indicator.min())
        run.add_metric("max_magnitude", result.magnitude.max())
        self.dump_matrices(run, params, basis)


class EigenfieldsService(BaseExperimentService[EigenfieldsParams]):
    EXPERIMENT = "eigenfields"
    PARAMS = EigenfieldsParams

    def execute(self, params: EigenfieldsParams, run: ExperimentRun) -> None:
        source = parse_mesh_source(params.mesh, params.normals, params.unit_area)
        self.write_mesh(run, source)
        basis = TangentBasis(source.mesh)
        result = eigenfields(basis, params.energy, params.k, lumped=params.lump)

        self.write_table(
            run,
            CsvTable.from_columns(
                "eigenvalues",
                index=range(len(result)),
                eigenvalue=result.values.tolist(),
                residual=result.residuals.tolist(),
            ),
        )
        vectors = result.vectors
        if params.grade:
            graded = grade_spectrum(basis, result)
            vectors = graded.vectors
            self.write_table(
                run,
                CsvTable.from_columns(
                    "graded",
                    index=range(len(result)),
                    cluster=graded.cluster.tolist(),
                    divergence=graded.divergence.tolist(),
                ),
            )
            run.add_metric("num_clusters", int(graded.cluster.max()) + 1)

        for i in range(vectors.shape[1]):
            f = VertexField(vectors[:, i])
            self.write_field(run, source.mesh, f.realize_at_vertices(basis.frames), f"eigenfield_{i:03d}")

        for i, value in enumerate(result.values):
            run.add_metric(f"lambda_{i}", value)
        run.add_metric("max_residual", result.residuals.max())
        if len(result) >= 2:
            run.add_metric("max_pair_gap", pair_gaps(result.values).max())
            run.add_metric("max_j_pair_defect", j_pair_defects(basis, result).max())
        self.dump_matrices(run, params, basis)


interpolate_service = InterpolateService()
vector_heat_service = VectorHeatService()
eigenfields_service = EigenfieldsService()
