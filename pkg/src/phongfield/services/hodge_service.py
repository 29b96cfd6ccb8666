"""Hodge 能量与余切 Laplacian 的对比

亏格 g 的曲面上 Hodge 能量有 2g 个近零特征值（调和场）。其后第 2(g+i) 与
2(g+i)+1 个特征值与第 i+1 个余切特征值配对，分别对应标量特征函数的梯度
及其 90 度旋转。比较时 Hodge 能量按 div^2 + curl^2 Dirichlet 能量缩放。
"""

import numpy as np

from phongfield.core.logging_config import get_logger
from phongfield.fem.basis import TangentBasis
from phongfield.fem.solvers import smallest_generalized_eigs
from phongfield.fields.spectral import eigenfields
from phongfield.geometry.subdivision import loop_subdivide
from phongfield.geometry.topology import genus
from phongfield.models.mesh import OrientedMesh
from phongfield.repositories import CsvTable
from phongfield.schemas.energy import EnergySpec
from phongfield.schemas.params import HodgeCompareParams
from phongfield.services.base_experiment import BaseExperimentService, ExperimentRun
from phongfield.synth.reference import relative_errors
from phongfield.utils.parsing import parse_mesh_source

logger = get_logger(__name__)


def paired_spectra(basis: TangentBasis, g: int, count: int) -> dict[str, np.ndarray | float | None]:
    """与余切特征值配对的 Hodge 特征值

    Returns:
        ``hodge``（全部计算值）、``even`` / ``odd``（下标 2g+2i 与 2g+2i+1）、
        ``cotan``（下标 i+1）、``rel_even`` / ``rel_odd``，
        以及 ``rho`` = lambda[2g-1] / lambda[2g]（g = 0 时为 None）
    """
    hodge = eigenfields(basis, EnergySpec.hodge_dirichlet(), 2 * g + 2 * count).values
    cotan = smallest_generalized_eigs(
        basis.scalar_stiffness(), basis.scalar_mass(), count + 1, label="cotangent pencil"
    ).values
    even = hodge[2 * g::2][:count]
    odd = hodge[2 * g + 1::2][:count]
    ref = cotan[1:count + 1]
    return {
        "hodge": hodge,
        "even": even,
        "odd": odd,
        "cotan": ref,
        "rel_even": relative_errors(even, ref),
        "rel_odd": relative_errors(odd, ref),
        "rho": float(hodge[2 * g - 1] / hodge[2 * g]) if g > 0 else None,
    }


class HodgeService(BaseExperimentService[HodgeCompareParams]):
    """hodge-compare 实验, 可选 Loop 细分研究"""

    EXPERIMENT = "hodge-compare"
    PARAMS = HodgeCompareParams

    def execute(self, params: HodgeCompareParams, run: ExperimentRun) -> None:
        source = parse_mesh_source(params.mesh, params.normals, params.unit_area)
        self.write_mesh(run, source)
        mesh: OrientedMesh = source.mesh
        g = genus(mesh)
        run.add_metric("genus", g)
        logger.info(f"{source.label}: genus {g}, {mesh.num_vertices} vertices")

        for p in range(params.subdivide + 1):
            if p:
                mesh = loop_subdivide(mesh)
            basis = TangentBasis(mesh)
            res = paired_spectra(basis, g, params.count)
            self.write_table(
                run,
                CsvTable.from_columns(
                    f"hodge_pass{p}",
                    index=range(params.count),
                    hodge_even=res["even"].tolist(),
                    hodge_odd=res["odd"].tolist(),
                    cotan=res["cotan"].tolist(),
                    rel_even=res["rel_even"].tolist(),
                    rel_odd=res["rel_odd"].tolist(),
                ),
            )
            self.dump_matrices(run, params, basis, prefix=f"pass{p}_")

            rel = np.concatenate([res["rel_even"], res["rel_odd"]])
            run.add_metric(f"pass{p}_vertices", mesh.num_vertices)
            run.add_metric(f"pass{p}_rho", res["rho"])
            run.add_metric(f"pass{p}_max_rel_diff", rel.max())
            run.add_metric(f"pass{p}_mean_rel_diff", rel.mean())
            logger.info(
                f"pass {p}: {mesh.num_vertices} vertices, max paired rel diff {rel.max():.3e}"
                + (f", rho {res['rho']:.3e}" if res["rho"] is not None else "")
            )

        # 最细一层作为主结果
        run.add_metric("rho", res["rho"])
        run.add_metric("max_rel_diff", rel.max())
        run.add_metric("mean_rel_diff", rel.mean())


hodge_service = HodgeService()
