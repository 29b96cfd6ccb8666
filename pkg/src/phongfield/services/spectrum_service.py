"""单位球面的联络 Laplacian 谱

每次运行剖分球面（随机凸包或 icosphere），求联络能量最小的若干特征值，
并与解析谱 n(n+1) - 1（重数 4n + 2）比较。
"""

import numpy as np

from phongfield.core.constants import EnergyKind
from phongfield.core.logging_config import get_logger
from phongfield.fem.basis import TangentBasis
from phongfield.fields.spectral import eigenfields
from phongfield.repositories import CsvTable
from phongfield.schemas.params import SpectrumSphereParams
from phongfield.services.base_experiment import BaseExperimentService, ExperimentRun
from phongfield.synth.reference import (
    cluster_gap_ratio,
    cluster_statistics,
    relative_errors,
    sphere_connection_reference,
)
from phongfield.synth.sphere import gen_icosphere, gen_sphere_random

logger = get_logger(__name__)


def _normals(choice: str) -> str | None:
    if choice == "auto":
        return None
    return "loop-limit" if choice == "recompute" else choice


class SpectrumService(BaseExperimentService[SpectrumSphereParams]):
    """spectrum-sphere 实验"""

    EXPERIMENT = "spectrum-sphere"
    PARAMS = SpectrumSphereParams

    def _mesh(self, params: SpectrumSphereParams, seed: int):
        if params.icosphere is not None:
            return gen_icosphere(params.icosphere, normals=_normals(params.normals))
        return gen_sphere_random(params.n, seed, aniso=params.aniso, normals=_normals(params.normals))

    def execute(self, params: SpectrumSphereParams, run: ExperimentRun) -> None:
        clusters = sphere_connection_reference(params.count)
        reference = np.concatenate([np.full(m, v) for v, m in clusters])
        # icosphere 是确定的，不论 --seeds 只跑一次
        seeds = [params.seed] if params.icosphere is not None else [params.seed + i for i in range(params.seeds)]

        all_values = []
        p95 = []
        min_consistency = 1.0
        for i, seed in enumerate(seeds):
            mesh = self._mesh(params, seed)
            min_consistency = min(min_consistency, mesh.min_consistency())
            basis = TangentBasis(mesh)
            result = eigenfields(basis, EnergyKind.CONNECTION, params.count, lumped=params.lump)
            values = result.values
            all_values.append(values)

            rel = relative_errors(values, reference)
            self.write_table(
                run,
                CsvTable.from_columns(
                    f"spectrum_seed{seed}",
                    index=range(params.count),
                    eigenvalue=values.tolist(),
                    reference=reference.tolist(),
                    rel_error=rel.tolist(),
                ),
            )
            ratios = self.write_aspect_ratios(run, mesh, name=f"aspect_ratios_seed{seed}")
            p95.append(float(np.percentile(ratios, 95)))
            if i == 0:
                self.dump_matrices(run, params, basis)
            logger.info(
                f"seed {seed}: mean rel error {rel.mean():.3e}, "
                f"lambda[0..5] = {np.round(values[:6], 4)}"
            )

        values = np.stack(all_values)
        rel = relative_errors(values, reference[None, :])
        signed = (values - reference) / np.abs(values + reference)
        self.write_table(
            run,
            CsvTable.from_columns(
                "spectrum_mean",
                index=range(params.count),
                mean_eigenvalue=values.mean(axis=0).tolist(),
                reference=reference.tolist(),
                mean_rel_error=rel.mean(axis=0).tolist(),
            ),
        )

        run.add_metric("mean_rel_error", rel.mean())
        run.add_metric("max_rel_error", rel.max())
        run.add_metric("mean_signed_rel_error", signed.mean())
        run.add_metric("min_normal_consistency", min_consistency)
        run.add_metric("aspect_ratio_p95", float(np.mean(p95)))
        run.add_metric("cluster_gap_ratio", min(cluster_gap_ratio(v, clusters) for v in all_values))
        for c, stats in enumerate(zip(*(cluster_statistics(v, clusters) for v in all_values)), start=1):
            run.add_metric(f"cluster{c}_mean_rel_deviation", np.mean([s.mean_rel_deviation for s in stats]))
            run.add_metric(f"cluster{c}_spread", max(s.spread for s in stats))


spectrum_service = SpectrumService()
