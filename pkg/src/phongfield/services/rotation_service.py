"""组装矩阵在逐顶点 90 度旋转 J 下的不变性"""

from phongfield.core.logging_config import get_logger
from phongfield.fem.basis import TangentBasis
from phongfield.fem.rotation import rotation_invariance
from phongfield.schemas.params import RotationInvarianceParams
from phongfield.services.base_experiment import BaseExperimentService, ExperimentRun
from phongfield.utils.parsing import parse_mesh_source

logger = get_logger(__name__)


class RotationService(BaseExperimentService[RotationInvarianceParams]):
    """rotation-invariance 实验"""

    EXPERIMENT = "rotation-invariance"
    PARAMS = RotationInvarianceParams

    def execute(self, params: RotationInvarianceParams, run: ExperimentRun) -> None:
        source = parse_mesh_source(params.mesh, params.normals, params.unit_area)
        self.write_mesh(run, source)
        basis = TangentBasis(source.mesh)
        parts = basis.component_stiffness()
        metrics = rotation_invariance(
            basis.vector_mass(), parts["scalar"], parts["traceless"], parts["antisym"]
        )
        for name, value in metrics.items():
            run.add_metric(name, value)
        run.add_metric("max_metric_condition", basis.max_metric_condition)
        run.add_metric("min_normal_consistency", source.mesh.min_consistency())
        self.write_aspect_ratios(run, source.mesh)
        self.dump_matrices(run, params, basis)


rotation_service = RotationService()
