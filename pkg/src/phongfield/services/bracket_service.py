"""Lie 括号精度实验，以闭式解为真值

球面：在 icosphere 或随机凸包上取带限场（或坐标场 pi(e1)、pi(e2)）的切向投影。
环面：平面带限场经嵌入推前，其括号即平面括号的推前。
"""

import numpy as np

from phongfield.core.constants import Tessellation
from phongfield.core.exceptions import UndefinedMetricError
from phongfield.core.logging_config import get_logger
from phongfield.fem.basis import TangentBasis
from phongfield.fields.bracket import BracketMode, lie_bracket_project
from phongfield.fields.error import field_error
from phongfield.models.field import AmbientField
from phongfield.repositories import CsvTable
from phongfield.schemas.params import BracketSphereParams, BracketTorusParams
from phongfield.services.base_experiment import BaseExperimentService, ExperimentRun
from phongfield.synth.bandlimited import (
    SphereBracket,
    coordinate_fields,
    random_field_torus,
    random_sphere_pair,
)
from phongfield.synth.sphere import gen_icosphere, gen_sphere_random
from phongfield.synth.torus import gen_torus

logger = get_logger(__name__)


def bracket_error(
    basis: TangentBasis,
    X: AmbientField,
    Y: AmbientField,
    truth: AmbientField,
    mode: BracketMode | str,
):
    """X 与 Y 的投影括号及其相对 ``truth`` 的误差 E

    Raises:
        UndefinedMetricError: 括号与真值同时为零
    """
    Z = lie_bracket_project(basis, X, Y, mode)
    E = field_error(basis, Z, truth)
    if E is None:
        raise UndefinedMetricError("E")
    return Z, E


class BracketSphereService(BaseExperimentService[BracketSphereParams]):
    """bracket-sphere 实验"""

    EXPERIMENT = "bracket-sphere"
    PARAMS = BracketSphereParams

    def execute(self, params: BracketSphereParams, run: ExperimentRun) -> None:
        if params.tess is Tessellation.ICOSA:
            mesh = gen_icosphere(params.passes)
        else:
            mesh = gen_sphere_random(params.n, params.seed)
        if params.coordinate:
            X, Y = coordinate_fields()
        else:
            X, Y = random_sphere_pair(params.b, params.seed)

        basis = TangentBasis(mesh)
        Z, E = bracket_error(
            basis, X.on_mesh(mesh), Y.on_mesh(mesh), SphereBracket(X, Y).on_mesh(mesh), params.mode
        )
        logger.info(f"sphere bracket ({params.tess.value}, {mesh.num_vertices} vertices, b={params.b}): E = {E:.3e}")

        run.add_metric("E", E)
        run.add_metric("num_vertices", mesh.num_vertices)
        self.write_field(run, mesh, Z.realize_at_vertices(basis.frames), "bracket")
        self.dump_matrices(run, params, basis)


class BracketTorusService(BaseExperimentService[BracketTorusParams]):
    """bracket-torus 实验, 多个随机种子取平均"""

    EXPERIMENT = "bracket-torus"
    PARAMS = BracketTorusParams

    def execute(self, params: BracketTorusParams, run: ExperimentRun) -> None:
        seeds = [params.seed + i for i in range(params.seeds)]
        errors = []
        for seed in seeds:
            torus = gen_torus(params.n, seed)
            pair = random_field_torus(params.b, seed)
            basis = TangentBasis(torus.mesh)
            _, E = bracket_error(
                basis,
                pair.X.on_torus(torus),
                pair.Y.on_torus(torus),
                pair.bracket.on_torus(torus),
                params.mode,
            )
            logger.info(f"torus seed {seed}: E = {E:.3e}")
            errors.append(E)

        errors_arr = np.asarray(errors)
        self.write_table(run, CsvTable.from_columns("bracket_torus", seed=seeds, E=errors))
        run.add_metric("mean_E", errors_arr.mean())
        run.add_metric("min_E", errors_arr.min())
        run.add_metric("max_E", errors_arr.max())
        run.add_metric("std_E", errors_arr.std())


bracket_sphere_service = BracketSphereService()
bracket_torus_service = BracketTorusService()
