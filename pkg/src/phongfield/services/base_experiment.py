"""Base experiment service.

Provides the abstract base class shared by all experiment services: parameter
validation, artifact directories, timing and report writing.
"""

import math
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, ClassVar, Generic, TypeVar

import numpy as np

from phongfield.core.config import settings
from phongfield.core.exceptions import PhongFieldError
from phongfield.core.logging_config import get_logger, get_perf_logger
from phongfield.fem.basis import TangentBasis
from phongfield.geometry.topology import aspect_ratios
from phongfield.models.mesh import OrientedMesh
from phongfield.repositories import (
    CsvTable,
    FieldSnapshot,
    csv_repository,
    matrix_repository,
    ply_repository,
    report_repository,
    save_obj,
)
from phongfield.schemas.params import ExperimentParams
from phongfield.schemas.report import ExperimentReport
from phongfield.utils.parsing import MeshSource

logger = get_logger(__name__)
perf_logger = get_perf_logger()

# Generic type for experiment parameters
P = TypeVar("P", bound=ExperimentParams)

REPORT_NAME = "report"


@dataclass
class ExperimentRun:
    """Metrics and artifacts collected while an experiment runs."""

    experiment: str
    output_dir: Path
    metrics: dict[str, float] = field(default_factory=dict)
    artifacts: dict[str, str] = field(default_factory=dict)

    def add_metric(self, name: str, value: Any) -> None:
        """Record a metric; undefined or non-finite values are left out."""
        if value is None:
            logger.debug(f"{self.experiment}: metric {name} undefined, omitted")
            return
        value = float(value)
        if not math.isfinite(value):
            logger.warning(f"{self.experiment}: metric {name} is {value}, omitted")
            return
        self.metrics[name] = value

    def add_artifact(self, name: str, path: Path) -> None:
        self.artifacts[name] = str(path)

    def path(self, file_name: str) -> Path:
        return self.output_dir / file_name


class BaseExperimentService(ABC, Generic[P]):
    """Abstract base class for experiment services.

    Provides common infrastructure for:
    - Parameter validation through the PARAMS model
    - Output directory handling
    - CSV / PLY / OBJ / Matrix Market artifacts
    - Report writing

    Subclasses implement ``execute``.
    """

    # Must be set by subclass
    EXPERIMENT: ClassVar[str]
    PARAMS: ClassVar[type[ExperimentParams]]

    # ========== Abstract Methods (must implement) ==========

    @abstractmethod
    def execute(self, params: P, run: ExperimentRun) -> None:
        """Run the experiment, recording metrics and artifacts on ``run``.

        Args:
            params: Validated parameters.
            run: Collector for metrics and artifact paths.
        """
        ...

    # ========== Execution ==========

    def run(self, params: P | dict[str, Any]) -> ExperimentReport:
        """Validate parameters, execute and write the JSON report.

        Raises:
            PhongFieldError: Any precondition or solver failure, after logging.
        """
        params = self.PARAMS.model_validate(params)
        output_dir = params.output_dir or settings.get_output_path(self.EXPERIMENT)
        output_dir.mkdir(parents=True, exist_ok=True)
        run = ExperimentRun(experiment=self.EXPERIMENT, output_dir=output_dir)

        logger.info(f"Starting {self.EXPERIMENT} -> {output_dir}")
        start = time.perf_counter()
        try:
            self.execute(params, run)
        except PhongFieldError as e:
            logger.error(f"{self.EXPERIMENT} failed: [{e.code}] {e.message}")
            raise
        elapsed = time.perf_counter() - start
        perf_logger.info(f"experiment {self.EXPERIMENT}: {elapsed:.3f}s")

        report = ExperimentReport(
            experiment=self.EXPERIMENT,
            parameters=params.model_dump(mode="json"),
            metrics=run.metrics,
            artifacts=run.artifacts,
        )
        report_repository.save(report, run.path(f"{REPORT_NAME}{report_repository.suffix}"))
        logger.info(
            f"{self.EXPERIMENT} done: "
            + ", ".join(f"{k}={v:.4g}" for k, v in sorted(run.metrics.items()))
        )
        return report

    # ========== Artifacts ==========

    def write_table(self, run: ExperimentRun, table: CsvTable) -> Path:
        path = csv_repository.save(table, run.path(f"{table.name}{csv_repository.suffix}"))
        run.add_artifact(table.name, path)
        return path

    def write_field(
        self,
        run: ExperimentRun,
        mesh: OrientedMesh,
        vectors: np.ndarray,
        name: str,
    ) -> Path:
        snapshot = FieldSnapshot(mesh=mesh, vectors=vectors, name=name)
        path = ply_repository.save(snapshot, run.path(f"{name}{ply_repository.suffix}"))
        run.add_artifact(name, path)
        return path

    def write_aspect_ratios(self, run: ExperimentRun, mesh: OrientedMesh, name: str = "aspect_ratios") -> np.ndarray:
        """Per-triangle aspect ratios as CSV; returns the ratios."""
        ratios = aspect_ratios(mesh)
        self.write_table(
            run,
            CsvTable.from_columns(name, triangle=range(len(ratios)), aspect_ratio=ratios.tolist()),
        )
        return ratios

    def write_mesh(self, run: ExperimentRun, source: MeshSource, name: str = "mesh") -> None:
        """Export generated meshes with their generator sidecar."""
        if source.sidecar is None:
            return
        path = save_obj(source.mesh, run.path(f"{name}.obj"), sidecar=source.sidecar)
        run.add_artifact(name, path)

    def dump_matrices(self, run: ExperimentRun, params: ExperimentParams, basis: TangentBasis, prefix: str = "") -> None:
        if not params.dump_matrices:
            return
        directory = run.path(f"{prefix}matrices" if prefix else "matrices")
        for name, path in matrix_repository.dump_all(basis.matrices(), directory).items():
            run.add_artifact(f"{prefix}matrix_{name}", path)
