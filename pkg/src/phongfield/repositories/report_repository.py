"""JSON experiment reports."""

from pathlib import Path

from phongfield.core.logging_config import get_logger
from phongfield.repositories.base import BaseFileRepository
from phongfield.schemas.report import ExperimentReport

logger = get_logger(__name__)


class ReportRepository(BaseFileRepository[ExperimentReport]):
    suffix = ".json"

    def _write(self, obj: ExperimentReport, path: Path) -> None:
        path.write_text(obj.model_dump_json(indent=2), encoding="utf-8")
        logger.info(f"Report {obj.experiment} written to {path}")

    def _read(self, path: Path) -> ExperimentReport:
        return ExperimentReport.model_validate_json(path.read_text(encoding="utf-8"))


report_repository = ReportRepository()
