"""Repository package for file persistence.

One repository per artifact format, each with a module-level instance.
"""

from phongfield.repositories.base import BaseFileRepository
from phongfield.repositories.csv_repository import CsvRepository, CsvTable, csv_repository
from phongfield.repositories.matrix_repository import MatrixRepository, matrix_repository
from phongfield.repositories.obj_repository import (
    ObjRepository,
    load_obj,
    load_sidecar,
    obj_repository,
    save_obj,
)
from phongfield.repositories.ply_repository import FieldSnapshot, PlyRepository, ply_repository
from phongfield.repositories.report_repository import ReportRepository, report_repository

__all__ = [
    "BaseFileRepository",
    # CSV
    "CsvRepository",
    "CsvTable",
    "csv_repository",
    # Matrix Market
    "MatrixRepository",
    "matrix_repository",
    # OBJ
    "ObjRepository",
    "load_obj",
    "load_sidecar",
    "obj_repository",
    "save_obj",
    # PLY
    "FieldSnapshot",
    "PlyRepository",
    "ply_repository",
    # Reports
    "ReportRepository",
    "report_repository",
]
