"""Matrix Market dumps of assembled sparse matrices."""

from pathlib import Path

import scipy.io
from scipy import sparse

from phongfield.core.logging_config import get_logger
from phongfield.repositories.base import BaseFileRepository

logger = get_logger(__name__)


class MatrixRepository(BaseFileRepository[sparse.spmatrix]):
    suffix = ".mtx"

    def _write(self, obj: sparse.spmatrix, path: Path) -> None:
        scipy.io.mmwrite(str(path), sparse.coo_matrix(obj), precision=17)

    def _read(self, path: Path) -> sparse.csr_matrix:
        return sparse.csr_matrix(scipy.io.mmread(str(path)))

    def dump_all(self, matrices: dict[str, sparse.spmatrix], directory: str | Path) -> dict[str, Path]:
        """Write each matrix to ``<directory>/<name>.mtx``."""
        directory = Path(directory)
        out = {name: self.save(m, directory / f"{name}{self.suffix}") for name, m in matrices.items()}
        logger.info(f"Dumped {len(out)} matrices to {directory}")
        return out


matrix_repository = MatrixRepository()
