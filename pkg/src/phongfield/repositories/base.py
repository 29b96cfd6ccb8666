"""Base repository for file artifacts.

Provides a generic base class for all file-format repositories.
"""

from pathlib import Path
from typing import Generic, TypeVar

from phongfield.core.config import settings
from phongfield.core.logging_config import get_logger

logger = get_logger(__name__)

# Generic type for persisted objects
T = TypeVar("T")


class BaseFileRepository(Generic[T]):
    """Generic base repository mapping one artifact type to one file format.

    Subclasses set ``suffix`` and implement ``_write`` (and ``_read`` when
    the format can be loaded back).

    Example:
        class MeshRepository(BaseFileRepository[OrientedMesh]):
            suffix = ".obj"

            def _write(self, obj: OrientedMesh, path: Path) -> None:
                ...
    """

    suffix: str = ""

    def path_for(self, stem: str, experiment: str | None = None) -> Path:
        """Artifact path ``<OUTPUT_DIR>/<experiment>/<stem><suffix>``.

        Args:
            stem: File name without suffix.
            experiment: Optional experiment sub-directory.

        Returns:
            Path whose parent directory exists.
        """
        return settings.get_output_path(experiment) / f"{stem}{self.suffix}"

    def save(self, obj: T, path: str | Path) -> Path:
        """Write an object, creating parent directories.

        Args:
            obj: Object to persist.
            path: Destination file.

        Returns:
            The written path.
        """
        path = self._ensure_parent(path)
        self._write(obj, path)
        logger.debug(f"Wrote {type(obj).__name__} to {path}")
        return path

    def load(self, path: str | Path) -> T:
        """Read an object back.

        Args:
            path: Source file.

        Returns:
            The loaded object.
        """
        return self._read(Path(path))

    def _write(self, obj: T, path: Path) -> None:
        raise NotImplementedError(f"{type(self).__name__} cannot write")

    def _read(self, path: Path) -> T:
        raise NotImplementedError(f"{type(self).__name__} cannot read")

    @staticmethod
    def _ensure_parent(path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path
