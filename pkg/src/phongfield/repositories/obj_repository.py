"""Wavefront OBJ repository.

Reads ``v`` / ``vn`` / ``f`` records (other records are ignored) and writes
meshes with per-vertex normals. Generated meshes can carry a JSON sidecar
of their generator parameters.
"""

from pathlib import Path

import numpy as np

from phongfield.core.constants import NormalMode
from phongfield.core.exceptions import MeshParseError
from phongfield.core.logging_config import get_logger
from phongfield.geometry.normals import compute_vertex_normals
from phongfield.geometry.topology import validate_mesh
from phongfield.models.mesh import OrientedMesh, TriangleMesh
from phongfield.repositories.base import BaseFileRepository
from phongfield.schemas.generator import GeneratorSidecar

logger = get_logger(__name__)

SIDECAR_SUFFIX = ".json"


def _floats(tokens: list[str], line_no: int, record: str) -> list[float]:
    if len(tokens) < 3:
        raise MeshParseError(f"'{record}' record needs 3 coordinates", line=line_no)
    try:
        return [float(x) for x in tokens[:3]]
    except ValueError as e:
        raise MeshParseError(f"bad number in '{record}' record: {e}", line=line_no) from e


def _index(token: str, count: int, line_no: int) -> int:
    """OBJ index (1-based, negative counts from the end) to 0-based."""
    try:
        i = int(token)
    except ValueError as e:
        raise MeshParseError(f"bad face index '{token}'", line=line_no) from e
    if i == 0:
        raise MeshParseError("face index 0 (OBJ indices are 1-based)", line=line_no)
    return i - 1 if i > 0 else count + i


class ObjRepository(BaseFileRepository[OrientedMesh]):
    """OBJ persistence for oriented meshes."""

    suffix = ".obj"

    def parse(self, lines) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
        """Parse OBJ text into (vertices, triangles, normals or None).

        Polygons are fan-triangulated. Normals are per vertex: from the
        ``v//n`` corner references when faces carry them, otherwise by
        position when there is one ``vn`` per ``v``. Vertices referencing
        several normals get their normalized sum. None means incomplete.

        Raises:
            MeshParseError: On malformed records, with the 1-based line number.
        """
        verts: list[list[float]] = []
        norms: list[list[float]] = []
        tris: list[tuple[int, int, int]] = []
        corner_normals: list[tuple[int, int]] = []

        for line_no, line in enumerate(lines, start=1):
            vals = line.split("#", 1)[0].split()
            if not vals:
                continue
            record = vals[0]
            if record == "v":
                verts.append(_floats(vals[1:], line_no, "v"))
            elif record == "vn":
                norms.append(_floats(vals[1:], line_no, "vn"))
            elif record == "f":
                if len(vals) < 4:
                    raise MeshParseError("face needs at least 3 vertices", line=line_no)
                poly = []
                for corner in vals[1:]:
                    parts = corner.split("/")
                    v = _index(parts[0], len(verts), line_no)
                    poly.append(v)
                    if len(parts) == 3 and parts[2]:
                        corner_normals.append((v, _index(parts[2], len(norms), line_no)))
                for k in range(1, len(poly) - 1):
                    tris.append((poly[0], poly[k], poly[k + 1]))

        vertices = np.array(verts, dtype=np.float64).reshape(-1, 3)
        triangles = np.array(tris, dtype=np.int64).reshape(-1, 3)
        return vertices, triangles, self._vertex_normals(len(verts), norms, corner_normals)

    @staticmethod
    def _vertex_normals(
        num_vertices: int,
        norms: list[list[float]],
        corner_normals: list[tuple[int, int]],
    ) -> np.ndarray | None:
        if not norms:
            return None
        table = np.array(norms, dtype=np.float64)
        if not corner_normals:
            return table if len(table) == num_vertices else None
        pairs = np.array(corner_normals, dtype=np.int64)
        if pairs[:, 1].min() < 0 or pairs[:, 1].max() >= len(table):
            raise MeshParseError("normal index out of range")
        if pairs[:, 0].min() < 0 or pairs[:, 0].max() >= num_vertices:
            # reported by TriangleMesh as an index error
            return None
        acc = np.zeros((num_vertices, 3))
        np.add.at(acc, pairs[:, 0], table[pairs[:, 1]])
        if np.any(np.linalg.norm(acc, axis=1) == 0):
            return None
        return acc

    def load(self, path: str | Path, recompute_normals: bool = False) -> OrientedMesh:
        """Load and validate an OBJ mesh.

        Args:
            path: OBJ file.
            recompute_normals: Ignore ``vn`` records and use loop-limit normals.

        Raises:
            MeshParseError, MeshIndexError, NonManifoldError, OrientationError,
            DegenerateTriangleError, InconsistentNormalError.
        """
        path = Path(path)
        with path.open("r", encoding="utf-8") as fh:
            vertices, triangles, normals = self.parse(fh)
        if not len(triangles):
            raise MeshParseError(f"{path.name} has no faces")

        mesh = validate_mesh(TriangleMesh(vertices, triangles))
        if normals is None or recompute_normals:
            if normals is not None:
                logger.info(f"{path.name}: recomputing normals (vn records ignored)")
            normals = compute_vertex_normals(mesh, NormalMode.LOOP_LIMIT)
        logger.info(
            f"Loaded OBJ from {path} with {mesh.num_vertices} vertices and {mesh.num_triangles} triangles"
        )
        return OrientedMesh(mesh, normals)

    def _write(self, obj: OrientedMesh, path: Path) -> None:
        with path.open("w", encoding="utf-8") as fh:
            fh.write("# phongfield obj export\n")
            for v in obj.vertices:
                fh.write("v %.17g %.17g %.17g\n" % tuple(v))
            for n in obj.normals:
                fh.write("vn %.17g %.17g %.17g\n" % tuple(n))
            for a, b, c in obj.triangles + 1:
                fh.write(f"f {a}//{a} {b}//{b} {c}//{c}\n")

    def save(
        self,
        obj: OrientedMesh,
        path: str | Path,
        sidecar: GeneratorSidecar | None = None,
    ) -> Path:
        """Write the mesh and, when given, ``<path>.json`` with the generator parameters."""
        path = super().save(obj, path)
        if sidecar is not None:
            sidecar_path = path.with_suffix(path.suffix + SIDECAR_SUFFIX)
            sidecar_path.write_text(sidecar.model_dump_json(indent=2), encoding="utf-8")
        logger.info(f"Saved OBJ to {path}")
        return path


obj_repository = ObjRepository()


def load_obj(path: str | Path, recompute_normals: bool = False) -> OrientedMesh:
    return obj_repository.load(path, recompute_normals=recompute_normals)


def save_obj(mesh: OrientedMesh, path: str | Path, sidecar: GeneratorSidecar | None = None) -> Path:
    return obj_repository.save(mesh, path, sidecar=sidecar)


def load_sidecar(path: str | Path) -> GeneratorSidecar:
    """Read the sidecar written next to an OBJ file."""
    path = Path(path)
    return GeneratorSidecar.model_validate_json(
        path.with_suffix(path.suffix + SIDECAR_SUFFIX).read_text(encoding="utf-8")
    )
