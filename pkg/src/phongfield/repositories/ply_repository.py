"""Binary PLY repository for field visualization.

Vertices carry float32 x, y, z, nx, ny, nz, vx, vy, vz; faces are
uchar-counted int32 triangles, all little-endian.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from phongfield.core.exceptions import MeshParseError
from phongfield.core.logging_config import get_logger
from phongfield.models.mesh import OrientedMesh, TriangleMesh
from phongfield.repositories.base import BaseFileRepository

logger = get_logger(__name__)

VERTEX_PROPERTIES = ("x", "y", "z", "nx", "ny", "nz", "vx", "vy", "vz")
VERTEX_DTYPE = np.dtype([(name, "<f4") for name in VERTEX_PROPERTIES])
FACE_DTYPE = np.dtype([("count", "u1"), ("vertex_indices", "<i4", (3,))])


@dataclass(frozen=True, eq=False)
class FieldSnapshot:
    """A mesh with one realized 3D vector per vertex."""

    mesh: OrientedMesh
    vectors: np.ndarray
    name: str = "field"


class PlyRepository(BaseFileRepository[FieldSnapshot]):
    suffix = ".ply"

    @staticmethod
    def _header(snapshot: FieldSnapshot) -> bytes:
        lines = [
            "ply",
            "format binary_little_endian 1.0",
            f"comment phongfield {snapshot.name}",
            f"element vertex {snapshot.mesh.num_vertices}",
            *(f"property float {name}" for name in VERTEX_PROPERTIES),
            f"element face {snapshot.mesh.num_triangles}",
            "property list uchar int vertex_indices",
            "end_header",
        ]
        return ("\n".join(lines) + "\n").encode("ascii")

    def _write(self, obj: FieldSnapshot, path: Path) -> None:
        vectors = np.asarray(obj.vectors, dtype=np.float64)
        if vectors.shape != (obj.mesh.num_vertices, 3):
            raise ValueError(f"expected ({obj.mesh.num_vertices}, 3) vectors, got {vectors.shape}")
        verts = np.empty(obj.mesh.num_vertices, dtype=VERTEX_DTYPE)
        for k, name in enumerate(VERTEX_PROPERTIES[:3]):
            verts[name] = obj.mesh.vertices[:, k]
        for k, name in enumerate(VERTEX_PROPERTIES[3:6]):
            verts[name] = obj.mesh.normals[:, k]
        for k, name in enumerate(VERTEX_PROPERTIES[6:]):
            verts[name] = vectors[:, k]
        faces = np.empty(obj.mesh.num_triangles, dtype=FACE_DTYPE)
        faces["count"] = 3
        faces["vertex_indices"] = obj.mesh.triangles

        with path.open("wb") as fh:
            fh.write(self._header(obj))
            fh.write(verts.tobytes())
            fh.write(faces.tobytes())
        logger.info(f"Saved PLY field '{obj.name}' to {path}")

    def _read(self, path: Path) -> FieldSnapshot:
        """Read a file written by this repository (single precision)."""
        data = path.read_bytes()
        marker = b"end_header\n"
        end = data.find(marker)
        if end < 0:
            raise MeshParseError(f"{path.name}: missing end_header")
        header = data[:end].decode("ascii").splitlines()
        if len(header) < 2 or header[0] != "ply" or header[1] != "format binary_little_endian 1.0":
            raise MeshParseError(f"{path.name}: not a binary little-endian PLY file")

        counts: dict[str, int] = {}
        props: list[str] = []
        name = "field"
        for line in header[2:]:
            parts = line.split()
            if parts[0] == "element":
                counts[parts[1]] = int(parts[2])
            elif parts[0] == "property" and parts[1] == "float":
                props.append(parts[2])
            elif parts[0] == "comment" and len(parts) > 2 and parts[1] == "phongfield":
                name = " ".join(parts[2:])
        if tuple(props) != VERTEX_PROPERTIES:
            raise MeshParseError(f"{path.name}: unexpected vertex properties {props}")

        body = end + len(marker)
        nv, nf = counts.get("vertex", 0), counts.get("face", 0)
        verts = np.frombuffer(data, dtype=VERTEX_DTYPE, count=nv, offset=body)
        faces = np.frombuffer(data, dtype=FACE_DTYPE, count=nf, offset=body + nv * VERTEX_DTYPE.itemsize)

        def cols(names):
            return np.stack([verts[n].astype(np.float64) for n in names], axis=1)

        mesh = TriangleMesh(cols(VERTEX_PROPERTIES[:3]), faces["vertex_indices"].astype(np.int64))
        return FieldSnapshot(
            mesh=OrientedMesh(mesh, cols(VERTEX_PROPERTIES[3:6])),
            vectors=cols(VERTEX_PROPERTIES[6:]),
            name=name,
        )


ply_repository = PlyRepository()
