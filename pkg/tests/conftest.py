"""Shared meshes and helpers for the phongfield test suite."""

import numpy as np
import pytest

from phongfield.core.config import settings
from phongfield.fem.basis import TangentBasis
from phongfield.fields.heat import vector_heat
from phongfield.geometry.gauss_map import default_frames
from phongfield.geometry.rodrigues import rodrigues
from phongfield.models.mesh import OrientedMesh, TriangleMesh
from phongfield.models.patch import TrianglePatch
from phongfield.synth.sphere import gen_icosphere, orient_outward
from phongfield.synth.torus import gen_torus

TETRA_OBJ = """\
# a tetrahedron
v 1 1 1
v 1 -1 -1
v -1 1 -1
v -1 -1 1
f 1 2 3
f 1 4 2
f 1 3 4
f 2 4 3
"""


def make_flat_grid(n: int = 6, size: float = 1.0) -> OrientedMesh:
    """(n + 1)^2 vertex grid in the z = 0 plane with constant normals."""
    xs = np.linspace(0.0, size, n + 1)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    vertices = np.stack([X.ravel(), Y.ravel(), np.zeros(X.size)], axis=1)
    tris = []
    for i in range(n):
        for j in range(n):
            a = i * (n + 1) + j
            b = (i + 1) * (n + 1) + j
            tris.append((a, b, b + 1))
            tris.append((a, b + 1, a + 1))
    normals = np.tile([0.0, 0.0, 1.0], (len(vertices), 1))
    return OrientedMesh(TriangleMesh(vertices, np.array(tris)), normals)


def make_tetrahedron() -> OrientedMesh:
    vertices = np.array([[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]])
    triangles = orient_outward(vertices, np.array([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]))
    return OrientedMesh(TriangleMesh(vertices, triangles), vertices)


def make_curved_patch(rng: np.random.Generator, tilt: float = 0.3) -> TrianglePatch:
    """A random non-planar triangle with corner normals tilted off the face normal."""
    corners = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    corners[1:] += 0.2 * rng.standard_normal((2, 3))
    face = np.cross(corners[1] - corners[0], corners[2] - corners[0])
    face /= np.linalg.norm(face)
    normals = face + tilt * rng.uniform(-1.0, 1.0, (3, 3))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    return TrianglePatch.single(corners, normals, default_frames(normals))


def sphere_transport_errors(oriented: OrientedMesh, source: int = 0, min_cos: float = -0.8) -> np.ndarray:
    """Angles (degrees) between vector heat and great-circle parallel transport on the unit sphere.

    Vertices whose direction cosine to the source is below ``min_cos`` are
    near the cut locus and skipped.
    """
    basis = TangentBasis(oriented)
    result = vector_heat(basis, {source: np.array([1.0, 0.0])})
    got = result.direction.realize_at_vertices(basis.frames)

    p = oriented.mesh.vertices[source]
    q = oriented.mesh.vertices
    keep = (q @ p > min_cos) & (np.arange(len(q)) != source)
    R = rodrigues(np.broadcast_to(p, q[keep].shape), q[keep])
    expected = R @ basis.frames[source, 0]
    got = got[keep]
    cos = np.einsum("va,va->v", got, expected)
    sin = np.linalg.norm(np.cross(got, expected), axis=1)
    return np.degrees(np.arctan2(sin, cos))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def icosphere1():
    return gen_icosphere(1)


@pytest.fixture(scope="session")
def icosphere2():
    return gen_icosphere(2)


@pytest.fixture(scope="session")
def small_torus():
    return gen_torus(256, 0)


@pytest.fixture
def flat_grid():
    return make_flat_grid()


@pytest.fixture
def tetrahedron():
    return make_tetrahedron()


@pytest.fixture(autouse=True)
def isolated_output(tmp_path, monkeypatch):
    """Keep default artifact paths inside the test's temporary directory."""
    monkeypatch.setattr(settings, "OUTPUT_DIR", tmp_path / "results")


def write_obj(tmp_path, text: str, name: str = "mesh.obj"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path
