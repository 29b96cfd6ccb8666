"""球面剖分：随机凸包与 icosphere"""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from phongfield.core.constants import ANISO_SEMI_AXES, NormalMode
from phongfield.core.exceptions import GenerationError, ParameterError
from phongfield.core.logging_config import get_logger
from phongfield.geometry.normals import compute_vertex_normals
from phongfield.geometry.subdivision import subdivide_connectivity
from phongfield.geometry.topology import validate_mesh
from phongfield.models.mesh import OrientedMesh, TriangleMesh

logger = get_logger(__name__)

MAX_HULL_ATTEMPTS = 5
HULL_JITTER = 1e-12


def _normalize(points: np.ndarray) -> np.ndarray:
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def orient_outward(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """翻转法向指向原点的三角形"""
    c = vertices[triangles]
    cross = np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0])
    inward = np.einsum("ta,ta->t", cross, c.sum(axis=1)) < 0
    out = triangles.copy()
    out[inward] = out[inward][:, [0, 2, 1]]
    return out


def hull_triangles(points: np.ndarray) -> np.ndarray:
    """使用全部点的外向凸包三角形

    Raises:
        GenerationError: 有点不是凸包顶点
    """
    try:
        hull = ConvexHull(points)
    except QhullError as e:
        raise GenerationError(f"convex hull failed: {e}") from e
    if len(hull.vertices) != len(points):
        raise GenerationError(
            "convex hull skipped interior or duplicate points",
            used=int(len(hull.vertices)),
            points=int(len(points)),
        )
    return orient_outward(points, hull.simplices.astype(np.int64))


def sample_sphere(n: int, rng: np.random.Generator) -> np.ndarray:
    """n uniform points on the unit sphere."""
    return _normalize(rng.standard_normal((n, 3)))


def sample_ellipsoid(
    n: int,
    rng: np.random.Generator,
    axes: tuple[float, float, float] = ANISO_SEMI_AXES,
) -> np.ndarray:
    """给定半轴椭球面上按面积均匀分布的 n 个点

    球面样本经 diag(axes) 映射，以正比于面积拉伸的概率保留。
    """
    axes_arr = np.asarray(axes, dtype=np.float64)
    inv2 = 1.0 / axes_arr**2
    bound = np.sqrt(inv2.max())
    out = []
    count = 0
    while count < n:
        x = sample_sphere(max(2 * (n - count), 64), rng)
        stretch = np.sqrt(x**2 @ inv2)
        keep = x[rng.uniform(0.0, bound, len(x)) < stretch]
        out.append(keep * axes_arr)
        count += len(keep)
    return np.concatenate(out)[:n]


def _sphere_normals(mesh: TriangleMesh, normals: NormalMode | str | None) -> np.ndarray:
    if normals is None or normals == "radial":
        return mesh.vertices
    return compute_vertex_normals(mesh, NormalMode(normals))


def gen_sphere_random(
    n: int,
    seed: int,
    aniso: bool = False,
    normals: NormalMode | str | None = None,
) -> OrientedMesh:
    """单位球面上 n 个随机点的凸包

    ``aniso`` 时在 (1, 4, 1) 椭球面上采样并剖分，再投影回球面，得到拉长的三角形。
    未指定 NormalMode 时法向取精确的径向法向。

    Raises:
        ParameterError: n < 4
        GenerationError: 多次扰动重试后仍得不到有效凸包
    """
    if n < 4:
        raise ParameterError("a sphere needs at least 4 points", n=n)
    rng = np.random.default_rng(seed)
    points = sample_ellipsoid(n, rng) if aniso else sample_sphere(n, rng)

    for attempt in range(MAX_HULL_ATTEMPTS):
        try:
            triangles = hull_triangles(points)
            break
        except GenerationError as e:
            logger.warning(f"hull attempt {attempt + 1} failed ({e.message}); jittering points")
            points = points + HULL_JITTER * rng.standard_normal(points.shape)
    else:
        raise GenerationError("no valid convex hull", n=n, seed=seed, attempts=MAX_HULL_ATTEMPTS)

    mesh = validate_mesh(TriangleMesh(_normalize(points), triangles))
    logger.info(
        f"Random {'anisotropic ' if aniso else ''}sphere: {mesh.num_vertices} vertices, "
        f"{mesh.num_triangles} triangles (seed {seed})"
    )
    return OrientedMesh(mesh, _sphere_normals(mesh, normals))


def icosahedron() -> TriangleMesh:
    """单位正二十面体，12 个顶点、20 个外向三角形"""
    phi = 0.5 * (1.0 + np.sqrt(5.0))
    base = []
    for a in (-1.0, 1.0):
        for b in (-phi, phi):
            base += [(0.0, a, b), (a, b, 0.0), (b, 0.0, a)]
    vertices = _normalize(np.array(base))
    return TriangleMesh(vertices, hull_triangles(vertices))


def gen_icosphere(passes: int, normals: NormalMode | str | None = None) -> OrientedMesh:
    """正二十面体逐次一分为四，每次细分后投影回球面"""
    if passes < 0:
        raise ParameterError("subdivision passes must be nonnegative", passes=passes)
    mesh = icosahedron()
    for _ in range(passes):
        e = mesh.edges
        mid = _normalize(0.5 * (mesh.vertices[e[:, 0]] + mesh.vertices[e[:, 1]]))
        mesh = TriangleMesh(np.concatenate([mesh.vertices, mid]), subdivide_connectivity(mesh))
    logger.info(f"Icosphere ({passes} passes): {mesh.num_vertices} vertices")
    return OrientedMesh(mesh, _sphere_normals(mesh, normals))
