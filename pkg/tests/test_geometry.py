import numpy as np
import pytest

from phongfield.core.constants import NormalMode
from phongfield.core.exceptions import (
    AntipodalError,
    BoundaryUnsupportedError,
    DegenerateTriangleError,
    InconsistentNormalError,
    MeshIndexError,
    NonManifoldError,
    OrientationError,
    TopologyError,
)
from phongfield.geometry.endomorphism import decompose, hom_inner_product
from phongfield.geometry.gauss_map import corner_transport, default_frames, gauss_map, realization, rotate_frames
from phongfield.geometry.normals import compute_vertex_normals
from phongfield.geometry.rodrigues import rodrigues, rodrigues_directional_derivative
from phongfield.geometry.subdivision import loop_subdivide, subdivision_matrix
from phongfield.geometry.topology import aspect_ratios, genus, rescale_unit_area, validate_mesh
from phongfield.models.endo import Endo2
from phongfield.models.mesh import OrientedMesh, TriangleMesh
from phongfield.models.patch import BaryPoint, TrianglePatch

from conftest import make_curved_patch, make_flat_grid


def random_unit(rng, n):
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


class TestRodrigues:
    def test_maps_v_to_w(self, rng):
        v, w = random_unit(rng, 50), random_unit(rng, 50)
        keep = np.einsum("pa,pa->p", v, w) > -0.9
        R = rodrigues(v[keep], w[keep])
        np.testing.assert_allclose(np.einsum("pab,pb->pa", R, v[keep]), w[keep], atol=1e-12)

    def test_is_a_rotation(self, rng):
        v, w = random_unit(rng, 20), random_unit(rng, 20)
        keep = np.einsum("pa,pa->p", v, w) > -0.9
        R = rodrigues(v[keep], w[keep])
        eye = np.broadcast_to(np.eye(3), R.shape)
        np.testing.assert_allclose(R @ np.swapaxes(R, 1, 2), eye, atol=1e-12)
        np.testing.assert_allclose(np.linalg.det(R), 1.0, atol=1e-12)

    def test_identity_for_equal_vectors(self, rng):
        v = random_unit(rng, 5)
        np.testing.assert_allclose(rodrigues(v, v), np.broadcast_to(np.eye(3), (5, 3, 3)), atol=1e-15)

    def test_antipodal_rejected(self):
        v = np.array([[0.0, 0.0, 1.0]])
        with pytest.raises(AntipodalError):
            rodrigues(v, -v, index=np.array([7]))

    def test_directional_derivative_matches_finite_differences(self, rng):
        v = random_unit(rng, 1)[0]
        w0 = v + 0.5 * rng.standard_normal(3)
        A = rng.standard_normal((3, 2))

        def w_of(x):
            m = w0 + A @ x
            return m / np.linalg.norm(m)

        x = np.array([0.1, -0.2])
        h = 1e-6
        m = w0 + A @ x
        dw = (np.eye(3) - np.outer(w_of(x), w_of(x))) @ A / np.linalg.norm(m)
        dR = rodrigues_directional_derivative(v, w_of(x), dw)
        for a in range(2):
            step = np.zeros(2)
            step[a] = h
            fd = (rodrigues(v, w_of(x + step)) - rodrigues(v, w_of(x - step))) / (2 * h)
            np.testing.assert_allclose(dR[a], fd, atol=1e-7)


class TestDecomposition:
    def random_pairs(self, rng, n):
        m = rng.standard_normal((n, 2, 2))
        B = rng.standard_normal((n, 2, 2))
        g = B @ np.swapaxes(B, 1, 2) + 0.1 * np.eye(2)
        return m, g

    def test_parts_sum_back(self, rng):
        m, g = self.random_pairs(rng, 1000)
        parts = decompose(Endo2(m, g))
        np.testing.assert_allclose(sum(p.m for p in parts), m, atol=1e-12)

    def test_parts_are_orthogonal(self, rng):
        m, g = self.random_pairs(rng, 1000)
        parts = decompose(Endo2(m, g))
        scale = np.sum(m**2, axis=(1, 2)) * np.linalg.cond(g)
        for i in range(3):
            for j in range(i + 1, 3):
                ip = np.abs(hom_inner_product(parts[i], parts[j]))
                assert np.all(ip <= 1e-12 * scale)

    def test_scalar_part_is_half_trace(self, rng):
        m, g = self.random_pairs(rng, 1)
        scalar, traceless, _ = decompose(Endo2(m[0], g[0]))
        np.testing.assert_allclose(scalar.m, 0.5 * np.trace(m[0]) * np.eye(2))
        assert abs(np.trace(traceless.m)) < 1e-12

    def test_inner_product_is_nonnegative(self, rng):
        m, g = self.random_pairs(rng, 100)
        assert np.all(hom_inner_product(Endo2(m, g), Endo2(m, g)) >= 0)


class TestGaussMap:
    def test_normal_at_corners(self, rng):
        patch = make_curved_patch(rng)
        for i in range(3):
            N, _ = gauss_map(patch, BaryPoint.corner(i))
            np.testing.assert_allclose(N[0], patch.normals[0, i], atol=1e-14)

    def test_derivative_is_tangent(self, rng):
        patch = make_curved_patch(rng)
        N, dN = gauss_map(patch, BaryPoint.barycenter())
        np.testing.assert_allclose(np.einsum("ta,tas->ts", N, dN), 0.0, atol=1e-14)

    def test_corner_transport(self, rng):
        patch = make_curved_patch(rng)
        st = np.array([0.25, 0.35])
        N, _ = gauss_map(patch, st)
        for i in range(3):
            R = corner_transport(patch, i, st)[0]
            np.testing.assert_allclose(R @ patch.normals[0, i], N[0], atol=1e-14)
            np.testing.assert_allclose(R.T @ R, np.eye(3), atol=1e-14)
            np.testing.assert_allclose(corner_transport(patch, i, BaryPoint.corner(i))[0], np.eye(3), atol=1e-14)

    def test_realization_preserves_metric(self, rng):
        patch = make_curved_patch(rng)
        dphi_t, dphi_t_inv = realization(patch, np.array([0.2, 0.5]))
        np.testing.assert_allclose(np.swapaxes(dphi_t, 1, 2) @ dphi_t, patch.g, atol=1e-12)
        np.testing.assert_allclose(dphi_t_inv @ dphi_t, np.eye(2)[None], atol=1e-12)

    def test_vanishing_normal_rejected(self):
        corners = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        normals = np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        patch = TrianglePatch.single(corners, normals, default_frames(normals))
        # the corner normals of the first edge cancel at its midpoint
        with pytest.raises(InconsistentNormalError):
            gauss_map(patch, np.array([0.5, 0.0]))


class TestFrames:
    def test_right_handed_orthonormal(self, rng):
        n = random_unit(rng, 100)
        f = default_frames(n)
        np.testing.assert_allclose(np.einsum("vka,va->vk", f, n), 0.0, atol=1e-14)
        np.testing.assert_allclose(np.linalg.norm(f, axis=2), 1.0, atol=1e-14)
        np.testing.assert_allclose(f[:, 1], np.cross(n, f[:, 0]), atol=1e-14)

    def test_rotation_keeps_handedness(self, rng):
        n = random_unit(rng, 10)
        f = rotate_frames(default_frames(n), rng.uniform(0, 2 * np.pi, 10))
        np.testing.assert_allclose(f[:, 1], np.cross(n, f[:, 0]), atol=1e-14)


class TestMeshChecks:
    def test_index_out_of_range(self):
        with pytest.raises(MeshIndexError):
            TriangleMesh(np.zeros((3, 3)), np.array([[0, 1, 3]]))

    def test_non_manifold_edge(self):
        vertices = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1]], dtype=float)
        mesh = TriangleMesh(vertices, np.array([[0, 1, 2], [1, 0, 3], [0, 1, 4]]))
        with pytest.raises(NonManifoldError):
            validate_mesh(mesh)

    def test_inconsistent_orientation(self):
        vertices = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]], dtype=float)
        validate_mesh(TriangleMesh(vertices, np.array([[0, 1, 2], [1, 3, 2]])))
        flipped = TriangleMesh(vertices, np.array([[0, 1, 2], [1, 2, 3]]))
        with pytest.raises(OrientationError):
            validate_mesh(flipped)

    def test_degenerate_triangle(self):
        vertices = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [2, 0, 0]], dtype=float)
        with pytest.raises(DegenerateTriangleError):
            validate_mesh(TriangleMesh(vertices, np.array([[0, 1, 2], [0, 3, 1]])))

    def test_tiny_meshes_are_not_degenerate(self, flat_grid):
        mesh = flat_grid.mesh
        tiny = TriangleMesh(mesh.vertices * 1e-8, mesh.triangles)
        assert tiny.face_areas.max() < 1e-14
        validate_mesh(tiny)
        assert rescale_unit_area(OrientedMesh(tiny, flat_grid.normals)).mesh.total_area == pytest.approx(1.0)

    def test_opposing_normal_rejected(self, tetrahedron):
        with pytest.raises(InconsistentNormalError):
            OrientedMesh(tetrahedron.mesh, -tetrahedron.normals)

    def test_genus_requires_closed_mesh(self, flat_grid):
        with pytest.raises(TopologyError):
            genus(flat_grid)

    def test_genus(self, tetrahedron, icosphere1, small_torus):
        assert genus(tetrahedron) == 0
        assert genus(icosphere1) == 0
        assert genus(small_torus.mesh) == 1

    def test_rescale_unit_area(self, icosphere1):
        assert rescale_unit_area(icosphere1).mesh.total_area == pytest.approx(1.0, rel=1e-12)

    def test_equilateral_aspect_ratio(self):
        h = np.sqrt(3) / 2
        mesh = TriangleMesh(np.array([[0, 0, 0], [1, 0, 0], [0.5, h, 0]]), np.array([[0, 1, 2]]))
        assert aspect_ratios(mesh)[0] == pytest.approx(1.0)


class TestNormals:
    def test_flat_mesh_normals(self):
        grid = make_flat_grid(4)
        for mode in NormalMode:
            normals = compute_vertex_normals(grid.mesh, mode)
            np.testing.assert_allclose(normals, np.tile([0.0, 0.0, 1.0], (grid.num_vertices, 1)), atol=1e-12)

    def test_sphere_normals_close_to_radial(self, icosphere2):
        for mode in NormalMode:
            normals = compute_vertex_normals(icosphere2.mesh, mode)
            cos = np.einsum("va,va->v", normals, icosphere2.vertices)
            assert cos.min() > 0.99


class TestSubdivision:
    def test_tetrahedron_counts(self, tetrahedron):
        refined = loop_subdivide(tetrahedron, NormalMode.AREA_WEIGHTED)
        assert refined.num_vertices == 10
        assert refined.num_triangles == 16
        assert refined.mesh.is_closed
        assert genus(refined) == 0

    def test_stencil_rows_sum_to_one(self, icosphere1):
        S = subdivision_matrix(icosphere1.mesh)
        np.testing.assert_allclose(np.asarray(S.sum(axis=1)).ravel(), 1.0, atol=1e-14)

    def test_boundary_rejected(self, flat_grid):
        with pytest.raises(BoundaryUnsupportedError):
            loop_subdivide(flat_grid)
