import numpy as np
import pytest

from phongfield.core.exceptions import ParameterError
from phongfield.geometry.topology import genus
from phongfield.synth.bandlimited import (
    BandlimitedField,
    SphereBracket,
    coordinate_fields,
    random_field_sphere,
    random_field_torus,
)
from phongfield.synth.reference import (
    cluster_gap_ratio,
    cluster_statistics,
    relative_errors,
    sphere_connection_reference,
    sphere_connection_values,
)
from phongfield.synth.sphere import gen_sphere_random, icosahedron
from phongfield.synth.torus import (
    azimuthal_directions,
    empty_circumcircle_violations,
    gen_torus,
    torus_embedding,
    torus_jacobian,
)


def central_difference(fn, x, h=1e-6):
    """d fn / dx along each coordinate; fn maps (P, d) to (P, C)."""
    cols = []
    for a in range(x.shape[1]):
        step = np.zeros(x.shape[1])
        step[a] = h
        cols.append((fn(x + step) - fn(x - step)) / (2 * h))
    return np.stack(cols, axis=-1)


class TestSphereMeshes:
    def test_icosahedron(self):
        mesh = icosahedron()
        assert (mesh.num_vertices, mesh.num_triangles) == (12, 20)
        assert genus(mesh) == 0

    def test_icosphere_counts(self, icosphere1):
        assert (icosphere1.num_vertices, icosphere1.num_triangles) == (42, 80)
        np.testing.assert_allclose(np.linalg.norm(icosphere1.vertices, axis=1), 1.0, atol=1e-14)

    def test_random_sphere_is_a_closed_genus_zero_surface(self):
        mesh = gen_sphere_random(200, seed=3)
        assert mesh.num_vertices == 200
        assert mesh.num_triangles == 396
        assert genus(mesh) == 0
        np.testing.assert_allclose(mesh.normals, mesh.vertices, atol=1e-14)

    def test_random_sphere_is_reproducible(self):
        a = gen_sphere_random(100, seed=11)
        b = gen_sphere_random(100, seed=11)
        np.testing.assert_array_equal(a.triangles, b.triangles)

    def test_anisotropic_sphere(self):
        mesh = gen_sphere_random(200, seed=3, aniso=True)
        assert genus(mesh) == 0
        np.testing.assert_allclose(np.linalg.norm(mesh.vertices, axis=1), 1.0, atol=1e-12)

    def test_too_few_points(self):
        with pytest.raises(ParameterError):
            gen_sphere_random(3, seed=0)


class TestTorus:
    def test_counts_and_topology(self, small_torus):
        mesh = small_torus.mesh.mesh
        assert mesh.num_vertices == 256
        assert mesh.num_triangles == 512
        assert mesh.euler_characteristic() == 0
        assert genus(mesh) == 1

    def test_periodic_delaunay(self, small_torus, rng):
        assert empty_circumcircle_violations(small_torus, 200, rng) == 0

    def test_corner_params_embed_the_corners(self, small_torus):
        mesh = small_torus.mesh
        embedded = torus_embedding(small_torus.corner_params)
        np.testing.assert_allclose(embedded, mesh.vertices[mesh.triangles], atol=1e-12)

    def test_normals_are_orthogonal_to_the_parameter_lines(self, small_torus):
        dphi = torus_jacobian(small_torus.params)
        n = small_torus.mesh.normals
        np.testing.assert_allclose(np.einsum("va,vak->vk", n, dphi), 0.0, atol=1e-12)

    def test_azimuthal_directions_are_tangent(self, small_torus):
        d = azimuthal_directions(small_torus.mesh.vertices)
        np.testing.assert_allclose(np.einsum("va,va->v", d, small_torus.mesh.normals), 0.0, atol=1e-12)
        np.testing.assert_allclose(d[:, 1], 0.0)

    def test_too_few_points(self):
        with pytest.raises(ParameterError):
            gen_torus(15, seed=0)


class TestBandlimited:
    def test_coefficients_are_conjugate_symmetric(self, rng):
        f = BandlimitedField.random(2, 2, 3, rng)
        np.testing.assert_allclose(f.coeffs, np.conj(np.flip(f.coeffs, axis=(1, 2))), atol=1e-15)

    def test_constant_field(self):
        f = BandlimitedField.constant([1.0, -2.0, 0.5], 3)
        x = np.random.default_rng(0).standard_normal((5, 3))
        np.testing.assert_allclose(f(x), np.tile([1.0, -2.0, 0.5], (5, 1)), atol=1e-15)
        np.testing.assert_allclose(f.jacobian(x), 0.0, atol=1e-15)

    def test_jacobian_matches_finite_differences(self, rng):
        f = BandlimitedField.random(2, 3, 3, rng)
        x = rng.uniform(-1.0, 1.0, (7, 3))
        exact = f.jacobian(x)
        np.testing.assert_allclose(exact, central_difference(f, x), atol=1e-5 * np.abs(exact).max())

    def test_sphere_field_is_tangent(self, rng):
        X = random_field_sphere(3, 5)
        x = rng.standard_normal((50, 3))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        np.testing.assert_allclose(np.einsum("pa,pa->p", X.value(x), x), 0.0, atol=1e-12)

    def test_sphere_jacobian_matches_finite_differences(self, rng):
        X = random_field_sphere(2, 8)
        x = rng.standard_normal((6, 3))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        exact = X.jacobian(x)
        np.testing.assert_allclose(exact, central_difference(X.value, x), atol=1e-5 * np.abs(exact).max())

    def test_sphere_bracket_is_antisymmetric_and_tangent(self, rng):
        X, Y = coordinate_fields()
        x = rng.standard_normal((20, 3))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        xy = SphereBracket(X, Y).value(x)
        np.testing.assert_allclose(xy, -SphereBracket(Y, X).value(x), atol=1e-14)
        np.testing.assert_allclose(np.einsum("pa,pa->p", xy, x), 0.0, atol=1e-14)

    def test_on_mesh_evaluates_at_the_vertices(self, icosphere1):
        X = random_field_sphere(2, 1)
        field = X.on_mesh(icosphere1)
        tri = np.arange(icosphere1.num_triangles)
        values = field(tri, np.zeros((len(tri), 2)))
        np.testing.assert_allclose(values, X.value(icosphere1.vertices[icosphere1.triangles[:, 0]]), atol=1e-12)

    def test_torus_pair_pushes_forward_to_tangent_fields(self, small_torus):
        pair = random_field_torus(2, 4)
        field = pair.X.on_torus(small_torus)
        tri = np.arange(small_torus.mesh.num_triangles)
        values = field(tri, np.zeros((len(tri), 2)))
        n = small_torus.mesh.normals[small_torus.mesh.triangles[:, 0]]
        np.testing.assert_allclose(np.einsum("pa,pa->p", values, n), 0.0, atol=1e-12)
        assert pair.bracket.on_torus(small_torus).has_jacobian is False

    def test_bandwidth_must_be_positive(self):
        with pytest.raises(ParameterError):
            random_field_sphere(0, 1)
        with pytest.raises(ParameterError):
            random_field_torus(0, 1)


class TestReference:
    def test_first_clusters(self):
        assert sphere_connection_reference(16) == [(1.0, 6), (5.0, 10)]
        np.testing.assert_allclose(sphere_connection_values(8), [1, 1, 1, 1, 1, 1, 5, 5])

    def test_truncated_last_cluster(self):
        clusters = sphere_connection_reference(20)
        assert clusters[-1] == (11.0, 4)
        assert sum(m for _, m in clusters) == 20

    def test_distinct_values_up_to_240(self):
        values = [v for v, _ in sphere_connection_reference(240)]
        assert values == [1.0, 5.0, 11.0, 19.0, 29.0, 41.0, 55.0, 71.0, 89.0, 109.0]

    def test_relative_errors(self):
        np.testing.assert_allclose(relative_errors([1.0, 3.0, 0.0], [1.0, 1.0, 0.0]), [0.0, 0.5, 0.0])

    def test_cluster_statistics(self):
        clusters = [(1.0, 2), (5.0, 3)]
        values = np.array([0.9, 1.1, 4.8, 5.0, 5.2])
        stats = cluster_statistics(values, clusters)
        assert [s.size for s in stats] == [2, 3]
        assert stats[0].spread == pytest.approx(0.2)
        assert stats[1].mean_rel_deviation == pytest.approx(0.4 / 15)
        assert cluster_gap_ratio(values, clusters) == pytest.approx(3.7 / 0.4)
