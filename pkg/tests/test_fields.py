import numpy as np
import pytest

from phongfield.core.constants import EnergyKind
from phongfield.core.exceptions import OddEigenspaceError, ParameterError
from phongfield.fem.basis import TangentBasis
from phongfield.fem.solvers import EigenResult
from phongfield.fields.bracket import BracketMode, bracket_weak_rhs, lie_bracket_pointwise, lie_bracket_project
from phongfield.fields.error import field_error
from phongfield.fields.evaluation import as_ambient, eval_field, gradient_field, project_ambient
from phongfield.fields.heat import source_labels, vector_heat
from phongfield.fields.interpolation import constraint_map, energy, frame_coefficients, interpolate_sparse
from phongfield.fields.spectral import eigen_clusters, eigenfields, grade_eigenspace, grade_spectrum, pair_gaps
from phongfield.geometry.gauss_map import gauss_map
from phongfield.models.field import AmbientField, VertexField
from phongfield.synth.bandlimited import SphereBracket, coordinate_fields
from phongfield.synth.sphere import gen_icosphere

from conftest import make_flat_grid, sphere_transport_errors


@pytest.fixture(scope="module")
def sphere_basis():
    return TangentBasis(gen_icosphere(2))


def random_field(basis, rng):
    return VertexField(rng.standard_normal(basis.dim))


def span_residual(M, A, B):
    """Largest relative M-norm of a column of A left after projecting onto span(B)."""
    C = np.linalg.solve(B.T @ (M @ B), B.T @ (M @ A))
    R = A - B @ C
    num = np.einsum("ij,ij->j", R, M @ R)
    den = np.einsum("ij,ij->j", A, M @ A)
    return float(np.sqrt(np.maximum(num, 0.0) / den).max())


class TestEvaluation:
    def test_value_at_corner_is_the_frame_combination(self, sphere_basis, rng):
        f = random_field(sphere_basis, rng)
        tri = np.arange(10)
        value, _ = eval_field(sphere_basis, f, tri, np.zeros((10, 2)))
        corner = sphere_basis.mesh.triangles[tri, 0]
        np.testing.assert_allclose(value, f.realize_at_vertices(sphere_basis.frames)[corner], atol=1e-12)

    def test_projection_reproduces_discrete_fields(self, sphere_basis, rng):
        f = random_field(sphere_basis, rng)
        z = project_ambient(sphere_basis, as_ambient(sphere_basis, f))
        np.testing.assert_allclose(z.coeffs, f.coeffs, atol=1e-9)

    def test_gradient_field_is_tangent(self, sphere_basis, rng):
        u = rng.standard_normal(sphere_basis.num_vertices)
        grad = gradient_field(sphere_basis, u)
        tri = np.arange(sphere_basis.mesh.num_triangles)
        st = np.broadcast_to([0.2, 0.3], (len(tri), 2))
        N, _ = gauss_map(sphere_basis.patch(tri), st)
        np.testing.assert_allclose(np.einsum("pa,pa->p", grad(tri, st), N), 0.0, atol=1e-12)

    def test_wrong_size_rejected(self, sphere_basis):
        with pytest.raises(ParameterError):
            eval_field(sphere_basis, VertexField.zeros(3), [0], [0.2, 0.2])


class TestError:
    def test_identical_fields(self, sphere_basis, rng):
        f = random_field(sphere_basis, rng)
        assert field_error(sphere_basis, f, f) == 0.0

    def test_opposite_fields(self, sphere_basis, rng):
        f = random_field(sphere_basis, rng)
        g = VertexField(-f.coeffs)
        assert field_error(sphere_basis, f, g) == pytest.approx(np.sqrt(2.0), rel=1e-12)

    def test_against_zero(self, sphere_basis, rng):
        f = random_field(sphere_basis, rng)
        assert field_error(sphere_basis, f, AmbientField.zero()) == pytest.approx(1.0)

    def test_both_vanish(self, sphere_basis):
        zero = VertexField.zeros(sphere_basis.num_vertices)
        assert field_error(sphere_basis, zero, AmbientField.zero()) is None


class TestBracket:
    def test_antisymmetric(self, sphere_basis, rng):
        X, Y = random_field(sphere_basis, rng), random_field(sphere_basis, rng)
        xy = lie_bracket_project(sphere_basis, X, Y)
        yx = lie_bracket_project(sphere_basis, Y, X)
        np.testing.assert_allclose(xy.coeffs, -yx.coeffs, atol=1e-10 * np.abs(xy.coeffs).max())

    @pytest.mark.parametrize("mode", list(BracketMode))
    def test_projection_satisfies_the_normal_equations(self, sphere_basis, mode):
        X, Y = coordinate_fields()
        mesh = sphere_basis.mesh
        Xm, Ym = X.on_mesh(mesh), Y.on_mesh(mesh)
        z = lie_bracket_project(sphere_basis, Xm, Ym, mode).coeffs
        b = bracket_weak_rhs(sphere_basis, Xm, Ym, mode)
        M = sphere_basis.vector_mass()
        assert b @ z == pytest.approx(z @ (M @ z), rel=1e-8)
        np.testing.assert_allclose(M @ z, b, atol=1e-8 * np.abs(b).max())

    def test_self_bracket_vanishes(self, sphere_basis, rng):
        X = random_field(sphere_basis, rng)
        coords, realized = lie_bracket_pointwise(sphere_basis, X, X, np.arange(5), [0.3, 0.3])
        assert np.abs(coords).max() == 0.0
        assert np.abs(realized).max() == 0.0

    def test_direct_mode_needs_a_jacobian(self, sphere_basis):
        field = AmbientField(evaluator=lambda tri, st: np.zeros((len(tri), 3)), name="no jacobian")
        with pytest.raises(ParameterError):
            lie_bracket_project(sphere_basis, field, field, BracketMode.DIRECT)

    @pytest.mark.parametrize("mode", list(BracketMode))
    def test_error_decreases_under_refinement(self, mode):
        X, Y = coordinate_fields()
        errors = []
        for passes in (2, 3):
            mesh = gen_icosphere(passes)
            basis = TangentBasis(mesh)
            Z = lie_bracket_project(basis, X.on_mesh(mesh), Y.on_mesh(mesh), mode)
            errors.append(field_error(basis, Z, SphereBracket(X, Y).on_mesh(mesh)))
        assert errors[1] < errors[0] < 0.5


class TestInterpolation:
    def test_constant_constraints_give_a_constant_field(self):
        basis = TangentBasis(make_flat_grid(6))
        constraints = {0: np.array([1.0, 0.0]), 24: np.array([1.0, 0.0]), 48: np.array([1.0, 0.0])}
        f = interpolate_sparse(basis, constraints, EnergyKind.CONNECTION)
        np.testing.assert_allclose(f.pairs(), np.tile([1.0, 0.0], (basis.num_vertices, 1)), atol=1e-10)

    def test_constraints_hold_exactly(self, sphere_basis):
        constraints = {3: np.array([0.5, -1.0]), 40: np.array([0.0, 2.0])}
        f = interpolate_sparse(sphere_basis, constraints)
        for i, v in constraint_map(sphere_basis, constraints).items():
            assert f.coeffs[i] == v

    def test_three_dimensional_constraints_are_projected(self, sphere_basis):
        frames = sphere_basis.frames
        v = 2.0 * frames[5, 0] - frames[5, 1] + 0.7 * sphere_basis.mesh.normals[5]
        np.testing.assert_allclose(frame_coefficients(sphere_basis, 5, v), [2.0, -1.0], atol=1e-12)

    @pytest.mark.parametrize("kind", [EnergyKind.CONNECTION, EnergyKind.KILLING, EnergyKind.ANTI_HOLOMORPHIC])
    def test_interpolant_minimizes_the_energy(self, sphere_basis, rng, kind):
        constraints = {0: np.array([1.0, 0.0]), 50: np.array([0.0, 1.0]), 100: np.array([-1.0, 1.0])}
        f = interpolate_sparse(sphere_basis, constraints, kind)
        base = energy(sphere_basis, f, kind)
        fixed = list(constraint_map(sphere_basis, constraints))
        for _ in range(10):
            delta = rng.standard_normal(sphere_basis.dim)
            delta[fixed] = 0.0
            assert energy(sphere_basis, VertexField(f.coeffs + 1e-2 * delta), kind) >= base - 1e-12

    def test_hodge_interpolant_beats_connection_on_the_torus(self, small_torus):
        basis = TangentBasis(small_torus.mesh)
        constraints = {0: np.array([1.0, 0.0]), 100: np.array([0.0, 1.0]), 200: np.array([1.0, 1.0])}
        hodge = interpolate_sparse(basis, constraints, EnergyKind.HODGE)
        conn = interpolate_sparse(basis, constraints, EnergyKind.CONNECTION)
        assert energy(basis, hodge, "hodge") <= energy(basis, conn, "hodge") * (1.0 + 1e-9)

    def test_needs_constraints(self, sphere_basis):
        with pytest.raises(ParameterError):
            interpolate_sparse(sphere_basis, {})

    def test_vertex_out_of_range(self, sphere_basis):
        with pytest.raises(ParameterError):
            interpolate_sparse(sphere_basis, {10**6: np.array([1.0, 0.0])})


class TestVectorHeat:
    def test_single_source_keeps_its_magnitude(self, sphere_basis):
        result = vector_heat(sphere_basis, {7: np.array([3.0, 4.0])})
        np.testing.assert_allclose(result.magnitude, 5.0, rtol=1e-6)
        assert result.indicator.min() > 0

    def test_direction_at_the_source(self, sphere_basis):
        result = vector_heat(sphere_basis, {7: np.array([0.0, 2.0])})
        direction = result.direction.pairs()[7]
        assert direction @ np.array([0.0, 1.0]) > 0.9

    def test_default_time_is_squared_mean_edge(self, sphere_basis):
        result = vector_heat(sphere_basis, {0: np.array([1.0, 0.0])})
        assert result.t == pytest.approx(sphere_basis.mesh.mesh.mean_edge_length**2)

    def test_bad_parameters(self, sphere_basis):
        with pytest.raises(ParameterError):
            vector_heat(sphere_basis, {})
        with pytest.raises(ParameterError):
            vector_heat(sphere_basis, {0: np.array([1.0, 0.0])}, t=0.0)

    def test_sources_label_themselves(self, sphere_basis):
        sources = [0, 60, 120]
        labels = source_labels(sphere_basis, sources)
        assert [int(labels[s]) for s in sources] == [0, 1, 2]
        consistent = source_labels(sphere_basis, sources, lumped=False)
        assert [int(consistent[s]) for s in sources] == [0, 1, 2]

    def test_plane_transport_is_constant(self):
        basis = TangentBasis(make_flat_grid(16))
        center = 8 * 17 + 8
        result = vector_heat(basis, {center: np.array([1.0, 0.0, 0.0])}, t=0.25)
        vectors = result.field.realize_at_vertices(basis.frames)
        norms = np.linalg.norm(vectors, axis=1)
        np.testing.assert_allclose(norms, 1.0, rtol=0.01)
        assert (vectors[:, 0] / norms).min() > 0.99

    def test_sphere_transport_follows_great_circles(self):
        errors = sphere_transport_errors(gen_icosphere(3))
        assert errors.mean() < 5.0

    def test_consistent_scalar_mass(self, sphere_basis):
        lumped = vector_heat(sphere_basis, {7: np.array([3.0, 4.0])})
        consistent = vector_heat(sphere_basis, {7: np.array([3.0, 4.0])}, lumped=False)
        np.testing.assert_allclose(consistent.magnitude, 5.0, rtol=1e-6)
        assert not np.allclose(consistent.indicator, lumped.indicator)
        np.testing.assert_allclose(consistent.direction.coeffs, lumped.direction.coeffs)


class TestSpectral:
    def test_sphere_connection_clusters(self, sphere_basis):
        values = eigenfields(sphere_basis, EnergyKind.CONNECTION, 16).values
        np.testing.assert_allclose(values[:6], 1.0, rtol=0.1)
        np.testing.assert_allclose(values[6:16], 5.0, rtol=0.15)
        assert values[6] / values[5] > 3.0

    def test_killing_kernel_holds_the_rotations(self):
        basis = TangentBasis(gen_icosphere(3))
        values = eigenfields(basis, EnergyKind.KILLING, 4).values
        assert values[2] <= 0.2 * values[3]

    def test_grading_minimizes_divergence(self, sphere_basis, rng):
        result = eigenfields(sphere_basis, EnergyKind.CONNECTION, 6)
        graded = grade_eigenspace(sphere_basis, result.vectors)
        assert graded.vectors.shape == (sphere_basis.dim, 6)
        M = sphere_basis.vector_mass()
        T = sphere_basis.stiffness(EnergyKind.DIVERGENCE)
        for _ in range(100):
            x = result.vectors @ rng.standard_normal(6)
            assert (x @ (T @ x)) / (x @ (M @ x)) >= graded.divergence[0] - 1e-10

    def test_grading_needs_an_even_block(self, sphere_basis):
        result = eigenfields(sphere_basis, EnergyKind.CONNECTION, 3)
        with pytest.raises(OddEigenspaceError):
            grade_eigenspace(sphere_basis, result.vectors)

    def test_graded_basis_spans_the_eigenspace(self, sphere_basis):
        X = eigenfields(sphere_basis, EnergyKind.CONNECTION, 6).vectors
        G = grade_eigenspace(sphere_basis, X).vectors
        M = sphere_basis.vector_mass()
        assert span_residual(M, G, X) < 1e-8
        assert span_residual(M, X, G) < 1e-8

    def test_clusters_split_at_large_gaps(self):
        clusters = eigen_clusters(np.array([1.0, 1.01, 1.02, 1.03, 5.0, 5.1]), rtol=0.1)
        assert [(c.start, c.stop) for c in clusters] == [(0, 4), (4, 6)]
        clusters = eigen_clusters(np.array([1e-9, 3e-9, 1.0, 1.0]))
        assert [(c.start, c.stop) for c in clusters] == [(0, 2), (2, 4)]
        assert eigen_clusters(np.array([])) == []

    def test_spectrum_is_graded_per_cluster(self, sphere_basis, rng):
        result = eigenfields(sphere_basis, EnergyKind.CONNECTION, 6)
        graded = grade_spectrum(sphere_basis, result)
        assert graded.cluster.tolist() == [0] * 6

        M = sphere_basis.vector_mass()
        T = sphere_basis.stiffness(EnergyKind.DIVERGENCE)
        G = graded.vectors
        expected = [(x @ (T @ x)) / (x @ (M @ x)) for x in G.T]
        np.testing.assert_allclose(graded.divergence, expected, rtol=1e-10, atol=1e-14)
        assert graded.divergence[0] == pytest.approx(graded.divergence.min(), abs=1e-10)
        for _ in range(100):
            x = result.vectors @ rng.standard_normal(6)
            assert (x @ (T @ x)) / (x @ (M @ x)) >= graded.divergence[0] - 1e-10

    def test_whole_cluster_beats_pairwise_grading(self, sphere_basis):
        result = eigenfields(sphere_basis, EnergyKind.CONNECTION, 6)
        whole = grade_spectrum(sphere_basis, result).divergence[0::2]
        pairwise = np.concatenate(
            [grade_eigenspace(sphere_basis, result.vectors[:, i:i + 2]).divergence for i in (0, 2, 4)]
        )
        assert whole.min() <= pairwise.min() + 1e-10

    def test_odd_cluster_rejected(self, sphere_basis):
        result = eigenfields(sphere_basis, EnergyKind.CONNECTION, 4)
        fake = EigenResult(values=np.array([1.0, 1.0, 1.0, 5.0]), vectors=result.vectors, residuals=result.residuals)
        with pytest.raises(OddEigenspaceError) as info:
            grade_spectrum(sphere_basis, fake)
        assert info.value.details == {"dim": 3, "start": 0}

    def test_pair_gaps(self):
        np.testing.assert_allclose(pair_gaps(np.array([1.0, 1.0, 2.0, 3.0, 9.0])), [0.0, 0.2])
