"""Acceptance-scale benchmarks on 10K+ vertex meshes (``pytest -m slow``)."""

import numpy as np
import pytest
from scipy import sparse

from phongfield.core.constants import EigenConfig, EnergyKind
from phongfield.fem.basis import TangentBasis
from phongfield.fem.elements import vector_basis_covariant_derivative, vector_basis_covariant_derivative_fd
from phongfield.fem.rotation import rotation_invariance
from phongfield.fields.bracket import lie_bracket_project
from phongfield.fields.error import field_error
from phongfield.fields.spectral import eigenfields, pair_gaps
from phongfield.geometry.endomorphism import decompose, hom_inner_product
from phongfield.geometry.gauss_map import rotate_frames
from phongfield.models.endo import Endo2
from phongfield.models.field import VertexField
from phongfield.services.hodge_service import paired_spectra
from phongfield.synth.bandlimited import SphereBracket, random_field_torus, random_sphere_pair
from phongfield.synth.reference import (
    cluster_gap_ratio,
    cluster_statistics,
    relative_errors,
    sphere_connection_reference,
    sphere_connection_values,
)
from phongfield.synth.sphere import gen_icosphere, gen_sphere_random
from phongfield.synth.torus import azimuthal_directions, gen_torus

from conftest import make_curved_patch, make_flat_grid, sphere_transport_errors

pytestmark = pytest.mark.slow

SEEDS = range(5)


@pytest.fixture(scope="module")
def torus10k():
    torus = gen_torus(10000, 0)
    return torus, TangentBasis(torus.mesh)


def sphere_bracket_error(mesh, b, seed=0):
    X, Y = random_sphere_pair(b, seed)
    basis = TangentBasis(mesh)
    Z = lie_bracket_project(basis, X.on_mesh(mesh), Y.on_mesh(mesh))
    return field_error(basis, Z, SphereBracket(X, Y).on_mesh(mesh))


def torus_bracket_error(torus, basis, b, seed):
    pair = random_field_torus(b, seed)
    Z = lie_bracket_project(basis, pair.X.on_torus(torus), pair.Y.on_torus(torus))
    return field_error(basis, Z, pair.bracket.on_torus(torus))


class TestSphereSpectrum:
    def test_random_hull_clusters(self):
        basis = TangentBasis(gen_sphere_random(10000, seed=0))
        values = eigenfields(basis, EnergyKind.CONNECTION, 30).values
        clusters = sphere_connection_reference(30)
        assert [m for _, m in clusters] == [6, 10, 14]
        for stats in cluster_statistics(values, clusters):
            assert stats.mean_rel_deviation <= 0.05
        assert cluster_gap_ratio(values, clusters) >= 3.0

    def test_icosphere_refinement(self):
        reference = sphere_connection_values(30)
        errors = []
        for passes in (3, 4):
            values = eigenfields(TangentBasis(gen_icosphere(passes)), EnergyKind.CONNECTION, 30).values
            errors.append(relative_errors(values, reference).mean())
        assert errors[1] < errors[0]


class TestTorusStructure:
    def test_rotation_invariance(self, torus10k):
        _, basis = torus10k
        parts = basis.component_stiffness()
        result = rotation_invariance(basis.vector_mass(), parts["scalar"], parts["traceless"], parts["antisym"])
        assert result["mass"] <= 1e-12
        assert result["traceless"] <= 1e-8
        assert result["div_curl"] <= 1e-8

    def test_hodge_harmonics(self, torus10k):
        _, basis = torus10k
        hodge = eigenfields(basis, EnergyKind.HODGE, 12).values
        assert hodge[0] < 0.1 * hodge[2]
        assert hodge[1] < 0.1 * hodge[2]
        assert pair_gaps(hodge).max() <= 1e-3
        connection = eigenfields(basis, EnergyKind.CONNECTION, 12).values
        assert pair_gaps(connection).max() <= 1e-3

    def test_hodge_cotangent_pairing(self, torus10k):
        _, basis = torus10k
        res = paired_spectra(basis, 1, 20)
        assert res["rel_even"].max() <= 0.1
        assert res["rel_odd"].max() <= 0.1

    def test_killing_field_circulates_about_the_axis(self, torus10k):
        torus, basis = torus10k
        result = eigenfields(basis, EnergyKind.KILLING, 2)
        assert result.values[0] <= 0.2 * result.values[1]
        v = VertexField(result.vector(0)).realize_at_vertices(basis.frames)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        alignment = np.abs(np.einsum("va,va->v", v, azimuthal_directions(torus.mesh.vertices)))
        assert alignment.mean() >= 0.9


class TestBracket:
    def test_icosphere(self):
        mesh = gen_icosphere(5)
        assert mesh.num_vertices == 10242
        assert sphere_bracket_error(mesh, 2) <= 3e-3
        assert sphere_bracket_error(mesh, 10) <= 3e-2

    def test_random_hull(self):
        assert sphere_bracket_error(gen_sphere_random(10000, seed=0), 2) <= 5e-2

    def test_torus_refinement(self):
        errors = {}
        for n in (10000, 40000):
            per_seed = []
            for seed in SEEDS:
                torus = gen_torus(n, seed)
                per_seed.append(torus_bracket_error(torus, TangentBasis(torus.mesh), 5, seed))
            errors[n] = np.mean(per_seed)
        assert errors[40000] < errors[10000]

    def test_torus_error_grows_with_bandwidth(self):
        bandwidths = (2, 5, 10, 20)
        errors = np.zeros((len(SEEDS), len(bandwidths)))
        for i, seed in enumerate(SEEDS):
            torus = gen_torus(10000, seed)
            basis = TangentBasis(torus.mesh)
            for j, b in enumerate(bandwidths):
                errors[i, j] = torus_bracket_error(torus, basis, b, seed)
        assert np.all(np.diff(errors.mean(axis=0)) > 0)


class TestVectorHeat:
    def test_random_hull_transport(self):
        errors = sphere_transport_errors(gen_sphere_random(10000, seed=0))
        assert errors.mean() < 5.0

    def test_icosphere_transport(self):
        assert sphere_transport_errors(gen_icosphere(5)).mean() < 1.0


class TestDiscretizationOracles:
    def test_flat_patch_reduction(self):
        basis = TangentBasis(make_flat_grid(32))
        assert basis.mesh.num_triangles == 2048
        scalar_mass = sparse.kron(basis.scalar_mass(), sparse.identity(2))
        scalar_stiffness = sparse.kron(basis.scalar_stiffness(), sparse.identity(2))
        assert np.abs((basis.vector_mass() - scalar_mass).toarray()).max() <= 1e-12
        assert np.abs((basis.stiffness(EnergyKind.CONNECTION) - scalar_stiffness).toarray()).max() <= 1e-12

    def test_covariant_derivative_oracle(self, rng):
        for _ in range(1000):
            patch = make_curved_patch(rng)
            j = int(rng.integers(6))
            s, t = rng.uniform(0.05, 0.45, 2)
            st = np.array([s, t])
            exact = vector_basis_covariant_derivative(patch, j, st).m[0]
            fd = vector_basis_covariant_derivative_fd(patch, j, st, h=1e-5).m[0]
            assert np.abs(exact - fd).max() <= 1e-5 * max(np.abs(exact).max(), 1.0)

    def test_frame_invariance(self, rng):
        mesh = gen_sphere_random(1000, seed=4)
        base = TangentBasis(mesh)
        rotated = TangentBasis(mesh, frames=rotate_frames(base.frames, rng.uniform(0.0, 2.0 * np.pi, mesh.num_vertices)))
        config = EigenConfig(tol=1e-12)
        a = eigenfields(base, EnergyKind.CONNECTION, 20, config=config).values
        b = eigenfields(rotated, EnergyKind.CONNECTION, 20, config=config).values
        np.testing.assert_allclose(b, a, rtol=1e-9)

    def test_decomposition_orthogonality(self, rng):
        n = 10000
        m = rng.standard_normal((n, 2, 2))
        angle = rng.uniform(0.0, np.pi, n)
        c, s = np.cos(angle), np.sin(angle)
        Q = np.stack([np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=-2)
        D = np.exp(rng.uniform(-1.0, 1.0, (n, 2)))
        g = Q @ (D[:, :, None] * np.swapaxes(Q, 1, 2))
        parts = decompose(Endo2(m, g))
        norm2 = np.sum(m**2, axis=(1, 2))
        np.testing.assert_allclose(sum(p.m for p in parts), m, atol=1e-12)
        for i in range(3):
            for k in range(i + 1, 3):
                assert np.all(np.abs(hom_inner_product(parts[i], parts[k])) <= 1e-12 * norm2)
