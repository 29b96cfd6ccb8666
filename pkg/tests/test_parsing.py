import numpy as np
import pytest

from phongfield.core.exceptions import ParameterError
from phongfield.utils.parsing import parse_mesh_source, parse_vector_map, to_int

from conftest import TETRA_OBJ, write_obj


class TestVectorMap:
    def test_two_and_three_components(self):
        out = parse_vector_map("0:1,0; 5:0,1,0")
        assert list(out) == [0, 5]
        np.testing.assert_array_equal(out[0], [1.0, 0.0])
        np.testing.assert_array_equal(out[5], [0.0, 1.0, 0.0])

    def test_trailing_separator(self):
        assert list(parse_vector_map("3:1,2;")) == [3]

    @pytest.mark.parametrize(
        "token",
        ["", "0:1", "0:1,2,3,4", "x:1,0", "0:1,a", "01,0", "0:1,0;0:0,1"],
    )
    def test_malformed(self, token):
        with pytest.raises(ParameterError):
            parse_vector_map(token)

    def test_to_int(self):
        assert to_int("12", "count") == 12
        with pytest.raises(ParameterError):
            to_int("1.5", "count")


class TestMeshSource:
    def test_icosphere(self):
        source = parse_mesh_source("icosphere:1")
        assert source.mesh.num_vertices == 42
        assert source.torus is None
        assert source.sidecar.generator == "icosphere"
        assert source.sidecar.params["passes"] == 1

    def test_random_sphere_with_seed(self):
        source = parse_mesh_source("sphere:50:2")
        assert source.mesh.num_vertices == 50
        assert source.sidecar.seed == 2

    def test_torus_keeps_parameter_data(self):
        source = parse_mesh_source("torus:100:3")
        assert source.torus is not None
        assert source.torus.seed == 3
        assert source.mesh is source.torus.mesh

    def test_unit_area_drops_torus_parameters(self):
        source = parse_mesh_source("torus:100", unit_area=True)
        assert source.torus is None
        assert source.mesh.mesh.total_area == pytest.approx(1.0, rel=1e-12)

    def test_recomputed_normals(self):
        radial = parse_mesh_source("icosphere:2").mesh
        smooth = parse_mesh_source("icosphere:2", normals="area-weighted").mesh
        assert not np.allclose(smooth.normals, radial.normals, atol=1e-14)
        assert np.einsum("va,va->v", smooth.normals, radial.normals).min() > 0.99

    def test_obj_file(self, tmp_path):
        source = parse_mesh_source(str(write_obj(tmp_path, TETRA_OBJ)))
        assert source.mesh.num_vertices == 4
        assert source.sidecar is None

    @pytest.mark.parametrize("token", ["missing.obj", "icosphere:x", "torus:ten", "cube:3"])
    def test_bad_tokens(self, token):
        with pytest.raises(ParameterError):
            parse_mesh_source(token)

    def test_unknown_normals_mode(self):
        with pytest.raises(ParameterError):
            parse_mesh_source("icosphere:1", normals="bogus")
