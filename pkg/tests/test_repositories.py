import numpy as np
import pytest

from phongfield.core.exceptions import MeshIndexError, MeshParseError, ParameterError
from phongfield.fem.basis import TangentBasis
from phongfield.repositories import (
    CsvTable,
    FieldSnapshot,
    csv_repository,
    load_obj,
    load_sidecar,
    matrix_repository,
    obj_repository,
    ply_repository,
    report_repository,
    save_obj,
)
from phongfield.schemas.generator import GeneratorSidecar
from phongfield.schemas.report import ExperimentReport

from conftest import TETRA_OBJ, write_obj


class TestObjParse:
    def test_face_index_zero(self):
        with pytest.raises(MeshParseError) as info:
            obj_repository.parse(["v 0 0 0", "v 1 0 0", "v 0 1 0", "f 0 1 2"])
        assert info.value.details["line"] == 4

    def test_bad_coordinate(self):
        with pytest.raises(MeshParseError) as info:
            obj_repository.parse(["v 0 0 0", "v 1 zero 0"])
        assert info.value.details["line"] == 2

    def test_short_face(self):
        with pytest.raises(MeshParseError):
            obj_repository.parse(["v 0 0 0", "v 1 0 0", "f 1 2"])

    def test_polygons_are_fan_triangulated(self):
        lines = ["v 0 0 0", "v 1 0 0", "v 1 1 0", "v 0 1 0", "f 1 2 3 4"]
        _, triangles, normals = obj_repository.parse(lines)
        np.testing.assert_array_equal(triangles, [[0, 1, 2], [0, 2, 3]])
        assert normals is None

    def test_negative_indices(self):
        lines = ["v 0 0 0", "v 1 0 0", "v 0 1 0", "f -3 -2 -1"]
        _, triangles, _ = obj_repository.parse(lines)
        np.testing.assert_array_equal(triangles, [[0, 1, 2]])

    def test_texture_and_normal_references(self):
        lines = [
            "v 0 0 0", "v 1 0 0", "v 0 1 0",
            "vt 0 0", "vn 0 0 1",
            "f 1/1/1 2/1/1 3/1/1",
        ]
        _, _, normals = obj_repository.parse(lines)
        np.testing.assert_allclose(normals, np.tile([0.0, 0.0, 1.0], (3, 1)))


class TestObjFiles:
    def test_load_computes_missing_normals(self, tmp_path):
        mesh = load_obj(write_obj(tmp_path, TETRA_OBJ))
        assert mesh.num_vertices == 4
        cos = np.einsum("va,va->v", mesh.normals, mesh.vertices / np.sqrt(3.0))
        assert cos.min() > 0.9

    def test_no_faces(self, tmp_path):
        with pytest.raises(MeshParseError):
            load_obj(write_obj(tmp_path, "v 0 0 0\nv 1 0 0\nv 0 1 0\n"))

    def test_index_out_of_range(self, tmp_path):
        with pytest.raises(MeshIndexError):
            load_obj(write_obj(tmp_path, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 7\n"))

    def test_round_trip_with_sidecar(self, tmp_path, icosphere1):
        sidecar = GeneratorSidecar(
            generator="icosphere",
            params={"passes": 1},
            num_vertices=icosphere1.num_vertices,
            num_triangles=icosphere1.num_triangles,
        )
        path = save_obj(icosphere1, tmp_path / "out" / "ico.obj", sidecar=sidecar)
        loaded = load_obj(path)
        np.testing.assert_array_equal(loaded.vertices, icosphere1.vertices)
        np.testing.assert_array_equal(loaded.triangles, icosphere1.triangles)
        np.testing.assert_allclose(loaded.normals, icosphere1.normals, atol=1e-15)
        assert load_sidecar(path) == sidecar


class TestArtifacts:
    def test_csv_round_trip(self, tmp_path):
        table = CsvTable.from_columns("errors", b=[2, 5], E=[0.5, 0.25])
        table.append(10, 0.125)
        loaded = csv_repository.load(csv_repository.save(table, tmp_path / "errors.csv"))
        assert loaded.name == "errors"
        assert loaded.columns == ["b", "E"]
        assert loaded.schema_version == "1"
        assert loaded.column("E") == ["0.5", "0.25", "0.125"]

    def test_csv_header_for_empty_table(self, tmp_path):
        path = csv_repository.save(CsvTable(name="empty", columns=["k", "value"]), tmp_path / "e.csv")
        assert csv_repository.load(path).columns == ["k", "value"]

    def test_csv_row_width_checked(self):
        with pytest.raises(ParameterError):
            CsvTable(name="t", columns=["a", "b"]).append(1)

    def test_ply_round_trip(self, tmp_path, icosphere1, rng):
        vectors = rng.standard_normal((icosphere1.num_vertices, 3))
        path = ply_repository.save(FieldSnapshot(icosphere1, vectors, name="noise"), tmp_path / "f.ply")
        loaded = ply_repository.load(path)
        assert loaded.name == "noise"
        np.testing.assert_array_equal(loaded.mesh.triangles, icosphere1.triangles)
        np.testing.assert_allclose(loaded.mesh.vertices, icosphere1.vertices, atol=1e-6)
        np.testing.assert_allclose(loaded.vectors, vectors, rtol=1e-6, atol=1e-6)

    def test_matrix_round_trip(self, tmp_path, icosphere1):
        M = TangentBasis(icosphere1).vector_mass()
        paths = matrix_repository.dump_all({"mass": M}, tmp_path)
        loaded = matrix_repository.load(paths["mass"])
        np.testing.assert_array_equal(loaded.toarray(), M.toarray())

    def test_report_round_trip(self, tmp_path):
        report = ExperimentReport(experiment="demo", parameters={"seed": 3}, metrics={"E": 0.01})
        loaded = report_repository.load(report_repository.save(report, tmp_path / "report.json"))
        assert loaded == report

    def test_default_paths_live_under_the_output_dir(self, tmp_path):
        path = report_repository.path_for("report", "demo")
        assert path == tmp_path / "results" / "demo" / "report.json"
        assert path.parent.is_dir()
