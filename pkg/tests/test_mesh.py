import numpy as np
import pytest

from motrans.errors import DegenerateGeometryError, MeshValidationError, ObjParseError
from motrans.mesh import Mesh, denormalize, normalize, parse_obj, serialize_obj


def random_mesh(rng, n_vertices=None):
    n = n_vertices or rng.integers(4, 60)
    verts = rng.normal(size=(n, 3)) * rng.uniform(0.1, 20)
    n_faces = int(rng.integers(1, 2 * n))
    faces = rng.integers(0, n, size=(n_faces, 3))
    return Mesh(vertices=verts, faces=faces)


class TestParseObj:
    def test_minimal_triangle(self):
        m = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3")
        assert m.vertex_count == 3
        assert m.faces.tolist() == [[0, 1, 2]]

    def test_fan_triangulation_quad(self):
        m = parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4")
        assert m.vertex_count == 4
        assert m.faces.tolist() == [[0, 1, 2], [0, 2, 3]]

    def test_fan_preserves_counts(self):
        # an n-gon becomes n-2 triangles
        n = 7
        verts = "\n".join(f"v {i} 0 0" for i in range(n))
        face = "f " + " ".join(str(i + 1) for i in range(n))
        m = parse_obj(verts + "\n" + face)
        assert m.vertex_count == n
        assert m.face_count == n - 2

    def test_index_out_of_range(self):
        with pytest.raises(MeshValidationError, match="line 4"):
            parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 5")

    def test_malformed_numeric(self):
        with pytest.raises(ObjParseError, match="line 2"):
            parse_obj("v 0 0 0\nv x 0 0")

    def test_negative_indices(self):
        m = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1")
        assert m.faces.tolist() == [[0, 1, 2]]

    def test_slash_suffixes_and_junk_records(self):
        text = "vt 0 0\nvn 0 0 1\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1/1/1 2/1/1 3/1/1\nusemtl x"
        m = parse_obj(text)
        assert m.face_count == 1

    def test_bytes_input(self):
        m = parse_obj(b"v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3")
        assert m.vertex_count == 3

    def test_empty_obj_rejected(self):
        with pytest.raises(MeshValidationError):
            parse_obj("# nothing here")


class TestSerializeObj:
    def test_round_trip_triangle(self):
        m = Mesh(vertices=[[0, 0, 0], [1, 0, 0], [0, 1, 0]], faces=[[0, 1, 2]])
        again = parse_obj(serialize_obj(m))
        assert np.allclose(again.vertices, m.vertices, atol=1e-6)
        assert again.faces.tolist() == m.faces.tolist()

    def test_vertex_only_mesh(self):
        m = Mesh(vertices=[[1, 2, 3]], faces=np.zeros((0, 3), int))
        again = parse_obj(serialize_obj(m))
        assert again.face_count == 0
        assert again.vertex_count == 1

    def test_round_trip_fuzz(self):
        # [DERIVED] random meshes survive the OBJ boundary to 1e-6
        rng = np.random.default_rng(7)
        for _ in range(20):
            m = random_mesh(rng)
            again = parse_obj(serialize_obj(m))
            assert np.abs(again.vertices - m.vertices).max() < 1e-6
            assert again.faces.tolist() == m.faces.tolist()

    def test_large_mesh_round_trip(self):
        rng = np.random.default_rng(3)
        m = random_mesh(rng, n_vertices=1000)
        again = parse_obj(serialize_obj(m))
        assert np.abs(again.vertices - m.vertices).max() < 1e-6


class TestNormalize:
    def test_shifted_cube(self):
        corners = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)],
                           dtype=float) + 4.5  # unit cube centered at (5,5,5)
        m = Mesh(vertices=corners, faces=[[0, 1, 2]])
        out, rec = normalize(m)
        assert np.linalg.norm(out.centroid()) < 1e-9
        assert abs((out.vertices[:, 1].max() - out.vertices[:, 1].min()) - 1) < 1e-9
        assert np.allclose(rec.translation, [-5, -5, -5])
        assert rec.scale == pytest.approx(1.0)

    def test_idempotent_record(self):
        corners = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)],
                           dtype=float) - 0.5
        m = Mesh(vertices=corners, faces=[[0, 1, 2]])
        out, rec = normalize(m)
        assert np.linalg.norm(rec.translation) < 1e-9
        assert abs(rec.scale - 1.0) < 1e-9

    def test_round_trip_property(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            m = random_mesh(rng)
            out, rec = normalize(m)
            assert np.linalg.norm(out.centroid()) < 1e-9
            assert abs((out.vertices[:, 1].max() - out.vertices[:, 1].min()) - 1) < 1e-9
            back = denormalize(out, rec)
            assert np.abs(back.vertices - m.vertices).max() < 1e-9

    def test_zero_height_rejected(self):
        m = Mesh(vertices=[[0, 0, 0], [1, 0, 0], [0, 0, 1]], faces=[[0, 1, 2]])
        with pytest.raises(DegenerateGeometryError):
            normalize(m)


class TestMeshInvariants:
    def test_face_index_validation(self):
        with pytest.raises(MeshValidationError):
            Mesh(vertices=[[0, 0, 0]], faces=[[0, 0, 5]])

    def test_vertices_frozen(self):
        m = Mesh(vertices=[[0, 0, 0], [1, 1, 1]], faces=np.zeros((0, 3), int))
        with pytest.raises(ValueError):
            m.vertices[0, 0] = 9.0
