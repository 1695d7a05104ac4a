import math

import numpy as np
import pytest

from spheredeg.mesh import LEVEL_CAP, TriangulatedSphere, build_mesh, refine, validate_mesh


def test_circle_base_is_ccw_square():
    m = build_mesh(1, 0)
    assert len(m.vertices) == 4 and m.n_simplices == 4
    for a, b in m.simplices:
        va, vb = m.vertices[a], m.vertices[b]
        assert va[0] * vb[1] - va[1] * vb[0] > 0


def test_octahedron():
    m = build_mesh(2, 0)
    assert len(m.vertices) == 6 and m.n_simplices == 8
    assert np.all(m.simplex_dets() > 0)


def test_level_three_sphere():
    m = build_mesh(2, 3)
    assert m.n_simplices == 8 * 4 ** 3 == 512
    assert not validate_mesh(m)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_counts_and_validity_every_level(n):
    base = 2 ** (n + 1)
    for level in range(min(LEVEL_CAP[n], 4) + 1):
        m = build_mesh(n, level)
        assert m.n_simplices == base * 2 ** (n * level)
        rep = validate_mesh(m)
        assert rep.ok, rep


def test_refine_square_to_octagon():
    assert refine(build_mesh(1, 0)).n_simplices == 8


def test_refine_shrinks_edges():
    m0 = build_mesh(2, 0)
    m1 = refine(m0)
    assert m1.n_simplices == 32
    assert m1.max_edge_length() < m0.max_edge_length()


def _simplex_set(mesh):
    key = lambda v: tuple(np.round(v, 9))  # noqa: E731
    out = set()
    for s in mesh.simplices:
        pts = [key(mesh.vertices[i]) for i in s]
        # cyclic rotations keep orientation only for n=1,2; compare as orientation + vertex set
        sign = np.sign(np.linalg.det(mesh.vertices[s]))
        out.add((frozenset(pts), sign))
    return out


@pytest.mark.parametrize("n", [1, 2, 3])
def test_refining_twice_matches_level_plus_two(n):
    twice = refine(refine(build_mesh(n, 1)))
    direct = build_mesh(n, 3)
    assert twice.level == direct.level == 3
    assert _simplex_set(twice) == _simplex_set(direct)


def test_swapped_vertex_order_is_one_violation():
    m = build_mesh(2, 2)
    s = m.simplices.copy()
    s[7, [0, 1]] = s[7, [1, 0]]
    rep = validate_mesh(TriangulatedSphere(2, m.vertices, s, m.level))
    assert rep.orientation_violations == [7]
    assert not rep.nonmanifold_faces


@pytest.mark.parametrize("n", [1, 2, 3])
def test_deleted_simplex_leaves_open_faces(n):
    m = build_mesh(n, 2)
    s = np.delete(m.simplices, 5, axis=0)
    rep = validate_mesh(TriangulatedSphere(n, m.vertices, s, m.level))
    assert len(rep.nonmanifold_faces) == n + 1
    assert all(c == 1 for _, c in rep.nonmanifold_faces)


def test_off_sphere_vertex_reported():
    m = build_mesh(2, 1)
    v = m.vertices.copy()
    v[3] *= 1.01
    assert validate_mesh(TriangulatedSphere(2, v, m.simplices)).off_sphere == [3]


@pytest.mark.parametrize("n, ball", [(1, math.pi), (2, 4 * math.pi / 3)])
def test_signed_volume_increases_to_ball_volume(n, ball):
    vols = [build_mesh(n, level).signed_volume() for level in range(5)]
    assert vols[0] > 0
    assert all(a < b for a, b in zip(vols, vols[1:]))
    assert vols[-1] < ball
    assert ball - vols[-1] < 0.05 * ball


def test_vertices_are_unit_and_distinct():
    m = build_mesh(3, 3)
    np.testing.assert_allclose(np.linalg.norm(m.vertices, axis=1), 1.0, atol=1e-12)
    assert not validate_mesh(m).duplicate_vertices


def test_mesh_level_cap():
    from spheredeg.errors import InputError
    with pytest.raises(InputError):
        build_mesh(3, LEVEL_CAP[3] + 1)
    with pytest.raises(InputError):
        build_mesh(4, 0)


def test_meshes_are_read_only():
    m = build_mesh(2, 1)
    with pytest.raises(ValueError):
        m.vertices[0, 0] = 2.0


def test_off_export():
    text = build_mesh(2, 0).to_off().splitlines()
    assert text[0] == "OFF" and text[1] == "6 8 0"
    assert text[-1].startswith("3 ")
