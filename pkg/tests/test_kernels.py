"""The numba and numpy kernels must agree."""

import numpy as np
import pytest

from spheredeg import kernels
from spheredeg.mesh import build_mesh

from conftest import random_poly_field


def test_poly_eval_backends_agree(rng):
    f = random_poly_field(rng, 3, max_deg=4, n_terms=6)
    coeffs, exps, comp = f._packed
    pts = rng.uniform(-2, 2, (1000, 3))
    a = kernels.poly_eval(coeffs, exps, comp, 3, pts, backend="numba")
    b = kernels.poly_eval(coeffs, exps, comp, 3, pts, backend="numpy")
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("n, level", [(1, 3), (2, 3), (3, 2)])
def test_coverage_backends_agree(rng, n, level):
    mesh = build_mesh(n, level)
    warp = rng.normal(size=(n + 1, n + 1))
    img = mesh.vertices @ (np.eye(n + 1) + 0.3 * warp)
    img /= np.linalg.norm(img, axis=1, keepdims=True)
    images = img[mesh.simplices]
    for _ in range(5):
        p = rng.normal(size=n + 1)
        p /= np.linalg.norm(p)
        assert kernels.signed_coverage(images, p, backend="numba") == \
            kernels.signed_coverage(images, p, backend="numpy")
    assert kernels.max_simplex_diameter(images, backend="numba") == pytest.approx(
        kernels.max_simplex_diameter(images, backend="numpy"), rel=1e-14)


def test_coverage_flags_target_on_boundary():
    # the target sits exactly on the shared edge of two triangles
    mesh = build_mesh(2, 0)
    images = mesh.vertices[mesh.simplices]
    p = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
    for backend in ("numba", "numpy"):
        _, _, bad, first = kernels.signed_coverage(images, p, backend=backend)
        assert bad == 2 and first >= 0


def test_degenerate_images_are_skipped():
    images = np.tile(np.array([1.0, 0.0]), (4, 2, 1))
    for backend in ("numba", "numpy"):
        assert kernels.signed_coverage(images, np.array([0.6, 0.8]), backend=backend)[:2] == (0, 0)
