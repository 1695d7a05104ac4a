"""Hot numeric loops, each with a numba and a pure-numpy implementation.

The public functions dispatch on ``backend`` (``"numba"``, ``"numpy"`` or
``None`` for the process default chosen in :mod:`spheredeg._accel`). Both
paths must agree exactly on integer outputs; ``tests/test_kernels.py`` checks
that they do.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

_CHUNK = 32768


def _resolve(backend):
    if backend is None:
        return "numba" if USE_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


# -- polynomial evaluation -------------------------------------------------


def _poly_eval_numpy(coeffs, exps, comp, n_out, points):
    n_pts = points.shape[0]
    out = np.zeros((n_pts, n_out))
    if coeffs.size == 0:
        return out
    onehot = np.zeros((coeffs.size, n_out))
    onehot[np.arange(coeffs.size), comp] = coeffs
    for start in range(0, n_pts, _CHUNK):
        blk = points[start:start + _CHUNK]
        terms = np.prod(blk[:, None, :] ** exps[None, :, :], axis=2)
        out[start:start + _CHUNK] = terms @ onehot
    return out


@njit
def _poly_eval_numba(coeffs, exps, comp, n_out, points):
    n_pts, dim = points.shape
    n_mono = coeffs.shape[0]
    out = np.zeros((n_pts, n_out))
    for i in range(n_pts):
        for k in range(n_mono):
            term = coeffs[k]
            for j in range(dim):
                e = exps[k, j]
                if e > 0:
                    term *= points[i, j] ** e
            out[i, comp[k]] += term
    return out


def poly_eval(coeffs, exps, comp, n_out, points, backend=None):
    """Evaluate a packed polynomial map at each row of ``points``.

    ``coeffs[k] * prod(points[:, j] ** exps[k, j])`` is added to output column
    ``comp[k]``.
    """
    points = np.ascontiguousarray(points, dtype=np.float64)
    if _resolve(backend) == "numba":
        return _poly_eval_numba(coeffs, exps, comp, n_out, points)
    return _poly_eval_numpy(coeffs, exps, comp, n_out, points)


# -- simplex image diameters ----------------------------------------------


def _max_diameter_numpy(images):
    k = images.shape[1]
    best = 0.0
    for a in range(k):
        for b in range(a + 1, k):
            d = np.linalg.norm(images[:, a] - images[:, b], axis=1)
            if d.size:
                best = max(best, float(d.max()))
    return best


@njit
def _max_diameter_numba(images):
    n_s, k, dim = images.shape
    best = 0.0
    for s in range(n_s):
        for a in range(k):
            for b in range(a + 1, k):
                acc = 0.0
                for j in range(dim):
                    t = images[s, a, j] - images[s, b, j]
                    acc += t * t
                if acc > best:
                    best = acc
    return np.sqrt(best)


def max_simplex_diameter(images, backend=None):
    """Largest chordal distance between two vertices of any image simplex."""
    images = np.ascontiguousarray(images, dtype=np.float64)
    if _resolve(backend) == "numba":
        return float(_max_diameter_numba(images))
    return _max_diameter_numpy(images)


# -- signed coverage count -------------------------------------------------


def _coverage_numpy(images, target, eps):
    n_s, k, _ = images.shape
    total = 0
    covered = 0
    nongeneric = 0
    first_bad = -1
    for start in range(0, n_s, _CHUNK):
        blk = images[start:start + _CHUNK]
        det = np.linalg.det(blk)
        repl = np.repeat(blk[:, None, :, :], k, axis=1)
        idx = np.arange(k)
        repl[:, idx, idx, :] = target
        num = np.linalg.det(repl)
        ok = det != 0.0
        lam = np.full(num.shape, -np.inf)
        lam[ok] = num[ok] / det[ok, None]
        lo = lam.min(axis=1)
        bad = ok & (lo >= -eps) & (np.abs(lam) <= eps).any(axis=1)
        inside = ok & (lo > eps)
        total += int(np.sign(det[inside]).sum())
        covered += int(inside.sum())
        if bad.any():
            nongeneric += int(bad.sum())
            if first_bad < 0:
                first_bad = start + int(np.flatnonzero(bad)[0])
    return total, covered, nongeneric, first_bad


@njit
def _coverage_numba(images, target, eps):
    n_s, k, _ = images.shape
    total = 0
    covered = 0
    nongeneric = 0
    first_bad = -1
    a = np.empty((k, k))
    rhs = np.empty(k)
    lam = np.empty(k)
    for s in range(n_s):
        # A = W^T, columns are image vertices
        for i in range(k):
            rhs[i] = target[i]
            for j in range(k):
                a[i, j] = images[s, j, i]
        det = 1.0
        singular = False
        for c in range(k):
            piv = c
            big = abs(a[c, c])
            for r in range(c + 1, k):
                if abs(a[r, c]) > big:
                    big = abs(a[r, c])
                    piv = r
            if big == 0.0:
                singular = True
                break
            if piv != c:
                for j in range(k):
                    tmp = a[c, j]
                    a[c, j] = a[piv, j]
                    a[piv, j] = tmp
                tmp = rhs[c]
                rhs[c] = rhs[piv]
                rhs[piv] = tmp
                det = -det
            det *= a[c, c]
            for r in range(c + 1, k):
                f = a[r, c] / a[c, c]
                if f != 0.0:
                    for j in range(c, k):
                        a[r, j] -= f * a[c, j]
                    rhs[r] -= f * rhs[c]
        if singular or det == 0.0:
            continue
        for i in range(k - 1, -1, -1):
            acc = rhs[i]
            for j in range(i + 1, k):
                acc -= a[i, j] * lam[j]
            lam[i] = acc / a[i, i]
        lo = lam[0]
        near = False
        for i in range(k):
            if lam[i] < lo:
                lo = lam[i]
            if abs(lam[i]) <= eps:
                near = True
        if lo >= -eps and near:
            nongeneric += 1
            if first_bad < 0:
                first_bad = s
        elif lo > eps:
            covered += 1
            total += 1 if det > 0.0 else -1
    return total, covered, nongeneric, first_bad


def signed_coverage(images, target, eps=1e-9, backend=None):
    """Signed count of image simplices whose cone contains ``target``.

    ``images`` has shape (S, k, k): S simplices, k unit image vertices in R^k
    stored as rows. Returns ``(degree, covered, nongeneric, first_bad)`` where
    ``nongeneric`` counts simplices with the target within ``eps`` of their
    boundary (conic coordinates) and ``first_bad`` indexes the first of them.
    """
    images = np.ascontiguousarray(images, dtype=np.float64)
    target = np.ascontiguousarray(target, dtype=np.float64)
    if _resolve(backend) == "numba":
        res = _coverage_numba(images, target, float(eps))
    else:
        res = _coverage_numpy(images, target, float(eps))
    return tuple(int(v) for v in res)
