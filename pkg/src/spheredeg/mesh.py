"""Oriented triangulations of S^n (n = 1, 2, 3).

The base complex is the boundary of the cross-polytope in R^{n+1}; each
refinement splits every edge at its midpoint, reprojects the midpoint to the
unit sphere and replaces every n-simplex by 2^n children. A simplex is
positively oriented when the determinant of its vertex rows is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.spatial import cKDTree

from .errors import InputError

LEVEL_CAP = {1: 6, 2: 6, 3: 5}


@dataclass(frozen=True)
class TriangulatedSphere:
    n: int
    vertices: np.ndarray
    simplices: np.ndarray
    level: int = 0

    def __post_init__(self):
        v = np.ascontiguousarray(self.vertices, dtype=np.float64)
        s = np.ascontiguousarray(self.simplices, dtype=np.int64)
        v.flags.writeable = False
        s.flags.writeable = False
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "simplices", s)

    @property
    def n_simplices(self) -> int:
        return len(self.simplices)

    def simplex_dets(self) -> np.ndarray:
        return np.linalg.det(self.vertices[self.simplices])

    def signed_volume(self) -> float:
        """Volume of the inscribed polytope, sum of det / (n+1)!."""
        return float(self.simplex_dets().sum() / math.factorial(self.n + 1))

    def edges(self) -> np.ndarray:
        pairs = np.concatenate([self.simplices[:, [a, b]] for a, b in combinations(range(self.n + 1), 2)])
        return np.unique(np.sort(pairs, axis=1), axis=0)

    def neighbors(self) -> list[np.ndarray]:
        e = self.edges()
        adj = [[] for _ in range(len(self.vertices))]
        for a, b in e:
            adj[a].append(b)
            adj[b].append(a)
        return [np.array(a, dtype=np.int64) for a in adj]

    def max_edge_length(self) -> float:
        e = self.edges()
        return float(np.linalg.norm(self.vertices[e[:, 0]] - self.vertices[e[:, 1]], axis=1).max())

    def to_off(self) -> str:
        lines = ["OFF", f"{len(self.vertices)} {len(self.simplices)} 0"]
        lines += [" ".join(f"{c:.17g}" for c in v) for v in self.vertices]
        lines += [f"{self.n + 1} " + " ".join(str(i) for i in s) for s in self.simplices]
        return "\n".join(lines) + "\n"


def _base(n: int) -> TriangulatedSphere:
    d = n + 1
    verts = np.zeros((2 * d, d))
    for i in range(d):
        verts[2 * i, i] = 1.0
        verts[2 * i + 1, i] = -1.0
    simplices = []
    for signs in np.ndindex(*(2,) * d):
        cell = [2 * i + signs[i] for i in range(d)]
        # facet determinant is the product of the signs
        if sum(signs) % 2 == 1:
            cell[0], cell[1] = cell[1], cell[0]
        simplices.append(cell)
    return TriangulatedSphere(n, verts, np.array(simplices), 0)


_PAIRS = {
    1: [(0, 1)],
    2: [(0, 1), (1, 2), (0, 2)],
    3: [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
}

# octahedron split for n = 3: (diagonal, ring) in terms of midpoint slots
# m01=0 m02=1 m03=2 m12=3 m13=4 m23=5
_OCTA = [
    ((0, 5), (1, 2, 4, 3)),
    ((1, 4), (0, 2, 5, 3)),
    ((2, 3), (0, 1, 5, 4)),
]


def refine(mesh: TriangulatedSphere) -> TriangulatedSphere:
    """One level of midpoint subdivision with radial reprojection."""
    n, s = mesh.n, mesh.simplices
    pairs = _PAIRS[n]
    ends = np.stack([s[:, list(p)] for p in pairs], axis=1)  # (S, P, 2)
    keys = np.sort(ends.reshape(-1, 2), axis=1)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    mids = mesh.vertices[uniq[:, 0]] + mesh.vertices[uniq[:, 1]]
    mids /= np.linalg.norm(mids, axis=1, keepdims=True)
    verts = np.concatenate([mesh.vertices, mids])
    m = (len(mesh.vertices) + inv.reshape(-1)).reshape(len(s), len(pairs))

    if n == 1:
        kids = [np.stack([s[:, 0], m[:, 0]], 1), np.stack([m[:, 0], s[:, 1]], 1)]
    elif n == 2:
        m01, m12, m02 = m[:, 0], m[:, 1], m[:, 2]
        kids = [
            np.stack([s[:, 0], m01, m02], 1),
            np.stack([m01, s[:, 1], m12], 1),
            np.stack([m02, m12, s[:, 2]], 1),
            np.stack([m01, m12, m02], 1),
        ]
    else:
        kids = [
            np.stack([s[:, 0], m[:, 0], m[:, 1], m[:, 2]], 1),
            np.stack([m[:, 0], s[:, 1], m[:, 3], m[:, 4]], 1),
            np.stack([m[:, 1], m[:, 3], s[:, 2], m[:, 5]], 1),
            np.stack([m[:, 2], m[:, 4], m[:, 5], s[:, 3]], 1),
        ]
        lengths = np.stack([
            np.round(np.linalg.norm(verts[m[:, a]] - verts[m[:, b]], axis=1), 12)
            for (a, b), _ in _OCTA
        ], 1)
        lowest = np.stack([np.minimum(m[:, a], m[:, b]) for (a, b), _ in _OCTA], 1)
        best = np.zeros(len(s), dtype=np.int64)
        for j in (1, 2):
            cur_l = lengths[np.arange(len(s)), best]
            cur_i = lowest[np.arange(len(s)), best]
            better = (lengths[:, j] < cur_l) | ((lengths[:, j] == cur_l) & (lowest[:, j] < cur_i))
            best[better] = j
        inner = np.empty((len(s), 4, 4), dtype=np.int64)
        for j, ((a, b), ring) in enumerate(_OCTA):
            sel = best == j
            for r in range(4):
                c0, c1 = ring[r], ring[(r + 1) % 4]
                inner[sel, r] = np.stack([m[sel, a], m[sel, b], m[sel, c0], m[sel, c1]], 1)
        kids += [inner[:, r] for r in range(4)]

    children = np.stack(kids, axis=1).reshape(-1, n + 1)
    if n == 3:
        neg = np.linalg.det(verts[children]) < 0
        children[neg, :2] = children[neg, 1::-1]
    return TriangulatedSphere(n, verts, children, mesh.level + 1)


@lru_cache(maxsize=None)
def build_mesh(n: int, level: int) -> TriangulatedSphere:
    """Cross-polytope boundary in R^{n+1} refined ``level`` times (cached)."""
    if n not in LEVEL_CAP:
        raise InputError("sphere dimension must be 1, 2 or 3", n=n)
    if level < 0 or level > LEVEL_CAP[n]:
        raise InputError(f"mesh level must be in [0, {LEVEL_CAP[n]}] for n={n}", level=level)
    if level == 0:
        return _base(n)
    return refine(build_mesh(n, level - 1))


@dataclass
class MeshReport:
    orientation_violations: list = field(default_factory=list)
    nonmanifold_faces: list = field(default_factory=list)
    off_sphere: list = field(default_factory=list)
    duplicate_vertices: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.orientation_violations or self.nonmanifold_faces
                    or self.off_sphere or self.duplicate_vertices)

    def __bool__(self):
        # truthy when something is wrong, so `assert not validate_mesh(m)` reads naturally
        return not self.ok


def validate_mesh(mesh: TriangulatedSphere, tol: float = 1e-12) -> MeshReport:
    rep = MeshReport()
    norms = np.linalg.norm(mesh.vertices, axis=1)
    rep.off_sphere = np.flatnonzero(np.abs(norms - 1.0) > tol).tolist()
    rep.orientation_violations = np.flatnonzero(mesh.simplex_dets() <= 0).tolist()
    k = mesh.n + 1
    faces = np.concatenate([np.delete(mesh.simplices, i, axis=1) for i in range(k)])
    uniq, counts = np.unique(np.sort(faces, axis=1), axis=0, return_counts=True)
    bad = counts != 2
    rep.nonmanifold_faces = [(tuple(f), int(c)) for f, c in zip(uniq[bad].tolist(), counts[bad])]
    rep.duplicate_vertices = sorted(cKDTree(mesh.vertices).query_pairs(1e-9))
    return rep
