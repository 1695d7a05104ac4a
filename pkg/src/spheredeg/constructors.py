"""Explicit sphere maps of prescribed degree.

For m >= 0 the field on R^{n+1} is ``(x_1, ..., x_{n-1}, P_m, Q_m)`` with
``P_m + i Q_m = (x_n + i x_{n+1})^m``; for m < 0 the first coordinate is
negated and |m| is used. On S^1 there is no leading block, so negative
degrees use the conjugate power ``(P_|m|, -Q_|m|)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import comb

import numpy as np

from .degree import SphereMapEval, degree
from .errors import CrossCheckError, InputError
from .fields import Monomial, PolyField, permute_coordinates, restrict_field
from .mesh import build_mesh


def _power_terms(m, offset, dim):
    """Monomials of Re and Im of (x_a + i x_b)^m with a = offset, b = offset + 1."""
    re, im = [], []
    for k in range(m + 1):
        e = [0] * dim
        e[offset] = m - k
        e[offset + 1] = k
        # i^k cycles through 1, i, -1, -i
        c = comb(m, k)
        if k % 4 == 0:
            re.append(Monomial(tuple(e), c))
        elif k % 4 == 1:
            im.append(Monomial(tuple(e), c))
        elif k % 4 == 2:
            re.append(Monomial(tuple(e), -c))
        else:
            im.append(Monomial(tuple(e), -c))
    return re, im


def power_pair(m: int) -> PolyField:
    """The planar field (Re (x1 + i x2)^m, Im (x1 + i x2)^m)."""
    if int(m) != m or m < 0:
        raise InputError("power_pair needs an integer m >= 0", m=m)
    re, im = _power_terms(int(m), 0, 2)
    return PolyField(2, [re, im])


@dataclass(frozen=True)
class AlphaSpec:
    n: int
    m: int
    realized_field: PolyField

    def sphere_map(self) -> SphereMapEval:
        return SphereMapEval(self.realized_field)

    def degree(self, seed: int = 0, level: int | None = None):
        return degree(self.sphere_map(), seed=seed, level=level)

    def min_norm_on_sphere(self, level: int = 3) -> float:
        mesh = build_mesh(min(self.n, 3), level) if self.n <= 3 else None
        if mesh is None:
            raise InputError("min-norm scan is only available for n <= 3")
        return float(np.linalg.norm(self.realized_field.evaluate(mesh.vertices), axis=1).min())


def build_alpha(n: int, m: int) -> AlphaSpec:
    if n < 1:
        raise InputError("sphere dimension must be >= 1", n=n)
    dim = n + 1
    k = abs(int(m))
    re, im = _power_terms(k, n - 1, dim)
    comps = []
    for j in range(n - 1):
        e = [0] * dim
        e[j] = 1
        comps.append([Monomial(tuple(e), -1.0 if (m < 0 and j == 0) else 1.0)])
    if m < 0 and n == 1:
        im = [Monomial(t.exponents, -t.coeff) for t in im]
    comps += [re, im]
    return AlphaSpec(n, int(m), PolyField(dim, comps))


def degree_table(n_max: int, m_min: int, m_max: int, n_min: int = 1, seed: int = 0) -> list[dict]:
    """Degree of every alpha map for n in [n_min, n_max], m in [m_min, m_max].

    Any row whose computed degree differs from m raises CrossCheckError.
    """
    if n_max > 3:
        raise InputError("degree_table supports n <= 3", n_max=n_max)
    if m_min > m_max or n_min > n_max:
        raise InputError("empty range", n=(n_min, n_max), m=(m_min, m_max))
    rows = []
    for n in range(n_min, n_max + 1):
        for m in range(m_min, m_max + 1):
            rep = build_alpha(n, m).degree(seed=seed)
            row = {"n": n, "m": m, "degree": rep.degree,
                   "method": "+".join(c["method"] for c in rep.checks), "mesh_level": rep.mesh_level}
            if rep.degree != m:
                raise CrossCheckError("constructed map has the wrong degree", row=row)
            rows.append(row)
    return rows


def table_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["n", "m", "degree", "method", "mesh_level"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def suspension_consistency(n: int, m: int, radius: float = 1.0, seed: int = 0) -> dict:
    """Check that alpha_n^m is the suspension of its {x_1 = 0} restriction.

    The first coordinate is rotated to the last slot by a cyclic coordinate
    permutation; conjugation keeps the index, which is asserted. The rotated
    field is then restricted to {last = 0} and fed to the suspension check
    with sign +1 (m >= 0) or -1 (m < 0).
    """
    from .index import check_lemma21, index_at

    if n < 2:
        raise InputError("suspension consistency needs n >= 2", n=n)
    spec = build_alpha(n, m)
    dim = n + 1
    perm = list(range(1, dim)) + [0]
    parity = -1 if n % 2 else 1
    rotated = permute_coordinates(spec.realized_field, perm)
    direct = index_at(spec.realized_field, np.zeros(dim), radius, seed=seed, require_zero=False).index
    rot_index = index_at(rotated, np.zeros(dim), radius, seed=seed, require_zero=False).index
    if rot_index != direct:
        raise CrossCheckError("index changed under coordinate conjugation", direct=direct,
                              rotated=rot_index, parity=parity)
    sign = 1 if m >= 0 else -1
    base = restrict_field(rotated)
    rep = check_lemma21(base, sign, radius, seed=seed)
    return {
        "n": n, "m": m, "permutation_parity": parity, "direct_index": direct,
        "base_index": rep.base_index, "suspended_index": rep.suspended_index,
        "sign": sign, "relation_holds": rep.relation_holds and rep.suspended_index == direct,
    }
