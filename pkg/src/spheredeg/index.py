"""Indices of isolated zeros and the suspension sign relations.

The index of V at an isolated zero z is the degree of x -> V(z + r x)/|.|
on the unit sphere. :func:`check_lemma21` compares the index of a planar or
spatial field with that of its suspension ``(V, +-x_{n+1})``;
:func:`verify_homotopy_nonvanishing` scans the straight-line homotopy
between two fields on a sphere for near-zeros.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .degree import DegreeReport, SphereMapEval, degree
from .errors import DimensionError, InputError, NotAZeroError
from .fields import FieldEval, PolyField, eval_field, restrict_field, suspend_field
from .mesh import build_mesh

ZERO_TOL = 1e-9
DEFAULT_RADIUS = 0.5


@dataclass
class IndexReport:
    zero: list
    radius: float
    index: int
    degree_report: DegreeReport

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Lemma21Report:
    base_index: int
    suspended_index: int
    sign: int
    relation_holds: bool
    hypothesis_scan: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class HomotopyReport:
    min_norm: float
    witness_point: list
    witness_t: float
    radius: float
    grid: int

    def to_dict(self) -> dict:
        return asdict(self)


def index_at(field: FieldEval, zero, radius: float = DEFAULT_RADIUS, seed: int = 0,
             level: int | None = None, require_zero: bool = True) -> IndexReport:
    """Index of ``field`` at ``zero`` as the degree on the sphere of ``radius``.

    With ``require_zero=False`` the center need not be a zero; the result is
    then the total index inside the ball (0 for a field without zeros).
    """
    z = np.asarray(zero, dtype=np.float64)
    if z.shape != (field.dim,):
        raise DimensionError(f"zero must have length {field.dim}", zero=z)
    val = float(np.linalg.norm(eval_field(field, z)))
    if require_zero and val >= ZERO_TOL:
        raise NotAZeroError("declared point is not a zero of the field", point=z, norm=val)
    rep = degree(SphereMapEval(field, tuple(z), radius), seed=seed, level=level)
    return IndexReport(z.tolist(), float(radius), rep.degree, rep)


def verify_homotopy_nonvanishing(v: FieldEval, w: FieldEval, radius: float, grid: int = 20,
                                 center=None, level: int = 4) -> HomotopyReport:
    """Minimum of |(1-t) V + t W| over sphere-mesh vertices and t in {0, 1/grid, ..., 1}."""
    if v.dim != w.dim or v.dim_out != w.dim_out:
        raise DimensionError("V and W must have the same dimensions")
    n = v.dim - 1
    c = np.zeros(v.dim) if center is None else np.asarray(center, dtype=np.float64)
    pts = c + radius * build_mesh(n, level).vertices
    fv, fw = v.evaluate(pts), w.evaluate(pts)
    best = (np.inf, None, None)
    for t in np.linspace(0.0, 1.0, grid + 1):
        norms = np.linalg.norm((1 - t) * fv + t * fw, axis=1)
        i = int(np.argmin(norms))
        if norms[i] < best[0]:
            best = (float(norms[i]), pts[i].tolist(), float(t))
    return HomotopyReport(best[0], best[1], best[2], float(radius), int(grid))


def _sign_scan(field: FieldEval, radius: float, level: int = 3, tol: float = 1e-12) -> dict:
    """Signs of x_{n+1} V_{n+1}(x) on sphere-mesh vertices off the hyperplane."""
    n = field.dim - 1
    pts = radius * build_mesh(min(n, 3), level).vertices if n <= 3 else None
    if pts is None:
        return {"checked": 0, "positive": 0, "negative": 0}
    off = np.abs(pts[:, -1]) > tol
    prod = pts[off, -1] * field.evaluate(pts[off])[:, -1]
    return {"checked": int(off.sum()), "positive": int((prod > 0).sum()), "negative": int((prod < 0).sum())}


def check_lemma21(base: PolyField, sign: int, radius: float = DEFAULT_RADIUS, seed: int = 0) -> Lemma21Report:
    """Index of ``base`` at 0 against the index of its suspension with ``sign``."""
    w = suspend_field(base, sign)
    zero = np.zeros(base.dim)
    base_idx = index_at(base, zero, radius, seed=seed, require_zero=False).index
    susp_idx = index_at(w, np.zeros(w.dim), radius, seed=seed, require_zero=False).index
    return Lemma21Report(base_idx, susp_idx, sign, susp_idx == sign * base_idx, _sign_scan(w, radius))


def lemma21_for_field(field: PolyField, radius: float = DEFAULT_RADIUS, seed: int = 0) -> Lemma21Report:
    """Sign relation for a field tangent to {x_{n+1} = 0} that is not itself a suspension.

    The sign is read off a grid scan of x_{n+1} V_{n+1}(x); a scan with both
    signs present leaves the hypothesis unmet and is rejected.
    """
    base = restrict_field(field)
    scan = _sign_scan(field, radius)
    if scan["positive"] and scan["negative"]:
        raise InputError("x_{n+1} V_{n+1} changes sign; neither sign case applies", scan=scan)
    if not (scan["positive"] or scan["negative"]):
        raise InputError("x_{n+1} V_{n+1} vanishes on every scanned point", scan=scan)
    sign = 1 if scan["positive"] else -1
    base_idx = index_at(base, np.zeros(base.dim), radius, seed=seed, require_zero=False).index
    idx = index_at(field, np.zeros(field.dim), radius, seed=seed, require_zero=False).index
    return Lemma21Report(base_idx, idx, sign, idx == sign * base_idx, scan)
