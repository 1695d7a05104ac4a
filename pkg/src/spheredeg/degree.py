"""Topological degree of x -> V(c + r x) / |V(c + r x)| on the unit sphere.

Two independent routes:

* :func:`winding_number` (n = 1) accumulates shortest-arc angle increments
  of the image curve.
* :func:`pl_degree` (n = 1, 2, 3) replaces the map by its piecewise-linear
  interpolant on a sphere mesh and counts, with orientation signs, the image
  simplices whose cone contains a random generic target.

:func:`degree` runs both (n = 1) or PL at two consecutive mesh levels
(n >= 2) and refuses to return a value the routes disagree on.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .errors import CrossCheckError, DimensionError, InputError, NumericalError, VanishingFieldError
from .fields import FieldEval
from .mesh import LEVEL_CAP, TriangulatedSphere, build_mesh

MIN_NORM_FLOOR = 1e-10
EPS_COVER = 1e-9
HEMISPHERE_DIAMETER = 0.5
MAX_TARGET_RETRIES = 50
DEFAULT_START_LEVEL = {1: 2, 2: 2, 3: 2}


@dataclass(frozen=True)
class SphereMapEval:
    """The normalized map of ``field`` on the sphere of ``radius`` about ``center``."""

    field: FieldEval
    center: tuple = None
    radius: float = 1.0
    min_norm_floor: float = MIN_NORM_FLOOR

    def __post_init__(self):
        d = self.field.dim
        if self.field.dim_out != d:
            raise DimensionError("sphere maps need a vector field with dim_out == dim")
        c = np.zeros(d) if self.center is None else np.asarray(self.center, dtype=np.float64)
        if c.shape != (d,):
            raise DimensionError(f"center must have length {d}", center=c)
        if not self.radius > 0:
            raise InputError("radius must be positive", radius=self.radius)
        object.__setattr__(self, "center", tuple(float(v) for v in c))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def n(self) -> int:
        return self.field.dim - 1

    def raw(self, unit_points) -> np.ndarray:
        pts = np.asarray(self.center) + self.radius * np.asarray(unit_points, dtype=np.float64)
        return self.field.evaluate(pts)

    def __call__(self, unit_points):
        """Return (normalized images, min norm); abort below the floor."""
        vals = self.raw(unit_points)
        norms = np.linalg.norm(vals, axis=1)
        i = int(np.argmin(norms))
        if norms[i] <= self.min_norm_floor:
            witness = np.asarray(self.center) + self.radius * np.asarray(unit_points)[i]
            raise VanishingFieldError(
                "field (numerically) vanishes on the test sphere; shrink the radius",
                point=witness, norm=float(norms[i]),
            )
        return vals / norms[:, None], float(norms[i])


@dataclass
class DegreeReport:
    degree: int
    method: str
    mesh_level: Optional[int] = None
    target_retries: int = 0
    min_image_norm: float = float("nan")
    seed: Optional[int] = None
    samples: Optional[int] = None
    checks: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def winding_number(smap: SphereMapEval, samples: int = 64, max_doublings: int = 4) -> int:
    return _winding(smap, samples, max_doublings).degree


def _winding(smap: SphereMapEval, samples: int = 64, max_doublings: int = 4) -> DegreeReport:
    if smap.n != 1:
        raise DimensionError("winding number needs a map of S^1", n=smap.n)
    if samples < 16:
        raise InputError("at least 16 samples are required", samples=samples)
    n = samples
    for _ in range(max_doublings + 1):
        theta = 2 * np.pi * np.arange(n) / n
        img, min_norm = smap(np.stack([np.cos(theta), np.sin(theta)], 1))
        ang = np.arctan2(img[:, 1], img[:, 0])
        inc = np.diff(np.append(ang, ang[0]))
        inc = (inc + np.pi) % (2 * np.pi) - np.pi
        if np.abs(inc).max() < np.pi / 2:
            w = inc.sum() / (2 * np.pi)
            if abs(w - round(w)) < 0.05:
                return DegreeReport(int(round(w)), "winding", target_retries=0,
                                    min_image_norm=min_norm, samples=n)
        n *= 2
    raise NumericalError("winding number did not converge", samples=n // 2)


def _unit(rng, k):
    p = rng.standard_normal(k)
    return p / np.linalg.norm(p)


def pl_degree(smap: SphereMapEval, mesh: TriangulatedSphere | None = None, seed: int = 0,
              max_level: int | None = None, backend: str | None = None) -> DegreeReport:
    """Piecewise-linear signed-coverage degree.

    The mesh is refined (uniformly, via the cached level meshes) until every
    image simplex has chordal diameter below 0.5; a target drawn from
    ``numpy.random.default_rng(seed)`` is then redrawn while it lies within
    ``EPS_COVER`` (in conic coordinates) of some image simplex boundary.
    """
    n = smap.n
    if n not in LEVEL_CAP:
        raise DimensionError("PL degree supports n = 1, 2, 3", n=n)
    if mesh is None:
        mesh = build_mesh(n, DEFAULT_START_LEVEL[n])
    if mesh.n != n:
        raise DimensionError("mesh dimension does not match map", mesh_n=mesh.n, n=n)
    cap = LEVEL_CAP[n] if max_level is None else min(max_level, LEVEL_CAP[n])
    while True:
        img, min_norm = smap(mesh.vertices)
        images = img[mesh.simplices]
        diam = kernels.max_simplex_diameter(images, backend=backend)
        if diam < HEMISPHERE_DIAMETER:
            break
        if mesh.level >= cap:
            raise NumericalError(
                "refinement cap reached with oversized image simplices",
                level=mesh.level, diameter=diam,
            )
        mesh = build_mesh(n, mesh.level + 1)

    rng = np.random.default_rng(seed)
    for retry in range(MAX_TARGET_RETRIES + 1):
        p = _unit(rng, n + 1)
        deg, _, bad, first = kernels.signed_coverage(images, p, EPS_COVER, backend=backend)
        if bad == 0:
            return DegreeReport(deg, "pl", mesh.level, retry, min_norm, seed)
    raise NumericalError(
        "no generic target found", retries=MAX_TARGET_RETRIES, simplex=int(first),
        vertices=mesh.simplices[first], target=p,
    )


def degree(smap: SphereMapEval, seed: int = 0, level: int | None = None,
           samples: int = 64, backend: str | None = None) -> DegreeReport:
    """Cross-checked degree: winding vs PL for n = 1, PL at levels L and L+1 otherwise."""
    n = smap.n
    if n not in LEVEL_CAP:
        raise DimensionError("degree supports n = 1, 2, 3", n=n)
    start = DEFAULT_START_LEVEL[n] if level is None else level
    first = pl_degree(smap, build_mesh(n, start), seed, max_level=LEVEL_CAP[n] - 1, backend=backend)
    if n == 1:
        other = _winding(smap, samples)
        label = "winding"
    else:
        other = pl_degree(smap, build_mesh(n, first.mesh_level + 1), seed, backend=backend)
        label = f"pl@{other.mesh_level}"
    first.checks = [
        {"method": f"pl@{first.mesh_level}", "degree": first.degree},
        {"method": label, "degree": other.degree},
    ]
    if other.degree != first.degree:
        raise CrossCheckError(
            "degree methods disagree", first=first.checks[0], second=first.checks[1],
        )
    return first
