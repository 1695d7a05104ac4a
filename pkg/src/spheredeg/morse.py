"""Index sums on manifolds with boundary, and the doubling construction.

A scenario is a region of R^2 or R^3 cut out by round boundary spheres (a
ball, or a ball with holes), a polynomial field on it and its declared
interior zeros. :func:`morse_check` adds the interior indices to the indices
of the tangential field on the inward-pointing part of the boundary and
compares with the Euler characteristic. :func:`double_check` does the
bookkeeping for the doubled manifold: each boundary zero of the tangential
field contributes +index on the inward part and -index on the outward part,
and the total must be 2 chi(M) - chi(boundary).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .degree import SphereMapEval, degree
from .errors import CrossCheckError, InputError, ScenarioError, VanishingFieldError
from .fields import FuncField, PolyField
from .index import index_at
from .mesh import build_mesh

NU_TOL = 1e-9
ANGULAR_SAMPLES = 720
SCREEN_FLOOR = 1e-6
TANGENT_ZERO_TOL = 1e-10
SIGN_CONVENTION = "doubled index = +tangential index on inward boundary, -tangential index on outward boundary"


@dataclass(frozen=True)
class BoundarySphere:
    center: tuple
    radius: float
    side: str = "encloses"

    def __post_init__(self):
        if self.side not in ("encloses", "excludes"):
            raise InputError("boundary side must be 'encloses' or 'excludes'", side=self.side)
        if not self.radius > 0:
            raise InputError("boundary radius must be positive", radius=self.radius)
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def orientation(self) -> int:
        """+1 when M lies inside the sphere, -1 when outside."""
        return 1 if self.side == "encloses" else -1

    def outward_normal(self, x) -> np.ndarray:
        u = (np.asarray(x) - np.asarray(self.center)) / self.radius
        return self.orientation * u

    def signed_distance(self, x) -> np.ndarray:
        """Distance into M (positive inside M)."""
        r = np.linalg.norm(np.asarray(x) - np.asarray(self.center), axis=-1)
        return self.orientation * (self.radius - r)


@dataclass(frozen=True)
class MorseScenario:
    dim: int
    boundaries: tuple
    field: PolyField
    zeros: tuple
    chi_M: int
    chi_boundary: int
    name: str = ""
    boundary_seeds: tuple = ()

    @classmethod
    def from_dict(cls, data: dict, name: str = "") -> MorseScenario:
        try:
            dim = int(data["dim"])
            bounds = tuple(BoundarySphere(tuple(b["center"]), b["radius"], b.get("side", "encloses"))
                           for b in data["boundaries"])
            fld = PolyField.from_dict(data["field"])
            zeros = tuple(tuple(float(c) for c in z) for z in data.get("zeros", []))
            seeds = tuple(tuple(float(c) for c in z) for z in data.get("boundary_seeds", []))
            sc = cls(dim, bounds, fld, zeros, int(data["chi_M"]), int(data["chi_boundary"]),
                     data.get("name", name), seeds)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed scenario: {exc}") from exc
        sc._check_shapes()
        return sc

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "dim": self.dim,
            "boundaries": [{"center": list(b.center), "radius": b.radius, "side": b.side} for b in self.boundaries],
            "field": self.field.to_dict(),
            "zeros": [list(z) for z in self.zeros],
            "chi_M": self.chi_M,
            "chi_boundary": self.chi_boundary,
        }
        if self.boundary_seeds:
            out["boundary_seeds"] = [list(s) for s in self.boundary_seeds]
        return out

    def _check_shapes(self):
        if self.dim not in (2, 3):
            raise ScenarioError("scenarios live in R^2 or R^3", dim=self.dim)
        if self.field.dim != self.dim or self.field.dim_out != self.dim:
            raise ScenarioError("field dimension does not match scenario", dim=self.dim)
        if not any(b.side == "encloses" for b in self.boundaries):
            raise ScenarioError("a compact region needs an enclosing boundary")
        for b in self.boundaries:
            if len(b.center) != self.dim:
                raise ScenarioError("boundary center has the wrong length", center=b.center)
        for z in self.zeros:
            if len(z) != self.dim:
                raise ScenarioError("zero has the wrong length", zero=z)

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(points)
        inside = np.ones(len(pts), dtype=bool)
        for b in self.boundaries:
            inside &= b.signed_distance(pts) > 0
        return inside

    def distance_to_boundary(self, x) -> float:
        return float(min(abs(b.signed_distance(np.asarray(x))) for b in self.boundaries))


def load_scenario(path) -> MorseScenario:
    p = Path(path)
    if not p.exists():
        bundled = resources.files("spheredeg") / "scenarios" / p.name
        if not bundled.is_file():
            raise InputError("scenario file not found", path=str(path))
        text, name = bundled.read_text(), p.stem
    else:
        text, name = p.read_text(), p.stem
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"scenario file is not valid JSON: {exc}") from exc
    return MorseScenario.from_dict(data, name)


def bundled_scenarios() -> list[MorseScenario]:
    folder = resources.files("spheredeg") / "scenarios"
    names = sorted(f.name for f in folder.iterdir() if f.name.endswith(".json"))
    return [load_scenario(n) for n in names]


# -- collar profile ------------------------------------------------------------


def _step_core(u):
    """sigma(u) = e(u) / (e(u) + e(1-u)), e(u) = exp(-1/u), on 0 < u < 1."""
    return 1.0 / (1.0 + np.exp(1.0 / u - 1.0 / (1.0 - u)))


def smooth_step(s):
    """Collar profile h(s) = sigma(2 s); h(0) = 0, h > 0 on (0, 1/2], h = 1 on [1/2, 1]."""
    arr = np.asarray(s, dtype=np.float64)
    if np.any(arr < 0) or np.any(arr > 1) or np.any(np.isnan(arr)):
        raise InputError("smooth_step is defined on [0, 1]")
    u = 2.0 * arr
    out = np.where(u >= 1.0, 1.0, 0.0)
    mid = (u > 0) & (u < 1)
    with np.errstate(over="ignore"):
        out = np.where(mid, _step_core(np.where(mid, u, 0.5)), out)
    return float(out) if np.ndim(s) == 0 else out


def log_smooth_step(s):
    """log h(s); finite exactly where h(s) > 0, including where h underflows."""
    arr = np.asarray(s, dtype=np.float64)
    if np.any(arr < 0) or np.any(arr > 1):
        raise InputError("smooth_step is defined on [0, 1]")
    u = 2.0 * arr
    mid = (u > 0) & (u < 1)
    um = np.where(mid, u, 0.5)
    val = -np.logaddexp(0.0, 1.0 / um - 1.0 / (1.0 - um))
    out = np.where(u >= 1.0, 0.0, np.where(mid, val, -np.inf))
    return float(out) if np.ndim(s) == 0 else out


def collar_profile_report(grid: int = 10_000) -> dict:
    """Check the collar-profile invariants of :func:`smooth_step` on a uniform grid."""
    s = np.linspace(0.0, 1.0, grid + 1)
    h = smooth_step(s)
    logh = log_smooth_step(s)
    left = (s > 0) & (s <= 0.5)
    right = s >= 0.5
    step = 1e-3
    # one-sided difference quotients of h' on either side of 1/2
    hp = lambda x: (smooth_step(x + 1e-5) - smooth_step(x - 1e-5)) / 2e-5  # noqa: E731
    jump = abs(float(hp(0.5 - step)) - float(hp(0.5 + step)))
    return {
        "h0_is_zero": bool(h[0] == 0.0),
        "positive_on_left": bool(np.all(np.isfinite(logh[left]))),
        "one_on_right": bool(np.all(h[right] == 1.0)),
        "monotone": bool(np.all(np.diff(h) >= 0)),
        "derivative_jump_at_half": jump,
        "smooth_at_half": jump < 1e-6,
    }


# -- boundary analysis ---------------------------------------------------------


@dataclass
class BoundaryZero:
    boundary: int
    point: list
    index: int
    side: str
    angle: float | None = None
    chart_radius: float | None = None


@dataclass
class BoundaryAnalysis:
    zeros: list = field(default_factory=list)
    degenerate: list = field(default_factory=list)
    interface_samples: int = 0

    def inward(self):
        return [z for z in self.zeros if z.side == "inward"]


@dataclass
class BoundarySigns:
    boundary: int
    points: np.ndarray
    nu: np.ndarray
    angles: np.ndarray | None = None


def _circle_points(b: BoundarySphere, theta):
    return np.asarray(b.center) + b.radius * np.stack([np.cos(theta), np.sin(theta)], -1)


def _sphere_samples(b: BoundarySphere, level: int = 4):
    mesh = build_mesh(2, level)
    return mesh, np.asarray(b.center) + b.radius * mesh.vertices


def _nu(scenario, b, pts):
    return np.einsum("ij,ij->i", scenario.field.evaluate(pts), b.outward_normal(pts))


def classify_boundary(scenario: MorseScenario, samples: int = ANGULAR_SAMPLES) -> list[BoundarySigns]:
    """Sign of <V, outward normal> at boundary samples.

    Isolated samples with |nu| < 1e-9 (where the field crosses from pointing
    in to pointing out) are allowed; a sample whose neighbours all share
    |nu| < 1e-9 means the field is tangent along a stretch of boundary and
    the scenario is rejected.
    """
    out = []
    for k, b in enumerate(scenario.boundaries):
        if scenario.dim == 2:
            theta = 2 * np.pi * np.arange(samples) / samples
            pts = _circle_points(b, theta)
            vals = scenario.field.evaluate(pts)
            nu = np.einsum("ij,ij->i", vals, b.outward_normal(pts))
            small = np.abs(nu) < NU_TOL
            flat = small & np.roll(small, 1) & np.roll(small, -1)
            nbr = None
        else:
            mesh, pts = _sphere_samples(b)
            theta = None
            vals = scenario.field.evaluate(pts)
            nu = np.einsum("ij,ij->i", vals, b.outward_normal(pts))
            small = np.abs(nu) < NU_TOL
            nbr = mesh.neighbors()
            flat = np.array([small[i] and bool(np.all(small[nbr[i]])) for i in range(len(pts))])
        norms = np.linalg.norm(vals, axis=1)
        if norms.min() < NU_TOL:
            i = int(np.argmin(norms))
            raise VanishingFieldError("field vanishes on the boundary", boundary=k, point=pts[i])
        if flat.any():
            i = int(np.flatnonzero(flat)[0])
            raise ScenarioError("field is tangent to the boundary along a non-isolated set",
                                boundary=k, point=pts[i])
        out.append(BoundarySigns(k, pts, nu, theta))
    return out


def tangential_field(scenario: MorseScenario, boundary: int | BoundarySphere):
    """Tangential part of the field on one boundary sphere.

    In R^2 the result is the scalar function g(theta) = <V, t(theta)> with
    t = (-sin, cos); in R^3 it is x -> V(x) - <V(x), n> n for points x on the
    sphere.
    """
    b = scenario.boundaries[boundary] if isinstance(boundary, int) else boundary
    fld = scenario.field
    if scenario.dim == 2:
        def g(theta):
            th = np.atleast_1d(np.asarray(theta, dtype=np.float64))
            vals = fld.evaluate(_circle_points(b, th))
            res = -np.sin(th) * vals[:, 0] + np.cos(th) * vals[:, 1]
            return float(res[0]) if np.ndim(theta) == 0 else res
        return g

    def t_field(x):
        pts = np.atleast_2d(x)
        vals = fld.evaluate(pts)
        nrm = (pts - np.asarray(b.center)) / b.radius
        return vals - np.einsum("ij,ij->i", vals, nrm)[:, None] * nrm
    return t_field


def _side_at(scenario, b, k, x_of, param):
    """'inward' / 'outward' from the sign of nu at (or just beside) a boundary point."""
    nu0 = float(_nu(scenario, b, x_of(param))[0])
    if abs(nu0) > NU_TOL:
        return "inward" if nu0 < 0 else "outward"
    pair = [float(_nu(scenario, b, x_of(param + d))[0]) for d in (-1e-3, 1e-3)]
    if pair[0] * pair[1] <= 0:
        raise ScenarioError("tangency with mixed inward/outward neighbourhood", boundary=k,
                            point=x_of(param)[0])
    return "inward" if pair[0] < 0 else "outward"


def _circle_zeros(scenario, k, b, samples):
    g = tangential_field(scenario, k)
    theta = 2 * np.pi * np.arange(samples) / samples
    vals = g(theta)
    scale = float(np.abs(vals).max())
    if scale < TANGENT_ZERO_TOL:
        return None
    sgn = np.where(np.abs(vals) <= 1e-12 * scale, 0, np.sign(vals)).astype(int)
    nz = np.flatnonzero(sgn)
    gaps = np.diff(np.append(nz, nz[0] + samples))
    if gaps.max() > 3:
        i = int(nz[np.argmax(gaps)])
        raise ScenarioError("tangential field has non-isolated zeros", boundary=k,
                            angle=float(theta[(i + 1) % samples]))
    found = []
    for j, i in enumerate(nz):
        i2 = nz[(j + 1) % len(nz)]
        if sgn[i] == sgn[i2]:
            continue
        a = theta[i]
        bnd = theta[i2] + (2 * np.pi if i2 <= i else 0.0)
        th = brentq(g, a, bnd, xtol=1e-13) % (2 * np.pi)
        found.append((th, 1 if sgn[i] < 0 else -1))
    zeros = []
    x_of = lambda t: _circle_points(b, np.atleast_1d(t))  # noqa: E731
    for th, idx in sorted(found):
        side = _side_at(scenario, b, k, x_of, th)
        zeros.append(BoundaryZero(k, x_of(th)[0].tolist(), idx, side, angle=float(th)))
    return zeros


def _frame(p):
    """Orthonormal tangent basis (e1, e2) at unit vector p in R^3."""
    a = np.eye(3)[int(np.argmin(np.abs(p)))]
    e1 = a - np.dot(a, p) * p
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(p, e1)
    return e1, e2


def _stereo(p, y):
    """Inverse stereographic chart from -p: y in R^2 -> unit sphere, with Jacobian."""
    e1, e2 = _frame(p)
    y = np.atleast_2d(y)
    r2 = (y ** 2).sum(1)
    q = 1.0 + r2
    a = (1.0 - r2)[:, None] * p + 2.0 * (y[:, :1] * e1 + y[:, 1:2] * e2)
    x = a / q[:, None]
    jac = np.empty((len(y), 3, 2))
    for kk, ek in enumerate((e1, e2)):
        da = -2.0 * y[:, kk:kk + 1] * p + 2.0 * ek
        jac[:, :, kk] = da / q[:, None] - a * (2.0 * y[:, kk:kk + 1]) / (q ** 2)[:, None]
    return x, jac


def _chart_inverse(p, x):
    e1, e2 = _frame(p)
    x = np.atleast_2d(x)
    den = 1.0 + x @ p
    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.stack([x @ e1, x @ e2], 1) / den[:, None]
    # the antipode of p sits at infinity in this chart
    y[den < 1e-12] = np.inf
    return y


def _chart_tangent(scenario, b, p, y, radius_scale=None):
    x, jac = _stereo(p, y)
    r = b.radius if radius_scale is None else radius_scale
    pts = np.asarray(b.center) + (r if np.ndim(r) == 0 else r[:, None]) * x
    vals = scenario.field.evaluate(pts)
    jtj = np.einsum("nki,nkj->nij", jac, jac)
    jtv = np.einsum("nki,nk->ni", jac, vals)
    return np.linalg.solve(jtj, jtv[..., None])[..., 0], vals, x


def chart_tangential_field(scenario, boundary: int, p) -> FuncField:
    """Tangential field pushed into the stereographic chart centred at unit vector p."""
    b = scenario.boundaries[boundary]
    p = np.asarray(p, dtype=np.float64)
    return FuncField(lambda y: _chart_tangent(scenario, b, p, y)[0], 2)


def _newton_on_sphere(scenario, b, p, iters=60):
    for _ in range(iters):
        f0 = _chart_tangent(scenario, b, p, np.zeros((1, 2)))[0][0]
        if np.linalg.norm(f0) < 1e-14:
            return p
        h = 1e-7
        ys = np.array([[h, 0], [-h, 0], [0, h], [0, -h]])
        fs = _chart_tangent(scenario, b, p, ys)[0]
        jac = np.stack([(fs[0] - fs[1]) / (2 * h), (fs[2] - fs[3]) / (2 * h)], 1)
        try:
            step = np.linalg.solve(jac, -f0)
        except np.linalg.LinAlgError:
            return None
        if np.linalg.norm(step) > 0.5:
            step *= 0.5 / np.linalg.norm(step)
        p = _stereo(p, step[None, :])[0][0]
        p /= np.linalg.norm(p)
        if np.linalg.norm(step) < 1e-15:
            break
    return p


def _sphere_zeros(scenario, k, b, seed):
    mesh, pts = _sphere_samples(b)
    t_field = tangential_field(scenario, k)
    tn = np.linalg.norm(t_field(pts), axis=1)
    if tn.max() < TANGENT_ZERO_TOL:
        return None
    nbr = mesh.neighbors()
    cand = [mesh.vertices[i] for i in range(len(pts)) if tn[i] <= tn[nbr[i]].min()]
    for s in scenario.boundary_seeds:
        u = np.asarray(s) - np.asarray(b.center)
        if abs(np.linalg.norm(u) - b.radius) < 1e-6 * max(1.0, b.radius):
            cand.append(u / np.linalg.norm(u))
    roots = []
    for c in cand:
        p = _newton_on_sphere(scenario, b, np.asarray(c, dtype=np.float64))
        if p is None:
            continue
        x = np.asarray(b.center) + b.radius * p
        if np.linalg.norm(t_field(x)) > TANGENT_ZERO_TOL:
            continue
        if any(np.linalg.norm(p - q) < 1e-6 for q in roots):
            continue
        roots.append(p)
    zeros = []
    for i, p in enumerate(roots):
        others = [q for j, q in enumerate(roots) if j != i]
        gap = min((float(np.linalg.norm(_chart_inverse(p, q)[0])) for q in others), default=np.inf)
        rad = min(0.1, 0.4 * gap)
        fld = chart_tangential_field(scenario, k, p)
        idx = index_at(fld, np.zeros(2), rad, seed=seed).index
        side = _side_at_point(scenario, b, k, p)
        zeros.append(BoundaryZero(k, (np.asarray(b.center) + b.radius * p).tolist(), idx, side,
                                  chart_radius=rad))
    return zeros


def _side_at_point(scenario, b, k, p):
    x = np.asarray(b.center) + b.radius * p
    nu0 = float(_nu(scenario, b, x[None, :])[0])
    if abs(nu0) > NU_TOL:
        return "inward" if nu0 < 0 else "outward"
    raise ScenarioError("tangential zero where the field is tangent", boundary=k, point=x)


def boundary_indices(scenario: MorseScenario, samples: int = ANGULAR_SAMPLES, seed: int = 0) -> BoundaryAnalysis:
    """Zeros of the tangential field on every boundary, with index and side.

    A boundary component whose tangential field vanishes identically is
    recorded in ``degenerate``; that is only admissible when the whole
    component is outward.
    """
    signs = classify_boundary(scenario, samples)
    res = BoundaryAnalysis()
    for k, b in enumerate(scenario.boundaries):
        zs = _circle_zeros(scenario, k, b, samples) if scenario.dim == 2 else _sphere_zeros(scenario, k, b, seed)
        nu = signs[k].nu
        res.interface_samples += int((np.abs(nu) < NU_TOL).sum())
        if zs is None:
            if np.any(nu < 0):
                raise ScenarioError(
                    "tangential field vanishes identically on a boundary with inward part", boundary=k)
            res.degenerate.append({"boundary": k, "side": "outward",
                                   "chi": 0 if scenario.dim == 2 else 2})
            continue
        chi_comp = 0 if scenario.dim == 2 else 2
        total = sum(z.index for z in zs)
        if total != chi_comp:
            raise CrossCheckError("tangential indices on a boundary component do not sum to its "
                                  "Euler characteristic (incomplete zero search)",
                                  boundary=k, total=total, expected=chi_comp)
        res.zeros.extend(zs)
    return res


# -- interior ------------------------------------------------------------------


def _zero_radius(scenario, z):
    others = [np.linalg.norm(np.subtract(z, w)) for w in scenario.zeros if tuple(w) != tuple(z)]
    return min([0.5, 0.5 * scenario.distance_to_boundary(z)] + [0.5 * d for d in others])


def _validate(scenario: MorseScenario):
    for z in scenario.zeros:
        if not scenario.contains(np.asarray(z))[0] or scenario.distance_to_boundary(z) <= 1e-6:
            raise ScenarioError("declared zero is not in the interior of M", zero=z)


def screen_undeclared_zeros(scenario: MorseScenario) -> dict:
    """Grid scan (spacing 0.02 * outer radius) of |V| away from declared zeros.

    A soundness check at grid resolution, not a proof of zero-freeness.
    """
    outer = [b for b in scenario.boundaries if b.side == "encloses"]
    rmax = max(b.radius for b in outer)
    hstep = 0.02 * rmax
    lo = np.min([np.asarray(b.center) - b.radius for b in outer], axis=0)
    hi = np.max([np.asarray(b.center) + b.radius for b in outer], axis=0)
    axes = [np.arange(lo[i], hi[i] + hstep / 2, hstep) for i in range(scenario.dim)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, scenario.dim)
    keep = scenario.contains(grid)
    for z in scenario.zeros:
        keep &= np.linalg.norm(grid - np.asarray(z), axis=1) > 0.5 * _zero_radius(scenario, z)
    pts = grid[keep]
    norms = np.linalg.norm(scenario.field.evaluate(pts), axis=1)
    i = int(np.argmin(norms))
    rep = {"grid_step": hstep, "points": int(len(pts)), "min_norm": float(norms[i]),
           "witness": pts[i].tolist(), "floor": SCREEN_FLOOR}
    if norms[i] < SCREEN_FLOOR:
        raise ScenarioError("possible undeclared zero", **rep)
    return rep


def interior_indices(scenario: MorseScenario, seed: int = 0) -> list[dict]:
    out = []
    for z in scenario.zeros:
        r = _zero_radius(scenario, z)
        rep = index_at(scenario.field, z, r, seed=seed)
        out.append({"zero": list(z), "radius": r, "index": rep.index})
    return out


def kronecker_check(scenario: MorseScenario, ind_v: int, seed: int = 0) -> dict:
    """Degree of V/|V| on each boundary sphere, signed by side, must equal Ind(V)."""
    per = []
    for b in scenario.boundaries:
        d = degree(SphereMapEval(scenario.field, b.center, b.radius), seed=seed).degree
        per.append(d)
    total = sum(b.orientation * d for b, d in zip(scenario.boundaries, per))
    if total != ind_v:
        raise CrossCheckError("boundary degrees disagree with the interior index sum",
                              boundary_degrees=per, total=total, ind_v=ind_v)
    return {"boundary_degrees": per, "total": total}


# -- doubling ------------------------------------------------------------------


def _default_collar(scenario):
    return 0.2 * min(b.radius for b in scenario.boundaries)


def collar_damped_field(scenario: MorseScenario, collar_width: float | None = None) -> FuncField:
    """V with its normal part scaled by h(distance / width) inside the collar.

    Tangent to the boundary and equal to V outside the collar.
    """
    w = _default_collar(scenario) if collar_width is None else float(collar_width)

    def damped(pts):
        vals = scenario.field.evaluate(pts)
        out = vals.copy()
        dists = np.stack([b.signed_distance(pts) for b in scenario.boundaries], 1)
        nearest = np.argmin(np.abs(dists), axis=1)
        for k, b in enumerate(scenario.boundaries):
            sel = (nearest == k) & (np.abs(dists[:, k]) < w)
            if not sel.any():
                continue
            n_in = -b.outward_normal(pts[sel])
            n_in /= np.linalg.norm(n_in, axis=1, keepdims=True)
            vv = np.einsum("ij,ij->i", vals[sel], n_in)
            s = np.clip(dists[sel, k] / w, 0.0, 1.0)
            out[sel] = vals[sel] + ((smooth_step(s) - 1.0) * vv)[:, None] * n_in
        return out

    return FuncField(damped, scenario.dim)


def doubled_chart_field(scenario: MorseScenario, zero: BoundaryZero,
                        collar_width: float | None = None) -> FuncField:
    """The doubled field near a boundary zero, in collar coordinates (chart, s).

    ``s`` in (-1, 1) is the distance into M divided by the collar width; s < 0
    is the mirror copy, where the tangential part is reflected unchanged and
    the normal part is negated.
    """
    w = _default_collar(scenario) if collar_width is None else float(collar_width)
    b = scenario.boundaries[zero.boundary]
    c = np.asarray(b.center)

    def radial(s):
        return b.radius - b.orientation * w * np.abs(s)

    if scenario.dim == 2:
        th0 = zero.angle

        def fld(pts):
            u, s = pts[:, 0], pts[:, 1]
            th = th0 + u / b.radius
            dirs = np.stack([np.cos(th), np.sin(th)], 1)
            x = c + radial(s)[:, None] * dirs
            vals = scenario.field.evaluate(x)
            vt = -np.sin(th) * vals[:, 0] + np.cos(th) * vals[:, 1]
            vv = -b.orientation * np.einsum("ij,ij->i", vals, dirs)
            return np.stack([vt, np.sign(s) * smooth_step(np.minimum(np.abs(s), 1.0)) * vv], 1)
        return FuncField(fld, 2)

    p = (np.asarray(zero.point) - c) / b.radius

    def fld3(pts):
        y, s = pts[:, :2], pts[:, 2]
        tang, vals, x = _chart_tangent(scenario, b, p, y, radius_scale=radial(s))
        vv = -b.orientation * np.einsum("ij,ij->i", vals, x)
        return np.concatenate([tang, (np.sign(s) * smooth_step(np.minimum(np.abs(s), 1.0)) * vv)[:, None]], 1)
    return FuncField(fld3, 3)


@dataclass
class DoublingReport:
    doubled_index_sum: int
    target: int
    equal: bool
    collar_width: float
    spot_checks: list = field(default_factory=list)
    sign_convention: str = SIGN_CONVENTION

    def triple(self):
        return (self.doubled_index_sum, self.target, self.equal)


def _scaled(fld: FuncField, tangential_scale: float, normal_scale: float = 0.5) -> FuncField:
    """G(Y, S) = (F_t(a Y, b S) / a, F_n(a Y, b S)); same index at 0 as F."""
    d = fld.dim
    scale = np.full(d, tangential_scale)
    scale[-1] = normal_scale
    inv = np.ones(d) / tangential_scale
    inv[-1] = 1.0
    return FuncField(lambda pts: fld.evaluate(pts * scale) * inv, d)


def _spot_radius(scenario, zero, analysis):
    if scenario.dim == 3:
        return zero.chart_radius
    same = [z for z in analysis.zeros if z.boundary == zero.boundary and z is not zero]
    b = scenario.boundaries[zero.boundary]
    gaps = [abs((z.angle - zero.angle + np.pi) % (2 * np.pi) - np.pi) * b.radius for z in same]
    return min([0.25] + [0.4 * g for g in gaps])


def double_check(scenario: MorseScenario, collar_width: float | None = None, seed: int = 0,
                 analysis: BoundaryAnalysis | None = None, ind_v: int | None = None) -> DoublingReport:
    w = _default_collar(scenario) if collar_width is None else float(collar_width)
    for z in scenario.zeros:
        if scenario.distance_to_boundary(z) <= w:
            raise ScenarioError("collar contains an interior zero; use a narrower collar",
                                zero=z, collar_width=w)
    if analysis is None:
        analysis = boundary_indices(scenario, seed=seed)
    if ind_v is None:
        ind_v = sum(r["index"] for r in interior_indices(scenario, seed))
    signed = sum(z.index if z.side == "inward" else -z.index for z in analysis.zeros)
    # identically tangent-free outward components: perturb, Poincare-Hopf gives chi(component)
    signed -= sum(d["chi"] for d in analysis.degenerate)
    lhs = 2 * ind_v + signed
    rhs = 2 * scenario.chi_M - scenario.chi_boundary
    rep = DoublingReport(lhs, rhs, lhs == rhs, w)
    for side in ("inward", "outward"):
        cands = [z for z in analysis.zeros if z.side == side]
        if not cands:
            continue
        z = cands[0]
        predicted = z.index if side == "inward" else -z.index
        rad = _spot_radius(scenario, z, analysis)
        local = _scaled(doubled_chart_field(scenario, z, w), rad)
        got = index_at(local, np.zeros(scenario.dim), 1.0, seed=seed).index
        rep.spot_checks.append({"boundary": z.boundary, "point": z.point, "side": side,
                                "tangential_index": z.index, "predicted": predicted,
                                "computed": got, "radius": rad})
        if got != predicted:
            raise CrossCheckError("in-situ doubled index disagrees with the sign relation",
                                  check=rep.spot_checks[-1])
    return rep


# -- top level -----------------------------------------------------------------


@dataclass
class MorseReport:
    scenario: str
    Ind_V: int
    boundary_zeros: list
    Ind_dminusV: int
    chi_M: int
    formula_holds: bool
    interior: list = field(default_factory=list)
    degenerate_boundaries: list = field(default_factory=list)
    kronecker: dict | None = None
    screening: dict | None = None
    doubling_check: list | None = None
    doubling: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def morse_check(scenario: MorseScenario, seed: int = 0, double: bool = True,
                collar_width: float | None = None) -> MorseReport:
    _validate(scenario)
    screening = screen_undeclared_zeros(scenario)
    interior = interior_indices(scenario, seed)
    ind_v = sum(r["index"] for r in interior)
    kron = kronecker_check(scenario, ind_v, seed)
    analysis = boundary_indices(scenario, seed=seed)
    ind_minus = sum(z.index for z in analysis.inward())
    rep = MorseReport(
        scenario.name, ind_v, [asdict(z) for z in analysis.zeros], ind_minus, scenario.chi_M,
        ind_v + ind_minus == scenario.chi_M, interior, analysis.degenerate, kron, screening,
    )
    if double:
        d = double_check(scenario, collar_width, seed, analysis, ind_v)
        rep.doubling_check = list(d.triple())
        rep.doubling = asdict(d)
    return rep
