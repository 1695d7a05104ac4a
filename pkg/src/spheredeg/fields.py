"""Polynomial vector fields with exact evaluation and Jacobians.

A :class:`PolyField` stores each output component as a normalized tuple of
:class:`Monomial` terms: equal exponent vectors merged, zero coefficients
dropped, terms sorted by exponent vector. Two fields are structurally equal
exactly when they denote the same polynomial map.

Arbitrary vectorized callables can be wrapped in :class:`FuncField`; their
Jacobians fall back to central finite differences and they are excluded from
the symbolic operations (:func:`suspend_field`, :func:`restrict_field`).
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .errors import DimensionError, InputError, NonInvariantError


@dataclass(frozen=True, order=True)
class Monomial:
    exponents: tuple[int, ...]
    coeff: float = dc_field(compare=False)

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise InputError("monomial exponents must be nonnegative", exponents=exps)
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "coeff", float(self.coeff))

    def __repr__(self):
        return f"Monomial({self.coeff!r}, {self.exponents})"


def _normalize(dim, terms):
    merged = defaultdict(float)
    for t in terms:
        if not isinstance(t, Monomial):
            t = Monomial(tuple(t[1]), t[0])
        if len(t.exponents) != dim:
            raise DimensionError(
                f"monomial has {len(t.exponents)} exponents, field dimension is {dim}",
                exponents=t.exponents,
            )
        merged[t.exponents] += t.coeff
    return tuple(Monomial(e, c) for e, c in sorted(merged.items()) if c != 0.0)


@dataclass(frozen=True)
class PolyField:
    """Polynomial map R^dim -> R^dim_out.

    ``components`` is a sequence (one entry per output coordinate) of
    monomial sequences; a monomial may be given as a :class:`Monomial` or as a
    ``(coeff, exponents)`` pair.
    """

    dim: int
    components: tuple

    def __post_init__(self):
        if int(self.dim) < 1:
            raise InputError("field dimension must be >= 1", dim=self.dim)
        object.__setattr__(self, "dim", int(self.dim))
        comps = tuple(_normalize(self.dim, c) for c in self.components)
        if not comps:
            raise InputError("field needs at least one component")
        object.__setattr__(self, "components", comps)

    def __eq__(self, other):
        if not isinstance(other, PolyField):
            return NotImplemented
        return self.dim == other.dim and self.components == other.components

    def __hash__(self):
        return hash((self.dim, tuple(tuple((m.exponents, m.coeff) for m in c) for c in self.components)))

    @property
    def dim_out(self) -> int:
        return len(self.components)

    @cached_property
    def _packed(self):
        coeffs, exps, comp = [], [], []
        for i, terms in enumerate(self.components):
            for m in terms:
                coeffs.append(m.coeff)
                exps.append(m.exponents)
                comp.append(i)
        return (
            np.array(coeffs, dtype=np.float64),
            np.array(exps, dtype=np.int64).reshape(len(coeffs), self.dim),
            np.array(comp, dtype=np.int64),
        )

    def evaluate(self, points) -> np.ndarray:
        """Evaluate at each row of an (N, dim) array."""
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise DimensionError(f"expected points of shape (N, {self.dim})", shape=pts.shape)
        coeffs, exps, comp = self._packed
        return kernels.poly_eval(coeffs, exps, comp, self.dim_out, pts)

    def __call__(self, x) -> np.ndarray:
        return eval_field(self, x)

    @cached_property
    def derivative_fields(self) -> tuple[PolyField, ...]:
        """Formal partial derivatives, one PolyField per input coordinate."""
        out = []
        for j in range(self.dim):
            comps = []
            for terms in self.components:
                dterms = []
                for m in terms:
                    e = m.exponents[j]
                    if e == 0:
                        continue
                    exps = list(m.exponents)
                    exps[j] = e - 1
                    dterms.append(Monomial(tuple(exps), m.coeff * e))
                comps.append(dterms)
            out.append(PolyField(self.dim, comps))
        return tuple(out)

    def jacobian(self, x) -> np.ndarray:
        return jacobian(self, x)

    def degree(self) -> int:
        return max((sum(m.exponents) for c in self.components for m in c), default=0)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "components": [
                [{"c": m.coeff, "e": list(m.exponents)} for m in terms]
                for terms in self.components
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> PolyField:
        try:
            dim = int(data["dim"])
            comps = [
                [Monomial(tuple(t["e"]), float(t["c"])) for t in terms]
                for terms in data["components"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed field description: {exc}") from exc
        return cls(dim, comps)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> PolyField:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"field file is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    # -- constructors ----------------------------------------------------

    @classmethod
    def linear(cls, matrix) -> PolyField:
        a = np.asarray(matrix, dtype=np.float64)
        if a.ndim != 2:
            raise DimensionError("linear field needs a matrix", shape=a.shape)
        d = a.shape[1]
        eye = np.eye(d, dtype=np.int64)
        comps = [[Monomial(tuple(eye[j]), a[i, j]) for j in range(d)] for i in range(a.shape[0])]
        return cls(d, comps)

    @classmethod
    def identity(cls, dim: int) -> PolyField:
        return cls.linear(np.eye(dim))

    @classmethod
    def constant(cls, values) -> PolyField:
        vals = [float(v) for v in values]
        return cls(len(vals), [[Monomial((0,) * len(vals), v)] for v in vals])


class FuncField:
    """Opaque field from a vectorized callable ``fn((N, dim)) -> (N, dim_out)``.

    Pass ``vectorized=False`` for a callable that maps one point to one vector.
    """

    def __init__(self, fn: Callable, dim: int, dim_out: int | None = None, vectorized: bool = True,
                 fd_step: float = 1e-6):
        self.fn = fn
        self.dim = int(dim)
        self.dim_out = int(dim if dim_out is None else dim_out)
        self.vectorized = vectorized
        self.fd_step = fd_step

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise DimensionError(f"expected points of shape (N, {self.dim})", shape=pts.shape)
        if self.vectorized:
            out = np.asarray(self.fn(pts), dtype=np.float64)
        else:
            out = np.array([np.asarray(self.fn(p), dtype=np.float64) for p in pts]).reshape(len(pts), -1)
        if out.shape != (pts.shape[0], self.dim_out):
            raise DimensionError("callable returned an array of the wrong shape", shape=out.shape)
        return out

    def __call__(self, x) -> np.ndarray:
        return eval_field(self, x)

    def jacobian(self, x) -> np.ndarray:
        return jacobian(self, x)

    def __repr__(self):
        return f"FuncField({getattr(self.fn, '__name__', self.fn)!r}, dim={self.dim})"


FieldEval = PolyField | FuncField


def _as_point(field, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (field.dim,):
        raise DimensionError(f"point must have length {field.dim}", shape=x.shape)
    return x


def eval_field(field: FieldEval, x: Sequence[float]) -> np.ndarray:
    x = _as_point(field, x)
    return field.evaluate(x[None, :])[0]


def jacobian(field: FieldEval, x: Sequence[float]) -> np.ndarray:
    """Jacobian matrix ``J[i, j] = d field_i / d x_j``.

    Exact for polynomial fields; central differences for opaque ones.
    """
    x = _as_point(field, x)
    if isinstance(field, PolyField):
        cols = [d.evaluate(x[None, :])[0] for d in field.derivative_fields]
        return np.stack(cols, axis=1)
    h = field.fd_step * max(1.0, float(np.abs(x).max()))
    steps = np.eye(field.dim) * h
    vals = field.evaluate(np.concatenate([x + steps, x - steps]))
    return ((vals[: field.dim] - vals[field.dim:]) / (2 * h)).T


def suspend_field(field: PolyField, sign: int) -> PolyField:
    """Append the coordinate ``x_{n+1}`` and the component ``sign * x_{n+1}``.

    The existing components are lifted unchanged, so the hyperplane
    ``x_{n+1} = 0`` is invariant and the restriction there is ``field``.
    """
    if sign not in (1, -1):
        raise InputError("suspension sign must be +1 or -1", sign=sign)
    if not isinstance(field, PolyField):
        raise InputError("suspension needs a polynomial field")
    if field.dim_out != field.dim:
        raise DimensionError("suspension needs a vector field (dim_out == dim)")
    n = field.dim
    comps = [[Monomial(m.exponents + (0,), m.coeff) for m in terms] for terms in field.components]
    comps.append([Monomial((0,) * n + (1,), float(sign))])
    return PolyField(n + 1, comps)


def restrict_field(field: PolyField) -> PolyField:
    """Restrict a field on R^{n+1} to the invariant hyperplane ``x_{n+1} = 0``.

    Raises :class:`NonInvariantError` naming a monomial of the last component
    that does not vanish on the hyperplane.
    """
    if not isinstance(field, PolyField):
        raise InputError("restriction needs a polynomial field")
    if field.dim_out != field.dim or field.dim < 2:
        raise DimensionError("restriction needs a vector field on R^{n+1}, n >= 1")
    for m in field.components[-1]:
        if m.exponents[-1] == 0:
            raise NonInvariantError(
                "last component does not vanish on the hyperplane x_{n+1} = 0",
                monomial={"c": m.coeff, "e": list(m.exponents)},
            )
    n = field.dim - 1
    comps = [
        [Monomial(m.exponents[:-1], m.coeff) for m in terms if m.exponents[-1] == 0]
        for terms in field.components[:-1]
    ]
    return PolyField(n, comps)


def permute_coordinates(field: PolyField, perm: Sequence[int]) -> PolyField:
    """Conjugate ``field`` by the coordinate permutation ``y_i = x_{perm[i]}``.

    The result G satisfies ``G(y) = P F(P^{-1} y)``; conjugation leaves the
    index of every zero unchanged.
    """
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(field.dim)) or field.dim_out != field.dim:
        raise InputError("perm must be a permutation of the coordinates", perm=perm)
    comps = []
    for i in range(field.dim):
        comps.append([
            Monomial(tuple(m.exponents[perm[k]] for k in range(field.dim)), m.coeff)
            for m in field.components[perm[i]]
        ])
    return PolyField(field.dim, comps)


def load_field(path) -> PolyField:
    with open(path) as fh:
        return PolyField.from_json(fh.read())
