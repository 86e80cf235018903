"""Gauge actions, dressing, and residual transformation laws on a chart.

Fields carry a kind (connection, tensorial form, or section) that fixes how
a group-valued map acts on them.  Group-valued maps carry a class tag, so a
dressing field cannot be passed where a gauge transformation is expected
and vice versa.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from numbers import Number
from typing import Any, Callable

import numpy as np

from . import expr as ex
from . import groups
from .forms import MatrixForm, as_matrix, eye, mat_mul, values, zero_form

__all__ = [
    "Kind",
    "MapClass",
    "Field",
    "GaugeMap",
    "TagError",
    "CompatibilityError",
    "CocycleError",
    "connection",
    "tensor",
    "section",
    "curvature",
    "covariant_derivative",
    "gauge_transform",
    "dress",
    "act",
    "residual_adjoint_transform",
    "CocycleSpec",
    "Cocycle",
    "make_cocycle",
    "residual_twisted_transform",
    "matrix_values",
    "max_deviation",
]


class TagError(TypeError):
    """A map of the wrong class was supplied (e.g. a dressing used as a gauge map)."""


class CompatibilityError(ValueError):
    pass


class CocycleError(ValueError):
    pass


class Kind(str, Enum):
    CONNECTION = "connection"
    TENSOR = "tensor"
    SECTION = "section"


class MapClass(str, Enum):
    GAUGE = "gauge"
    DRESSING = "dressing"
    COCYCLE = "cocycle"


@dataclass(frozen=True)
class Field:
    form: MatrixForm
    kind: Kind
    algebra: str | None = None
    coupling: Any = 1
    rep: str | None = None
    invariant_under: frozenset = frozenset()

    def with_form(self, form: MatrixForm, **kw) -> "Field":
        return replace(self, form=form, **kw)


def connection(form: MatrixForm, algebra: str | None = None, coupling=1) -> Field:
    if form.degree != 1 or form.rows != form.cols:
        raise ValueError("a connection is a square matrix-valued 1-form")
    return Field(form, Kind.CONNECTION, algebra, coupling)


def tensor(form: MatrixForm, algebra: str | None = None) -> Field:
    return Field(form, Kind.TENSOR, algebra)


def section(form: MatrixForm, rep: str | None = None) -> Field:
    return Field(form, Kind.SECTION, rep=rep)


@dataclass(frozen=True)
class GaugeMap:
    """Group-valued 0-form with its exact inverse and a class tag."""

    value: np.ndarray
    inverse: np.ndarray
    group: str
    cls: MapClass = MapClass.GAUGE
    erased: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "value", as_matrix(self.value))
        object.__setattr__(self, "inverse", as_matrix(self.inverse))
        if self.value.shape != self.inverse.shape or self.value.shape[0] != self.value.shape[1]:
            raise ValueError("gauge map and inverse must be square of equal size")

    @staticmethod
    def identity(n: int, group: str, cls: MapClass = MapClass.GAUGE, erased: str | None = None) -> "GaugeMap":
        return GaugeMap(eye(n), eye(n), group, cls, erased)

    def as_form(self) -> MatrixForm:
        return zero_form(self.value)

    def retag(self, cls: MapClass, erased: str | None = None) -> "GaugeMap":
        """Explicit class conversion; the only way to reuse a map under another role."""
        return replace(self, cls=cls, erased=erased)

    def compose(self, other: "GaugeMap") -> "GaugeMap":
        return replace(self, value=mat_mul(self.value, other.value), inverse=mat_mul(other.inverse, self.inverse))

    def membership_residual(self, points) -> float:
        spec = groups.GROUPS[self.group]
        vals = matrix_values(self.value, points)
        return max(float(spec.residual(m)) for m in vals)

    def inverse_residual(self, points) -> float:
        v = matrix_values(self.value, points)
        w = matrix_values(self.inverse, points)
        n = v.shape[1]
        return float(np.max(np.abs(v @ w - np.eye(n))))


def matrix_values(m: np.ndarray, points, params=None) -> np.ndarray:
    """Values of an Expr matrix, shape (N, rows, cols)."""
    m = as_matrix(m)
    (v,) = values([zero_form(m)], points, params)
    return v[0]


def _inv_coupling(c):
    if isinstance(c, ex.Expr):
        return ex.power(c, -1)
    if isinstance(c, Number) and not isinstance(c, bool):
        from fractions import Fraction

        return Fraction(1, 1) / c if isinstance(c, (int, Fraction)) else 1.0 / c
    raise TypeError("coupling must be a number or Expr")


def act(chi: Field, g: np.ndarray, gi: np.ndarray) -> Field:
    """Right action of the group-valued map g (with inverse gi) on a field."""
    gf, gif = zero_form(g), zero_form(gi)
    f = chi.form
    if chi.kind is Kind.SECTION:
        if f.rows != gi.shape[1]:
            raise ValueError(f"section of size {f.rows} cannot carry a {gi.shape} action")
        return chi.with_form(gif @ f)
    if f.rows != g.shape[0]:
        raise ValueError(f"field of shape {f.shape} cannot carry a {g.shape} action")
    out = gif @ f @ gf
    if chi.kind is Kind.CONNECTION:
        out = out + (gif @ gf.d()) * _inv_coupling(chi.coupling)
    return chi.with_form(out)


def curvature(omega: Field) -> Field:
    """d omega + c omega^omega, c the coupling (i.e. d omega + 1/2 [omega, omega] for c = 1)."""
    if omega.kind is not Kind.CONNECTION:
        raise TypeError("curvature needs a connection")
    f = omega.form
    ff = f @ f
    if omega.coupling != 1:
        ff = ff * omega.coupling
    return Field(f.d() + ff, Kind.TENSOR, omega.algebra, invariant_under=omega.invariant_under)


def covariant_derivative(omega: Field, phi: Field) -> Field:
    """d phi + c omega phi for a section, or d phi + c [omega, phi] for a tensorial form."""
    if omega.kind is not Kind.CONNECTION:
        raise TypeError("covariant derivative needs a connection")
    f, w = phi.form, omega.form
    if phi.kind is Kind.SECTION:
        if w.cols != f.rows:
            raise ValueError("representation size mismatch")
        term = w @ f
    elif phi.kind is Kind.TENSOR:
        sign = (-1) ** f.degree
        term = w @ f - (f @ w) * sign
    else:
        raise TypeError("cannot differentiate a connection covariantly")
    if omega.coupling != 1:
        term = term * omega.coupling
    inv = omega.invariant_under & phi.invariant_under
    return replace(phi, form=f.d() + term, invariant_under=inv)


def gauge_transform(chi: Field, gamma: GaugeMap) -> Field:
    if gamma.cls is not MapClass.GAUGE:
        raise TagError(f"gauge_transform needs a gauge map, got a {gamma.cls.value} map")
    return act(chi, gamma.value, gamma.inverse)


def dress(chi: Field, u: GaugeMap) -> Field:
    if u.cls is not MapClass.DRESSING:
        raise TagError(f"dress needs a dressing field, got a {u.cls.value} map")
    out = act(chi, u.value, u.inverse)
    if u.erased:
        out = replace(out, invariant_under=chi.invariant_under | {u.erased})
    return out


def max_deviation(a, b, points, relative: bool = False) -> float:
    """Sup-norm of the difference of two forms (or Fields) at sample points."""
    fa = a.form if isinstance(a, Field) else a
    fb = b.form if isinstance(b, Field) else b
    if fa.degree != fb.degree or fa.shape != fb.shape:
        raise ValueError("cannot compare forms of different degree/shape")
    va, vb = values([fa, fb], points)
    dev = float(np.max(np.abs(va - vb))) if va.size else 0.0
    if relative:
        scale = max(float(np.max(np.abs(va))) if va.size else 0.0, 1.0)
        return dev / scale
    return dev


def residual_adjoint_transform(
    chi_u: Field, gamma: GaugeMap, u: GaugeMap, u_gamma: GaugeMap, points, tol: float = 1e-6
) -> Field:
    """Residual J-transformation of a dressed field when u^gamma = gamma^-1 u gamma.

    ``u_gamma`` is the dressing field rebuilt from the gamma-transformed fields;
    the compatibility condition is checked at the given points.
    """
    lhs = matrix_values(u_gamma.value, points)
    rhs = matrix_values(mat_mul(mat_mul(gamma.inverse, u.value), gamma.value), points)
    res = float(np.max(np.abs(lhs - rhs)))
    if res >= tol:
        raise CompatibilityError(f"dressing field is not adjoint-compatible (residual {res:.3g})")
    return gauge_transform(chi_u, gamma)


# Cocycles -------------------------------------------------------------------------


@dataclass(frozen=True)
class CocycleSpec:
    """C_p(j) = A_p(j) B(j) for an abelian group J of elements j.

    ``base``/``base_inv`` give A_p(j) and its inverse (depending on chart data
    fixed by the closure); ``twist``/``twist_inv`` the morphism B.  ``mul``
    multiplies J elements and ``numeric`` turns a J element into a matrix at
    sample points, for the abelian check.
    """

    base: Callable[[Any], np.ndarray]
    base_inv: Callable[[Any], np.ndarray]
    twist: Callable[[Any], np.ndarray]
    twist_inv: Callable[[Any], np.ndarray]
    mul: Callable[[Any, Any], Any]
    group: str = "GL"


@dataclass(frozen=True)
class Cocycle:
    spec: CocycleSpec
    shift: Any = None  # j0 for the shifted cocycle B(j0)^-1 C(.) B(j0)

    def __call__(self, j) -> GaugeMap:
        s = self.spec
        val = mat_mul(as_matrix(s.base(j)), as_matrix(s.twist(j)))
        inv = mat_mul(as_matrix(s.twist_inv(j)), as_matrix(s.base_inv(j)))
        if self.shift is not None:
            b, bi = as_matrix(s.twist(self.shift)), as_matrix(s.twist_inv(self.shift))
            val = mat_mul(mat_mul(bi, val), b)
            inv = mat_mul(mat_mul(bi, inv), b)
        return GaugeMap(val, inv, s.group, MapClass.COCYCLE)

    def shifted(self, j) -> "Cocycle":
        """C_{pj}(j') = B(j)^-1 C_p(j') B(j); shifts compose through J's product."""
        new = j if self.shift is None else self.spec.mul(self.shift, j)
        return Cocycle(self.spec, new)

    def identity_residual(self, j, k, points) -> float:
        """|C(jk) - C(j) C_{pj}(k)| at sample points."""
        lhs = self(self.spec.mul(j, k)).value
        rhs = mat_mul(self(j).value, self.shifted(j)(k).value)
        return float(np.max(np.abs(matrix_values(lhs, points) - matrix_values(rhs, points))))


def make_cocycle(spec: CocycleSpec, samples=(), points=None, tol: float = 1e-8) -> Cocycle:
    """Build C from (A_p, B); with samples given, check J abelian and B a morphism."""
    c = Cocycle(spec)
    if samples and points is not None:
        for j in samples:
            for k in samples:
                jk = matrix_values(spec.twist(spec.mul(j, k)), points)
                kj = matrix_values(spec.twist(spec.mul(k, j)), points)
                if np.max(np.abs(jk - kj)) >= tol:
                    raise CocycleError("J is not abelian on the samples")
                bb = matrix_values(mat_mul(as_matrix(spec.twist(j)), as_matrix(spec.twist(k))), points)
                if np.max(np.abs(jk - bb)) >= tol:
                    raise CocycleError("B is not a morphism on the samples")
    return c


def residual_twisted_transform(chi_u: Field, j, cocycle: Cocycle) -> Field:
    """Residual J-transformation of a dressed field through C(j)."""
    cj = cocycle(j)
    return act(chi_u, cj.value, cj.inverse)
