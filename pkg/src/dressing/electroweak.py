"""U(1) x SU(2) model: polar-decomposition dressing, residual U(1) laws, masses.

Gauge fields are anti-hermitian: ``a`` is an iR-valued 1-form acting as
``a 1_2`` and ``b`` is su(2)-valued.  The covariant derivative of the doublet is
``d phi + (g' a + g b) phi`` and the curvature is ``F = da 1_2 + db + g b^b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

from . import expr as ex
from .forms import ETA, MatrixForm, hodge, values, zero_form
from .gauge import (
    Cocycle,
    CocycleSpec,
    Field,
    GaugeMap,
    MapClass,
    act,
    connection,
    curvature,
    dress,
    gauge_transform,
    section,
)

__all__ = [
    "DegenerateVacuumError",
    "EWFieldSet",
    "DressedEW",
    "EWVariables",
    "UnitaryGaugeFields",
    "polar_decompose",
    "dress_ew",
    "weinberg_rotate",
    "extract_WpWm",
    "assemble_B",
    "ew_variables",
    "ew_lagrangian",
    "ew_lagrangian_dressed",
    "masses",
    "Masses",
    "transform_fields",
    "u1_map",
    "alpha_tilde_cocycle",
    "unitary_gauge",
    "vacuum_norm_check",
]

VACUUM_TOL = 1e-12


class DegenerateVacuumError(ArithmeticError):
    """The doublet vanishes at a sample point, so the polar decomposition is singular."""


def _eye_times(f: MatrixForm, n: int = 2) -> MatrixForm:
    """f 1_n for a scalar form f."""
    return MatrixForm.block([[f if i == j else None for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class EWFieldSet:
    a: MatrixForm  # 1x1, iR-valued
    b: MatrixForm  # 2x2, su(2)-valued
    phi: MatrixForm  # 2x1 0-form
    g: Real
    gp: Real
    mu2: Real
    lam: Real

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("quartic coupling lambda must be positive")
        if not (self.g > 0 and self.gp > 0):
            raise ValueError("couplings g, g' must be positive")

    def total_connection(self) -> Field:
        return connection(_eye_times(self.a) * self.gp + self.b * self.g, "u(2)")

    def curvature(self) -> MatrixForm:
        return _eye_times(self.a.d()) + curvature(connection(self.b, "su(2)", self.g)).form


@dataclass(frozen=True)
class DressedEW:
    a: MatrixForm
    B: MatrixForm
    G: MatrixForm
    eta: ex.Expr
    Deta: MatrixForm  # 2x1 1-form, covariant derivative of (0, eta)
    u: GaugeMap


@dataclass(frozen=True)
class EWVariables:
    """Physical variables after the Weinberg rotation."""

    A: MatrixForm
    Z: MatrixForm
    Wp: MatrixForm
    Wm: MatrixForm
    eta: ex.Expr
    g: Real
    gp: Real
    mu2: Real
    lam: Real


@dataclass(frozen=True)
class UnitaryGaugeFields:
    """Fields gauge-fixed with the polar factor; numerically equal to the dressed ones.

    Kept as a separate type: a gauge-fixed configuration is not a set of
    invariant composite fields, even where the numbers agree.
    """

    a: MatrixForm
    b: MatrixForm
    phi: MatrixForm


def vacuum_norm_check(phi: MatrixForm, points) -> float:
    """Smallest doublet norm at the points; raises when below the vacuum tolerance."""
    (v,) = values([phi], points)
    norms = np.sqrt(np.sum(np.abs(v[0, :, :, 0]) ** 2, axis=1))
    m = float(np.min(norms)) if norms.size else math.inf
    if m < VACUUM_TOL:
        raise DegenerateVacuumError(f"doublet norm {m:.3g} below {VACUUM_TOL:g}")
    return m


def polar_decompose(phi: MatrixForm, points=None) -> tuple[GaugeMap, ex.Expr]:
    """phi = u (0, eta)^T with u in SU(2) and eta = |phi|."""
    if phi.degree != 0 or phi.shape != (2, 1):
        raise ValueError("polar decomposition needs a C^2-valued 0-form")
    if points is not None:
        vacuum_norm_check(phi, points)
    p1, p2 = phi.comps[()][0, 0], phi.comps[()][1, 0]
    c1, c2 = ex.conj(p1), ex.conj(p2)
    eta = ex.sqrt(c1 * p1 + c2 * p2)
    k = ex.power(eta, -1)
    u = [[k * c2, k * p1], [-(k * c1), k * p2]]
    ui = [[k * p2, -(k * p1)], [k * c1, k * c2]]
    return GaugeMap(u, ui, "SU(2)", MapClass.DRESSING, erased="SU(2)"), eta


def dress_ew(F: EWFieldSet, points=None) -> DressedEW:
    u, eta = polar_decompose(F.phi, points)
    B = dress(connection(F.b, "su(2)", F.g), u)
    G = curvature(B).form
    a1 = _eye_times(F.a)
    eta_col = zero_form([[0], [eta]])
    D = eta_col.d() + (a1 * F.gp + B.form * F.g) @ eta_col
    return DressedEW(F.a, B.form, G, eta, D, u)


def extract_WpWm(B: MatrixForm, points=None, tol: float = 1e-9) -> tuple[MatrixForm, MatrixForm, MatrixForm]:
    """(W+, W-, B3) from B = [[B3, W-], [W+, -B3]]; tracelessness checked at the points."""
    if B.shape != (2, 2):
        raise ValueError("B must be 2x2")
    pts = _CHECK_POINTS if points is None else points
    (v,) = values([B.trace()], pts)
    if v.size and np.max(np.abs(v)) > tol:
        raise ValueError("B is not traceless")
    return B.entry(1, 0), B.entry(0, 1), B.entry(0, 0)


_CHECK_POINTS = np.random.default_rng(0).uniform(-0.25, 0.25, size=(4, 4))


def assemble_B(Wp: MatrixForm, Wm: MatrixForm, B3: MatrixForm) -> MatrixForm:
    return MatrixForm.block([[B3, Wm], [Wp, -B3]])


def weinberg_rotate(a: MatrixForm, B3: MatrixForm, g: Real, gp: Real):
    """(A, Z, e, cos theta_W, sin theta_W)."""
    if not (g > 0 and gp > 0):
        raise ValueError("couplings must be positive")
    n = math.hypot(g, gp)
    c, s = g / n, gp / n
    A = a * c + B3 * s
    Z = B3 * c - a * s
    return A, Z, g * gp / n, c, s


def ew_variables(F: EWFieldSet, points=None) -> EWVariables:
    D = dress_ew(F, points)
    Wp, Wm, B3 = extract_WpWm(D.B, points)
    A, Z, _, _, _ = weinberg_rotate(D.a, B3, F.g, F.gp)
    return EWVariables(A, Z, Wp, Wm, D.eta, F.g, F.gp, F.mu2, F.lam)


def _vol() -> MatrixForm:
    return hodge(zero_form([[1]]), ETA)


def _hodge_pair(f: MatrixForm) -> MatrixForm:
    """conj(f)^T ^ *f for a column form (sum over entries)."""
    return f.H @ hodge(f, ETA)


def _potential(norm2, mu2, lam) -> MatrixForm:
    return _vol() * (mu2 * norm2 + lam * norm2 * norm2)


def ew_lagrangian(F: EWFieldSet) -> MatrixForm:
    """1/2 Tr(F ^ *F) + <D phi, *D phi> - U(|phi|) vol, as a 1x1 4-form."""
    Fm = F.curvature()
    ym = (Fm @ hodge(Fm, ETA)).trace() * ex.Fraction(1, 2)
    omega = F.total_connection()
    Dphi = omega.form @ F.phi + F.phi.d()
    p = F.phi.comps[()]
    norm2 = ex.conj(p[0, 0]) * p[0, 0] + ex.conj(p[1, 0]) * p[1, 0]
    return ym + _hodge_pair(Dphi) - _potential(norm2, F.mu2, F.lam)


def ew_lagrangian_dressed(V: EWVariables) -> MatrixForm:
    """Same Lagrangian written in the invariant variables (A, Z, W+, W-, eta)."""
    g, gp = V.g, V.gp
    n = math.hypot(g, gp)
    c, s = g / n, gp / n
    a = V.A * c - V.Z * s
    B3 = V.A * s + V.Z * c
    Wm, Wp = V.Wm, V.Wp
    wmwp = Wm @ Wp
    G = MatrixForm.block(
        [
            [B3.d() + wmwp * g, Wm.d() + (B3 @ Wm) * (2 * g)],
            [Wp.d() - (B3 @ Wp) * (2 * g), -B3.d() - wmwp * g],
        ]
    )
    Fh = _eye_times(a.d()) + G
    ym = (Fh @ hodge(Fh, ETA)).trace() * ex.Fraction(1, 2)
    eta = zero_form([[V.eta]])
    Deta = MatrixForm.block([[(Wm @ eta) * g], [eta.d() - (V.Z @ eta) * n]])
    norm2 = V.eta * V.eta
    return ym + _hodge_pair(Deta) - _potential(norm2, V.mu2, V.lam)


@dataclass(frozen=True)
class Masses:
    eta0: float
    m_Z: float
    m_W: float
    m_H: float
    ratio: float | None
    cos_theta_W: float


def masses(mu2: float, lam: float, g: float, gp: float) -> Masses:
    if not lam > 0:
        raise ValueError("lambda must be positive")
    n = math.hypot(g, gp)
    cw = g / n
    if mu2 >= 0:
        return Masses(0.0, 0.0, 0.0, 0.0, None, cw)
    eta0 = math.sqrt(-mu2 / (2 * lam))
    mz, mw = eta0 * n, eta0 * g
    return Masses(eta0, mz, mw, eta0 * 2 * lam, mw / mz, cw)


def u1_map(theta) -> tuple[GaugeMap, GaugeMap]:
    """alpha = exp(i theta) as a 1x1 map and as alpha 1_2."""
    al, ali = ex.exp(ex.I * theta), ex.exp(-ex.I * theta)
    one = GaugeMap([[al]], [[ali]], "U(1)")
    two = GaugeMap([[al, 0], [0, al]], [[ali, 0], [0, ali]], "U(2)")
    return one, two


def transform_fields(F: EWFieldSet, alpha: GaugeMap | None = None, beta: GaugeMap | None = None) -> EWFieldSet:
    """Act with alpha in U(1) (1x1 map) and/or beta in SU(2)."""
    a, b, phi = F.a, F.b, F.phi
    if alpha is not None:
        a = gauge_transform(connection(a, "u(1)", F.gp), alpha).form
        al2 = GaugeMap(
            [[alpha.value[0, 0], 0], [0, alpha.value[0, 0]]],
            [[alpha.inverse[0, 0], 0], [0, alpha.inverse[0, 0]]],
            "U(2)",
        )
        phi = gauge_transform(section(phi), al2).form
    if beta is not None:
        b = gauge_transform(connection(b, "su(2)", F.g), beta).form
        phi = gauge_transform(section(phi), beta).form
    return EWFieldSet(a, b, phi, F.g, F.gp, F.mu2, F.lam)


def alpha_tilde_cocycle() -> Cocycle:
    """Residual U(1) law of the dressed fields: u^alpha = u diag(alpha, alpha^-1).

    J elements are phases alpha given as Expr; the base part is trivial.
    """
    one = lambda j: [[1, 0], [0, 1]]  # noqa: E731
    return Cocycle(
        CocycleSpec(
            base=one,
            base_inv=one,
            twist=lambda al: [[al, 0], [0, ex.power(al, -1)]],
            twist_inv=lambda al: [[ex.power(al, -1), 0], [0, al]],
            mul=lambda x, y: ex.mul(x, y),
            group="U(2)",
        )
    )


def unitary_gauge(F: EWFieldSet) -> UnitaryGaugeFields:
    """Gauge-fix with the polar factor used as an ordinary gauge map."""
    u, _ = polar_decompose(F.phi)
    gu = u.retag(MapClass.GAUGE)
    b = gauge_transform(connection(F.b, "su(2)", F.g), gu).form
    phi = act(section(F.phi), gu.value, gu.inverse).form
    return UnitaryGaugeFields(F.a, b, phi)
