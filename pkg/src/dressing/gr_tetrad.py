"""Tetrad dressing of the Poincare-type Cartan connection.

The tetrad ``e`` (an invertible 4x4 field e^a_mu) transforms as ``S^-1 e``
under Lorentz maps, so it dresses the Lorentz connection A into a linear
connection Gamma with values in gl(4).  The dressed fields keep a
*soldering form* ``s = S dx`` (initially dx), which tracks which coframe the
matrix indices refer to after GL(4) changes of frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from . import groups
from .forms import (
    DIM,
    MatrixForm,
    Metric,
    _indices,
    as_matrix,
    eye,
    hodge,
    mat_det,
    mat_inv,
    mat_mul,
    one_form,
    values,
    zero_form,
)
from .gauge import Field, GaugeMap, MapClass, connection, curvature, dress, section

__all__ = [
    "DegenerateTetradError",
    "PoincareCartan",
    "MetricAffineData",
    "ETA_M",
    "soldering",
    "induced_metric",
    "tetrad_dress",
    "tetrad_dressing_field",
    "metricity_form",
    "metricity_residual",
    "metricity_symbolic",
    "palatini_lagrangian",
    "einstein_hilbert_lagrangian",
    "ricci_contraction",
    "coordinate_change",
    "christoffel",
    "levi_civita_spin_connection",
    "lorentz_transform",
]

ETA_M = as_matrix(groups.ETA)


class DegenerateTetradError(ArithmeticError):
    pass


def soldering(e: np.ndarray) -> MatrixForm:
    """theta = e dx, the column of 1-forms theta^a = e^a_mu dx^mu."""
    e = as_matrix(e)
    return one_form([e[:, mu : mu + 1] for mu in range(DIM)])


@dataclass(frozen=True)
class PoincareCartan:
    A: MatrixForm  # so(1,3)-valued 1-form
    e: np.ndarray  # 4x4 tetrad
    e_inv: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "e", as_matrix(self.e))
        if self.e_inv is None:
            try:
                object.__setattr__(self, "e_inv", mat_inv(self.e))
            except ZeroDivisionError as err:
                raise DegenerateTetradError("tetrad has an identically vanishing determinant") from err
        else:
            object.__setattr__(self, "e_inv", as_matrix(self.e_inv))

    @property
    def theta(self) -> MatrixForm:
        return soldering(self.e)

    def matrix(self) -> MatrixForm:
        """The 5x5 Cartan connection [[A, theta], [0, 0]]."""
        th = self.theta
        zero_row = MatrixForm.zero(1, (1, 5))
        top = MatrixForm.block([[self.A, th]])
        return MatrixForm.block([[top], [zero_row]])

    def curvature(self) -> MatrixForm:
        return curvature(connection(self.A, "so(1,3)")).form

    def torsion(self) -> MatrixForm:
        th = self.theta
        return th.d() + self.A @ th

    def check(self, points, tol: float = 1e-8) -> None:
        det = ex.evaluate([mat_det(self.e)], points)[0]
        if np.any(np.abs(det) <= tol):
            raise DegenerateTetradError("tetrad is degenerate at a sample point")


def induced_metric(e, e_inv=None) -> Metric:
    """g = e^T eta e, with inverse e^-1 eta e^-T and sqrt|g| = det e (oriented tetrads)."""
    e = as_matrix(e)
    ei = mat_inv(e) if e_inv is None else as_matrix(e_inv)
    g = mat_mul(mat_mul(e.T.copy(), ETA_M), e)
    gi = mat_mul(mat_mul(ei, ETA_M), ei.T.copy())
    return Metric(g, gi, mat_det(e))


@dataclass(frozen=True)
class MetricAffineData:
    Gamma: MatrixForm  # gl(4)-valued 1-form
    metric: Metric
    sR: MatrixForm  # curvature 2-form of Gamma
    T: MatrixForm  # torsion column 2-form
    solder: np.ndarray  # S with soldering form S dx
    solder_inv: np.ndarray

    @property
    def solder_form(self) -> MatrixForm:
        return soldering(self.solder)


def tetrad_dressing_field(e_field: Field, e_inv=None) -> GaugeMap:
    e = e_field.form.comps[()]
    ei = mat_inv(e) if e_inv is None else e_inv
    return GaugeMap(e, ei, "GL(4)", MapClass.DRESSING, erased="SO(1,3)")


def tetrad_dress(P: PoincareCartan, points=None) -> MetricAffineData:
    """Gamma = e^-1 A e + e^-1 de, sR = e^-1 R e, T = e^-1 Theta, g = e^T eta e."""
    if points is not None:
        P.check(points)
    u = GaugeMap(P.e, P.e_inv, "GL(4)", MapClass.DRESSING, erased="SO(1,3)")
    Gamma = dress(connection(P.A, "so(1,3)"), u).form
    sR = curvature(connection(Gamma, "gl(4)")).form
    T = dress(section(P.torsion()), u).form
    g = induced_metric(P.e, P.e_inv)
    return MetricAffineData(Gamma, g, sR, T, eye(4), eye(4))


def lorentz_transform(P: PoincareCartan, S, S_inv) -> PoincareCartan:
    """(A, e) -> (S^-1 A S + S^-1 dS, S^-1 e)."""
    from .gauge import act

    A = act(connection(P.A), as_matrix(S), as_matrix(S_inv)).form
    e = mat_mul(as_matrix(S_inv), P.e)
    ei = mat_mul(P.e_inv, as_matrix(S))
    return PoincareCartan(A, e, ei)


def metricity_form(M: MetricAffineData) -> MatrixForm:
    """dg - Gamma^T g - g Gamma."""
    g = zero_form(M.metric.g)
    return g.d() - M.Gamma.T @ g - g @ M.Gamma


def metricity_residual(M: MetricAffineData, points) -> float:
    (v,) = values([metricity_form(M)], points)
    return float(np.max(np.abs(v)))


def metricity_symbolic(P: PoincareCartan) -> bool:
    """Exact check that -e^T (A^T eta + eta A) e vanishes, the reduced metricity residual."""
    from .normal import is_zero

    e = zero_form(P.e)
    eta = zero_form(ETA_M)
    form = -(e.T @ (P.A.T @ eta + eta @ P.A) @ e)
    return all(is_zero(x) for m in form.comps.values() for x in m.flat)


def palatini_lagrangian(P: PoincareCartan, G: float = 1.0) -> MatrixForm:
    """-(1/32 pi G) Tr(R ^ *(theta ^ theta^T eta)), Hodge star of the induced metric."""
    th = P.theta
    X = th @ (th.T @ zero_form(ETA_M))
    g = induced_metric(P.e, P.e_inv)
    return (P.curvature() @ hodge(X, g)).trace() * (-1.0 / (32 * math.pi * G))


def _components(form2: MatrixForm, s_inv: np.ndarray) -> dict:
    """Components R_{ab} of a matrix 2-form in the soldering coframe, for all ordered pairs."""
    dx_comp = {}
    for (r, s), m in form2.comps.items():
        dx_comp[(r, s)] = m
        dx_comp[(s, r)] = -m
    identity = all(
        (s_inv[i, j].is_zero if i != j else (s_inv[i, j] is ex.ONE)) for i in range(DIM) for j in range(DIM)
    )
    if identity:
        return dx_comp
    out = {}
    for a in range(DIM):
        for b in range(DIM):
            if a == b:
                continue
            acc = None
            for (r, s), m in dx_comp.items():
                c = s_inv[r, a] * s_inv[s, b]
                if c.is_zero:
                    continue
                term = np.asarray(np.frompyfunc(lambda x, c=c: x * c, 1, 1)(m), dtype=object)
                acc = term if acc is None else acc + term
            out[(a, b)] = acc
    return out


def ricci_contraction(M: MetricAffineData) -> ex.Expr:
    """R_icc = 1/2 g^{nu b} R^mu_{nu mu b}: the contraction read off with each 2-form
    component counted once per unordered pair, i.e. half the usual scalar curvature."""
    comps = _components(M.sR, M.solder_inv)
    gi = M.metric.inverse
    terms = []
    for mu in range(DIM):
        for nu in range(DIM):
            for b in range(DIM):
                if mu == b or gi[nu, b].is_zero:
                    continue
                m = comps.get((mu, b))
                if m is None or m[mu, nu].is_zero:
                    continue
                terms.append(gi[nu, b] * m[mu, nu])
    return ex.mul(ex.Fraction(1, 2), ex.add(*terms)) if terms else ex.ZERO


def einstein_hilbert_lagrangian(M: MetricAffineData, G: float = 1.0) -> MatrixForm:
    """(1/16 pi G) R_icc sqrt|g| s^0 ^ s^1 ^ s^2 ^ s^3."""
    dens = M.metric.sqrt_abs_det * mat_det(M.solder)
    coef = ex.mul(1.0 / (16 * math.pi * G), ricci_contraction(M), dens)
    return MatrixForm(4, {(0, 1, 2, 3): [[coef]]}, (1, 1))


def coordinate_change(M: MetricAffineData, G, G_inv=None) -> MetricAffineData:
    """Right GL(4) action: Gamma' = G^-1 Gamma G + G^-1 dG, g' = G^T g G, sR' = G^-1 sR G, T' = G^-1 T."""
    from .gauge import act

    G = as_matrix(G)
    Gi = mat_inv(G) if G_inv is None else as_matrix(G_inv)
    Gamma = act(connection(M.Gamma), G, Gi).form
    Gf, Gif = zero_form(G), zero_form(Gi)
    sR = Gif @ M.sR @ Gf
    T = Gif @ M.T
    g = mat_mul(mat_mul(G.T.copy(), M.metric.g), G)
    gi = mat_mul(mat_mul(Gi, M.metric.inverse), Gi.T.copy())
    sq = M.metric.sqrt_abs_det * mat_det(G)
    return MetricAffineData(Gamma, Metric(g, gi, sq), sR, T, mat_mul(Gi, M.solder), mat_mul(M.solder_inv, G))


def christoffel(metric: Metric) -> list:
    """Gamma^l_{mu nu} as nested lists [l][mu][nu] of Expr."""
    g, gi = metric.g, metric.inverse
    dg = [[[ex.diff(g[a, b], c) for c in range(DIM)] for b in range(DIM)] for a in range(DIM)]
    out = [[[None] * DIM for _ in range(DIM)] for _ in range(DIM)]
    for l in range(DIM):
        for mu in range(DIM):
            for nu in range(mu, DIM):
                terms = []
                for k in range(DIM):
                    if gi[l, k].is_zero:
                        continue
                    s = ex.add(dg[k][nu][mu], dg[k][mu][nu], -dg[mu][nu][k])
                    if not s.is_zero:
                        terms.append(gi[l, k] * s)
                v = ex.mul(ex.Fraction(1, 2), ex.add(*terms)) if terms else ex.ZERO
                out[l][mu][nu] = out[l][nu][mu] = v
    return out


def levi_civita_spin_connection(e, e_inv=None) -> MatrixForm:
    """A = e Gamma_LC e^-1 - de e^-1, the torsion-free so(1,3) connection of the tetrad."""
    e = as_matrix(e)
    ei = mat_inv(e) if e_inv is None else as_matrix(e_inv)
    chris = christoffel(induced_metric(e, ei))
    comps = []
    for rho in range(DIM):
        gam = as_matrix([[chris[l][rho][nu] for nu in range(DIM)] for l in range(DIM)])
        de = np.asarray(np.frompyfunc(lambda x: ex.diff(x, rho), 1, 1)(e), dtype=object)
        comps.append(mat_mul(mat_mul(e, gam), ei) - mat_mul(de, ei))
    return one_form(comps)
