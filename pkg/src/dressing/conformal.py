"""Conformal Cartan geometry: boost dressing, tractors, twistors, Weyl cocycle.

The 6x6 conformal Cartan connection is written in blocks

    [[a, P, 0], [theta, A, P^t], [0, theta^t, -a]]

with a scalar 1-form a, a row covector 1-form P, the soldering column
theta = e dx, and A in so(1,3).  Its spin version is the su(2,2) image under
the algebra isomorphism of ``groups.so24_to_su22``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction

import numpy as np

from . import expr as ex
from . import groups
from .forms import (
    DIM,
    MatrixForm,
    as_matrix,
    eye,
    mat_inv,
    mat_mul,
    one_form,
    values,
    zero_form,
    zeros,
)
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
    section,
)
from .gr_tetrad import ETA_M, levi_civita_spin_connection, soldering

__all__ = [
    "ConformalCartan",
    "build_conformal",
    "conformal_curvature",
    "boost_q",
    "boost_dressing",
    "DressedTractor",
    "DressedTwistor",
    "dress_tractor",
    "embed_lorentz_map",
    "lorentz_transform",
    "weyl_transform",
    "k1_transform",
    "weyl_upsilon",
    "weyl_cocycle",
    "weyl_cocycle_spin",
    "tractor_weyl_closed",
    "twistor_weyl_closed",
    "varpi_weyl_closed",
    "tractor_metric",
    "twistor_helicity",
    "normal_cartan",
    "schouten",
    "cotton_block",
    "build_spin_cartan",
    "spin_boost_dressing",
    "dress_twistor",
    "weyl_ghost",
    "lorentz_ghost",
    "boost_ghost",
    "weyl_ghost_c",
    "twistor_covariant_closed",
    "composite_ghost",
    "tractor_covariant_closed",
]

_ETA_DIAG = (1, -1, -1, -1)
HALF = Fraction(1, 2)


def _eta_T_col(row: MatrixForm) -> MatrixForm:
    """Column (r eta^-1)^T of a 1x4 row form."""
    return (row @ zero_form(ETA_M)).T


def _eta_T_row(col: MatrixForm) -> MatrixForm:
    """Row theta^T eta of a 4x1 column form."""
    return col.T @ zero_form(ETA_M)


def build_conformal(a: MatrixForm, A: MatrixForm, theta: MatrixForm, P: MatrixForm) -> MatrixForm:
    return MatrixForm.block(
        [
            [a, P, None],
            [theta, A, _eta_T_col(P)],
            [None, _eta_T_row(theta), -a],
        ]
    )


@dataclass(frozen=True)
class ConformalCartan:
    form: MatrixForm
    e: np.ndarray
    e_inv: np.ndarray

    @staticmethod
    def from_blocks(a, A, e, P, e_inv=None) -> "ConformalCartan":
        e = as_matrix(e)
        ei = mat_inv(e) if e_inv is None else as_matrix(e_inv)
        return ConformalCartan(build_conformal(a, A, soldering(e), P), e, ei)

    @property
    def a(self) -> MatrixForm:
        return self.form[0:1, 0:1]

    @property
    def P(self) -> MatrixForm:
        return self.form[0:1, 1:5]

    @property
    def theta(self) -> MatrixForm:
        return self.form[1:5, 0:1]

    @property
    def A(self) -> MatrixForm:
        return self.form[1:5, 1:5]

    def field(self) -> Field:
        return connection(self.form, "so(2,4)")

    def with_form(self, form: MatrixForm, e=None, e_inv=None) -> "ConformalCartan":
        return ConformalCartan(form, self.e if e is None else as_matrix(e), self.e_inv if e_inv is None else as_matrix(e_inv))


def conformal_curvature(varpi: MatrixForm) -> dict[str, MatrixForm]:
    """Blocks f, C, Theta, W of d varpi + varpi ^ varpi (plus the whole 'Omega')."""
    om = curvature(connection(varpi)).form
    return {"Omega": om, "f": om[0:1, 0:1], "C": om[0:1, 1:5], "Theta": om[1:5, 0:1], "W": om[1:5, 1:5]}


def boost_q(a: MatrixForm, e_inv: np.ndarray) -> list:
    """q_b = a_mu e^mu_b."""
    out = []
    for b in range(DIM):
        terms = [a.comps[(mu,)][0, 0] * e_inv[mu, b] for mu in range(DIM)]
        terms = [t for t in terms if not t.is_zero]
        out.append(ex.add(*terms) if terms else ex.ZERO)
    return out


def _k1(r) -> np.ndarray:
    return as_matrix(groups.k1_matrix([ex._lift(x) for x in r]))


def boost_dressing(varpi: ConformalCartan) -> GaugeMap:
    """u_1 = K1(q) with q = a e^-1; it kills the a-block of the dressed connection."""
    q = boost_q(varpi.a, varpi.e_inv)
    return GaugeMap(_k1(q), _k1([-x for x in q]), "K1", MapClass.DRESSING, erased="K1")


@dataclass
class DressedTractor:
    """Dressed connection and section; D_1 phi_1 and Omega_1 are computed on first use."""

    varpi1: ConformalCartan
    phi1: MatrixForm | None
    u1: GaugeMap

    @cached_property
    def D(self) -> MatrixForm:
        return self.phi1.d() + self.varpi1.form @ self.phi1

    @cached_property
    def Omega(self) -> MatrixForm:
        return curvature(self.varpi1.field()).form

    def __iter__(self):
        yield from (self.varpi1, self.phi1, self.D if self.phi1 is not None else None, self.Omega)


def dress_tractor(varpi: ConformalCartan, phi: MatrixForm | None = None, u1: GaugeMap | None = None) -> DressedTractor:
    """Dress varpi and a tractor column phi (6x1 0-form) with u_1."""
    u1 = boost_dressing(varpi) if u1 is None else u1
    w1 = dress(varpi.field(), u1)
    phi1 = None if phi is None else dress(section(phi), u1).form
    return DressedTractor(varpi.with_form(w1.form), phi1, u1)


def tractor_covariant_closed(varpi1: ConformalCartan, phi1: MatrixForm) -> MatrixForm:
    """Column (d rho + P l ; nabla l + theta rho + P^t s ; ds + theta^t l) for a = 0."""
    rho, l, s = phi1[0:1, 0:1], phi1[1:5, 0:1], phi1[5:6, 0:1]
    P, th, A = varpi1.P, varpi1.theta, varpi1.A
    top = rho.d() + P @ l
    mid = l.d() + A @ l + th @ rho + _eta_T_col(P) @ s
    bot = s.d() + _eta_T_row(th) @ l
    return MatrixForm.block([[top], [mid], [bot]])


def embed_lorentz_map(S, S_inv) -> GaugeMap:
    m, mi = eye(6), eye(6)
    m[1:5, 1:5] = as_matrix(S)
    mi[1:5, 1:5] = as_matrix(S_inv)
    return GaugeMap(m, mi, "SO(1,3)<H")


def _scaled(m: np.ndarray, f) -> np.ndarray:
    return np.asarray(np.frompyfunc(lambda x: ex.mul(x, f), 1, 1)(m), dtype=object)


def lorentz_transform(varpi: ConformalCartan, S, S_inv) -> ConformalCartan:
    """Gauge action of diag(1, S, 1); the tetrad goes to S^-1 e."""
    g = embed_lorentz_map(S, S_inv)
    form = act(varpi.field(), g.value, g.inverse).form
    return varpi.with_form(form, mat_mul(as_matrix(S_inv), varpi.e), mat_mul(varpi.e_inv, as_matrix(S)))


def weyl_transform(varpi: ConformalCartan, z) -> ConformalCartan:
    """Gauge action of Z = diag(z, 1, 1, 1, 1, 1/z); the tetrad goes to z e."""
    z = ex._lift(z)
    zi = ex.power(z, -1)
    form = act(varpi.field(), _weyl_Z(z), _weyl_Z(zi)).form
    return varpi.with_form(form, _scaled(varpi.e, z), _scaled(varpi.e_inv, zi))


def k1_transform(varpi: ConformalCartan, r) -> ConformalCartan:
    """Gauge action of K1(r); theta, hence the tetrad, is unchanged."""
    form = act(varpi.field(), _k1(r), _k1([-ex._lift(x) for x in r])).form
    return varpi.with_form(form)


# Weyl rescalings -------------------------------------------------------------


def weyl_upsilon(z, e_inv) -> list:
    """Upsilon_a = z^-1 d_mu z e^mu_a."""
    z = ex._lift(z)
    zi = ex.power(z, -1)
    out = []
    for a in range(DIM):
        terms = [ex.mul(zi, ex.diff(z, mu), e_inv[mu, a]) for mu in range(DIM) if not e_inv[mu, a].is_zero]
        terms = [t for t in terms if not t.is_zero]
        out.append(ex.add(*terms) if terms else ex.ZERO)
    return out


def _weyl_Z(z) -> np.ndarray:
    z = ex._lift(z)
    m = eye(6)
    m[0, 0], m[5, 5] = z, ex.power(z, -1)
    return m


def weyl_cocycle(e_inv) -> Cocycle:
    """C(z) = K1(Upsilon(z)) Z(z) for the tetrad with inverse e_inv."""
    e_inv = as_matrix(e_inv)

    def base(z):
        return _k1(weyl_upsilon(z, e_inv))

    def base_inv(z):
        return _k1([-x for x in weyl_upsilon(z, e_inv)])

    return Cocycle(
        CocycleSpec(
            base=base,
            base_inv=base_inv,
            twist=_weyl_Z,
            twist_inv=lambda z: _weyl_Z(ex.power(ex._lift(z), -1)),
            mul=lambda x, y: ex.mul(x, y),
            group="H",
        )
    )


def _kbar1(r, sign=1) -> np.ndarray:
    """[[1, -i sign rbar], [0, 1]] with rbar = r_a sigma^a (sigma^a = sigma_a / 2)."""
    rb = groups.cobar_map([ex._lift(x) for x in r])
    m = eye(4)
    for i in range(2):
        for j in range(2):
            m[i, 2 + j] = ex.mul(-sign, ex.I, rb[i, j])
    return m


def _weyl_Zbar(z) -> np.ndarray:
    h = ex.sqrt(ex._lift(z))
    hi = ex.power(h, -1)
    m = eye(4)
    m[0, 0] = m[1, 1] = h
    m[2, 2] = m[3, 3] = hi
    return m


def weyl_cocycle_spin(e_inv) -> Cocycle:
    """Cbar(z) = [[z^1/2, -i z^-1/2 Upsilon_bar], [0, z^-1/2]]."""
    e_inv = as_matrix(e_inv)
    return Cocycle(
        CocycleSpec(
            base=lambda z: _kbar1(weyl_upsilon(z, e_inv)),
            base_inv=lambda z: _kbar1(weyl_upsilon(z, e_inv), sign=-1),
            twist=_weyl_Zbar,
            twist_inv=lambda z: _weyl_Zbar(ex.power(ex._lift(z), -1)),
            mul=lambda x, y: ex.mul(x, y),
            group="SU(2,2)",
        )
    )


def _row(vals) -> MatrixForm:
    return zero_form([list(vals)])


def tractor_weyl_closed(phi1: MatrixForm, z, ups) -> MatrixForm:
    """(z^-1 (rho - Upsilon l + s Upsilon^2 / 2) ; l - Upsilon^t s ; z s)."""
    z = ex._lift(z)
    zi = ex.power(z, -1)
    U = _row(ups)
    Ut = _eta_T_col(U)
    U2 = (U @ Ut).scalar()
    rho, l, s = phi1[0:1, 0:1], phi1[1:5, 0:1], phi1[5:6, 0:1]
    top = (rho - U @ l + s * ex.mul(HALF, U2)) * zi
    mid = l - Ut @ s
    bot = s * z
    return MatrixForm.block([[top], [mid], [bot]])


def twistor_weyl_closed(psi1: MatrixForm, z, ups) -> MatrixForm:
    """(z^-1/2 (pi + i Upsilon_bar omega) ; z^1/2 omega)."""
    h = ex.sqrt(ex._lift(z))
    hi = ex.power(h, -1)
    ub = zero_form(groups.cobar_map([ex._lift(x) for x in ups]))
    pi, om = psi1[0:2, 0:1], psi1[2:4, 0:1]
    top = (pi + (ub @ om) * ex.I) * hi
    return MatrixForm.block([[top], [om * h]])


def varpi_weyl_closed(varpi1: ConformalCartan, z, ups) -> MatrixForm:
    """Blocks of the Weyl-transformed dressed connection (a-block stays zero):

    P -> z^-1 (P + nabla Upsilon - Upsilon theta Upsilon + Upsilon^2 theta^t / 2),
    A -> A + theta Upsilon - Upsilon^t theta^t,  theta -> z theta.
    """
    z = ex._lift(z)
    zi = ex.power(z, -1)
    U = _row(ups)
    Ut = _eta_T_col(U)
    U2 = (U @ Ut).scalar()
    P, th, A = varpi1.P, varpi1.theta, varpi1.A
    thT = _eta_T_row(th)
    nablaU = U.d() - U @ A
    P2 = (P + nablaU - U @ th @ U + thT * ex.mul(HALF, U2)) * zi
    A2 = A + th @ U - Ut @ thT
    th2 = th * z
    zero = MatrixForm.zero(1, (1, 1))
    return build_conformal(zero, A2, th2, P2)


def tractor_metric(phi: MatrixForm, phi2: MatrixForm) -> MatrixForm:
    """phi^T Sigma phi' = -s rho' + l^T eta l' - rho s'."""
    return phi.T @ zero_form(as_matrix(groups.SIGMA)) @ phi2


def twistor_helicity(psi: MatrixForm) -> MatrixForm:
    """(pi^* omega + omega^* pi) / 2 = psi^* Sigma_bar psi / 2."""
    return (psi.H @ zero_form(as_matrix(groups.SIGMA_BAR)) @ psi) * HALF


# normal connection ---------------------------------------------------------------


def _frame_components(form2: MatrixForm, e_inv: np.ndarray) -> np.ndarray:
    """R[i, j, c, d]: matrix 2-form components in the coframe theta (e_inv = e^-1)."""
    rows, cols = form2.shape
    full = {}
    for (m, n), mat in form2.comps.items():
        full[(m, n)] = mat
        full[(n, m)] = -mat
    out = np.empty((rows, cols, DIM, DIM), dtype=object)
    out.fill(ex.ZERO)
    for c in range(DIM):
        for d in range(DIM):
            if c == d:
                continue
            for i in range(rows):
                for j in range(cols):
                    terms = []
                    for (m, n), mat in full.items():
                        x = mat[i, j]
                        if x.is_zero or e_inv[m, c].is_zero or e_inv[n, d].is_zero:
                            continue
                        terms.append(ex.mul(x, e_inv[m, c], e_inv[n, d]))
                    if terms:
                        out[i, j, c, d] = ex.add(*terms)
    return out


def schouten(A: MatrixForm, e: np.ndarray, e_inv: np.ndarray) -> np.ndarray:
    """P_{bd} = -(Ric_{bd} - R eta_{bd} / 6) / 2 with Ric_{bd} = R^a_{bad}."""
    R = curvature(connection(A)).form
    comp = _frame_components(R, e_inv)
    ric = [[ex.add(*[comp[a, b, a, d] for a in range(DIM)]) for d in range(DIM)] for b in range(DIM)]
    rs = ex.add(*[ric[b][b] * _ETA_DIAG[b] for b in range(DIM)])
    P = np.empty((DIM, DIM), dtype=object)
    for b in range(DIM):
        for d in range(DIM):
            v = ric[b][d]
            if b == d:
                v = v - ex.mul(Fraction(1, 6), rs, _ETA_DIAG[b])
            P[b, d] = ex.mul(-HALF, v)
    return P


def normal_cartan(e, e_inv=None) -> ConformalCartan:
    """Normal conformal Cartan connection of the metric e^T eta e, in the gauge a = 0."""
    e = as_matrix(e)
    ei = mat_inv(e) if e_inv is None else as_matrix(e_inv)
    A = levi_civita_spin_connection(e, ei)
    Pf = schouten(A, e, ei)
    # P_b = P_{bd} theta^d = P_{bd} e^d_mu dx^mu
    comps = [mat_mul(as_matrix(Pf), e[:, mu : mu + 1]).T.copy() for mu in range(DIM)]
    P = one_form(comps)
    a = MatrixForm.zero(1, (1, 1))
    return ConformalCartan(build_conformal(a, A, soldering(e), P), e, ei)


def cotton_block(varpi: ConformalCartan) -> MatrixForm:
    """C = dP + a ^ P + P ^ A, the Cotton block (nabla P when a = 0)."""
    P, a, A = varpi.P, varpi.a, varpi.A
    return P.d() + a @ P + P @ A


# spin version ---------------------------------------------------------------------


def build_spin_cartan(varpi: MatrixForm) -> MatrixForm:
    """Componentwise image of the so(2,4) connection under the iso to su(2,2)."""
    comps = {}
    for idx, m in varpi.comps.items():
        comps[idx] = groups.so24_to_su22(*groups.so24_params(m))
    return MatrixForm(varpi.degree, comps, (4, 4))


def spin_boost_dressing(varpi: ConformalCartan) -> GaugeMap:
    """ubar_1 = [[1, -i qbar], [0, 1]]."""
    q = boost_q(varpi.a, varpi.e_inv)
    return GaugeMap(_kbar1(q), _kbar1(q, sign=-1), "SU(2,2)", MapClass.DRESSING, erased="K1")


@dataclass
class DressedTwistor:
    """Dressed spin connection and twistor; D_1 psi_1 and the curvature are lazy."""

    form: MatrixForm
    psi1: MatrixForm | None
    u1: GaugeMap

    @cached_property
    def D(self) -> MatrixForm:
        return self.psi1.d() + self.form @ self.psi1

    @cached_property
    def Omega(self) -> MatrixForm:
        return curvature(connection(self.form)).form

    def __iter__(self):
        yield from (self.form, self.psi1, self.D if self.psi1 is not None else None, self.Omega)


def dress_twistor(varpi: ConformalCartan, psi: MatrixForm | None = None) -> DressedTwistor:
    """Dress the spin connection and a twistor column psi (4x1 0-form) with ubar_1."""
    wb = connection(build_spin_cartan(varpi.form), "su(2,2)")
    ub = spin_boost_dressing(varpi)
    wb1 = dress(wb, ub)
    psi1 = None if psi is None else dress(section(psi), ub).form
    return DressedTwistor(wb1.form, psi1, ub)


def twistor_covariant_closed(varpi1: ConformalCartan, psi1: MatrixForm) -> MatrixForm:
    """(nabla pi - i Pbar omega ; nabla omega + i thetabar pi) for a = 0, with
    Abar = sl(2,C) image of A, thetabar = theta^a sigma_a and Pbar = P_a sigma^a."""
    pi, om = psi1[0:2, 0:1], psi1[2:4, 0:1]
    A, P, th = varpi1.A, varpi1.P, varpi1.theta
    ab, abd, pb, tb = [], [], [], []
    for mu in range(DIM):
        sb = as_matrix(groups.so13_to_sl2c(A.comps[(mu,)]))
        ab.append(sb)
        abd.append(-np.asarray(np.frompyfunc(ex.conj, 1, 1)(sb.T), dtype=object))
        pb.append(as_matrix(groups.cobar_map(list(P.comps[(mu,)][0, :]))))
        tb.append(as_matrix(groups.bar_map(list(th.comps[(mu,)][:, 0]))))
    Ab, Abd, Pb, Tb = one_form(ab), one_form(abd), one_form(pb), one_form(tb)
    top = pi.d() + Abd @ pi - (Pb @ om) * ex.I
    bot = om.d() + Ab @ om + (Tb @ pi) * ex.I
    return MatrixForm.block([[top], [bot]])


# ghosts ---------------------------------------------------------------------------


def weyl_ghost(eps) -> np.ndarray:
    m = zeros(6)
    m[0, 0] = ex._lift(eps)
    m[5, 5] = -ex._lift(eps)
    return m


def lorentz_ghost(s) -> np.ndarray:
    m = zeros(6)
    m[1:5, 1:5] = as_matrix(s)
    return m


def boost_ghost(iota) -> np.ndarray:
    return as_matrix(groups.so24_element(ex.ZERO, zeros(4), [ex.ZERO] * 4, [ex._lift(x) for x in iota]))


def weyl_ghost_c(eps, e_inv) -> np.ndarray:
    """c(eps) = [[eps, d eps, 0], [0, 0, d eps^t], [0, 0, -eps]] with (d eps)_a = d_mu eps e^mu_a."""
    eps = ex._lift(eps)
    de = []
    for a in range(DIM):
        terms = [ex.mul(ex.diff(eps, mu), e_inv[mu, a]) for mu in range(DIM)]
        terms = [t for t in terms if not t.is_zero]
        de.append(ex.add(*terms) if terms else ex.ZERO)
    m = zeros(6)
    m[0, 0], m[5, 5] = eps, -eps
    for a in range(DIM):
        m[0, 1 + a] = de[a]
        m[1 + a, 5] = ex.mul(_ETA_DIAG[a], de[a])
    return m



def _boost_from_fields(fields, base: ConformalCartan) -> GaugeMap:
    """u_1 rebuilt from a t-shifted connection, with e^-1 kept to first order in t."""
    from .brst import T, t_derivative

    th = fields["varpi"].form[1:5, 0:1]
    e_t = as_matrix([[th.comps[(mu,)][a, 0] for mu in range(DIM)] for a in range(DIM)])
    corr = mat_mul(mat_mul(base.e_inv, t_derivative(e_t)), base.e_inv)
    ei_t = base.e_inv - np.asarray(np.frompyfunc(lambda x: ex.mul(T, x), 1, 1)(corr), dtype=object)
    return boost_dressing(ConformalCartan(fields["varpi"].form, e_t, ei_t))


def composite_ghost(varpi: ConformalCartan, xi):
    """(u_1, s u_1, v) for a ghost parameter xi in so(2,4), v = u^-1 xi u + u^-1 s u."""
    from .brst import dressed_ghost, map_variation

    su = map_variation(lambda f: _boost_from_fields(f, varpi), {"varpi": varpi.field()}, lambda name, f: xi)
    u1 = boost_dressing(varpi)
    return u1, su, dressed_ghost(u1, xi, su)
