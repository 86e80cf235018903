"""Property registry and the seeded verification runner.

Every property is a function ``(trial, rng) -> residual`` where the residual
is a float (compared with the tolerance), a bool (exact/symbolic checks) or
a dict of named float residuals (the maximum is compared).  Random
generators are derived from ``(seed, key, trial)`` by ``SeedSequence``
splitting, so results do not depend on which other properties run.
"""

from __future__ import annotations

import json
import math
import time
import zlib
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from fractions import Fraction
from importlib import resources
from typing import Any, Callable

import numpy as np

from . import brst
from . import conformal as cf
from . import electroweak as ew
from . import expr as ex
from . import fixtures as fx
from . import groups
from . import gr_tetrad as gr
from . import normal
from . import oracles
from . import random_fields as rf
from .forms import DIM, _indices, mat_mul, values, zero_form
from .gauge import (
    GaugeMap,
    act,
    connection,
    curvature,
    dress,
    gauge_transform,
    matrix_values,
    max_deviation,
    residual_adjoint_transform,
    residual_twisted_transform,
    section,
    tensor,
)

__all__ = [
    "SCHEMA",
    "SUITES",
    "Property",
    "REGISTRY",
    "SuiteConfig",
    "UsageError",
    "run_suite",
    "report_body_json",
    "explain",
    "check_coverage",
]

SCHEMA = "dressing-report/1"
SUITES = ("core", "brst", "ew", "gr", "conformal", "all")


class UsageError(ValueError):
    """Bad suite name, tolerance override or property id."""


@dataclass(frozen=True)
class Property:
    id: str
    family: str
    tolerance: float
    fn: Callable
    statement: str
    paper_ref: str = ""

    @property
    def suite(self) -> str:
        return self.id.split(".", 1)[0]


_PROPS: list[Property] = []


def _prop(pid: str, family: str, tol: float):
    def deco(fn):
        doc = " ".join((fn.__doc__ or "").split())
        _PROPS.append(Property(pid, family, tol, fn, doc))
        return fn

    return deco


# trial context -----------------------------------------------------------------------


def _key(s: str) -> int:
    return zlib.crc32(s.encode())


class Trial:
    """Per-trial data: sample points, lazily built fixtures, and a memo of shared results."""

    def __init__(self, seed: int, index: int, n_points: int, overrides: dict):
        self.seed, self.index, self.n_points = seed, index, n_points
        self._overrides = overrides
        self._fixtures: dict[str, Any] = {}
        self._memo: dict[str, Any] = {}
        self.points = rf.sample_points(self.rng("points"), n_points)

    def rng(self, key: str) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence([self.seed, _key(key), self.index]))

    def fixture(self, family: str):
        if family not in self._fixtures:
            if family in self._overrides:
                self._fixtures[family] = self._overrides[family]
            else:
                self._fixtures[family] = fx.random_fixture(family, self.rng("fixture:" + family))
        return self._fixtures[family]

    def memo(self, key: str, build: Callable[[], Any]):
        if key not in self._memo:
            self._memo[key] = build()
        return self._memo[key]


def _dev(a, b, pts) -> float:
    return max_deviation(a, b, pts)


def _max_abs(forms, pts) -> float:
    vals = values(list(forms), pts)
    return max((float(np.max(np.abs(v))) if v.size else 0.0) for v in vals)


def _mat_dev(m1, m2, pts) -> float:
    return float(np.max(np.abs(matrix_values(m1, pts) - matrix_values(m2, pts))))


def _all_zero(form) -> bool:
    return all(normal.is_zero(x) for m in form.comps.values() for x in m.flat)


# shared constructions -------------------------------------------------------------


def _ew(t: Trial):
    return t.fixture("ew").F


def _ew_dressed(t: Trial):
    return t.memo("ew.dressed", lambda: ew.dress_ew(_ew(t), t.points))


def _su2_param(rng):
    return rf.algebra_form(rng, rf.su2_basis(), degree=0, density=1.0, scale=Fraction(1, 2)).comps[()]


def _ew_su2(t: Trial):
    def build():
        beta = rf.su2_map(t.rng("ew.su2_map"), scale=Fraction(1, 2))
        B = GaugeMap(beta.value, beta.inverse, "SU(2)")
        F2 = ew.transform_fields(_ew(t), beta=B)
        return B, F2, ew.dress_ew(F2, t.points)

    return t.memo("ew.su2", build)


def _ew_u1(t: Trial):
    def build():
        theta = rf.random_poly(t.rng("ew.u1_map"))
        al, _ = ew.u1_map(theta)
        F3 = ew.transform_fields(_ew(t), alpha=al)
        return al, F3, ew.dress_ew(F3, t.points)

    return t.memo("ew.u1", build)


def _gr(t: Trial):
    return t.fixture("gr").P


def _gr_dressed(t: Trial):
    return t.memo("gr.dressed", lambda: gr.tetrad_dress(_gr(t), t.points))


def _gr_lorentz(t: Trial):
    def build():
        L = rf.lorentz_map(t.rng("gr.lorentz_map"), scale=Fraction(1, 2))
        P2 = gr.lorentz_transform(_gr(t), L.value, L.inverse)
        return L, P2, gr.tetrad_dress(P2)

    return t.memo("gr.lorentz", build)


def _cf(t: Trial) -> fx.ConformalFixture:
    return t.fixture("conformal")


def _cf_dressed(t: Trial):
    def build():
        c = _cf(t)
        d = cf.dress_tractor(c.varpi, c.phi)
        phi2 = dress(section(c.phi2), d.u1).form
        return d, phi2

    return t.memo("conformal.dressed", build)


def _cf_lorentz(t: Trial):
    def build():
        c = _cf(t)
        L = rf.lorentz_map(t.rng("conformal.lorentz_map"), scale=Fraction(1, 2))
        S = cf.embed_lorentz_map(L.value, L.inverse)
        WS = cf.lorentz_transform(c.varpi, L.value, L.inverse)
        d = cf.dress_tractor(WS, zero_form(S.inverse) @ c.phi)
        phi2 = dress(section(zero_form(S.inverse) @ c.phi2), d.u1).form
        return L, S, WS, d, phi2

    return t.memo("conformal.lorentz", build)


def _cf_weyl(t: Trial):
    def build():
        c = _cf(t)
        z = c.z
        Zi = rf.weyl_matrix(ex.power(z, -1))
        Wz = cf.weyl_transform(c.varpi, z)
        d = cf.dress_tractor(Wz, zero_form(Zi) @ c.phi)
        phi2 = dress(section(zero_form(Zi) @ c.phi2), d.u1).form
        return Wz, d, phi2

    return t.memo("conformal.weyl", build)


def _cf_twistor(t: Trial):
    return t.memo("conformal.twistor", lambda: cf.dress_twistor(_cf(t).varpi, _cf(t).psi))


def _cf_normal(t: Trial):
    def build():
        return [(label, cf.normal_cartan(e, ei)) for label, e, ei in _cf(t).normal_tetrads]

    return t.memo("conformal.normal", build)


# core ----------------------------------------------------------------------------------


@_prop("core.dd_zero", "forms", 0.0)
def _core_dd(t: Trial, rng):
    """d(d f) vanishes identically on random polynomial forms of degree 0 to 3."""
    return all(_all_zero(f.d().d()) for f in t.fixture("forms").forms)


@_prop("core.leibniz", "forms", 0.0)
def _core_leibniz(t: Trial, rng):
    """d(f ^ g) = df ^ g + (-1)^p f ^ dg, exactly, for random forms f (degree p) and g."""
    fs = t.fixture("forms").forms
    for f in fs[:2]:
        for g in fs[:2]:
            lhs = (f @ g).d()
            rhs = f.d() @ g + (f @ g.d()) * ((-1) ** f.degree)
            if not _all_zero(lhs - rhs):
                return False
    return True


@_prop("core.dressing_invariance", "ew+gr+conformal", 1e-10)
def _core_dressing(t: Trial, rng):
    """Dressed fields are invariant under gauge maps of the erased subgroup (SU(2), SO(1,3), K1)."""
    return {"su2": _ew_su2_erasure(t, rng), "so13": _gr_erasure(t, rng), "k1": _cf_k1_erasure(t, rng)}


@_prop("core.curvature_naturality", "ew", 1e-9)
def _core_curv(t: Trial, rng):
    """curvature(omega^u) = u^-1 Omega u and D^u D^u phi^u = Omega^u phi^u."""
    F = _ew(t)
    u = _ew_dressed(t).u
    om = F.total_connection()
    Om = curvature(om).form
    omu = dress(om, u)
    uf, uif = zero_form(u.value), zero_form(u.inverse)
    r1 = _dev(curvature(omu).form, uif @ Om @ uf, t.points)
    phiu = dress(section(F.phi), u).form
    D = phiu.d() + omu.form @ phiu
    DD = D.d() + omu.form @ D
    r2 = _dev(DD, curvature(omu).form @ phiu, t.points)
    return {"curvature": r1, "second_derivative": r2}


@_prop("core.bilinear_compat", "ew", 1e-9)
def _core_bilinear(t: Trial, rng):
    """The dressed covariant derivative preserves the Hermitian form: d<phi,phi> = <D phi,phi> + <phi,D phi>."""
    F = _ew(t)
    u = _ew_dressed(t).u
    omu = dress(F.total_connection(), u).form
    phiu = dress(section(F.phi), u).form
    D = phiu.d() + omu @ phiu
    lhs = (phiu.H @ phiu).d()
    rhs = D.H @ phiu + phiu.H @ D
    return _dev(lhs, rhs, t.points)


@_prop("core.adjoint_residual", "conformal", 1e-9)
def _core_adjoint(t: Trial, rng):
    """Adjoint-compatible dressing (u1^S = S^-1 u1 S): residual Lorentz law equals the two-path result."""
    c = _cf(t)
    d, _ = _cf_dressed(t)
    L, S, WS, dS, _ = _cf_lorentz(t)
    u1S = dS.u1
    closed = residual_adjoint_transform(d.varpi1.field(), S, d.u1, u1S, t.points)
    r_conn = _dev(closed.form, dS.varpi1.form, t.points)
    r_sec = _dev(gauge_transform(section(d.phi1), S).form, dS.phi1, t.points)
    r_map = _mat_dev(u1S.value, mat_mul(mat_mul(S.inverse, d.u1.value), S.value), t.points)
    return {"connection": r_conn, "section": r_sec, "dressing_field": r_map}


@_prop("core.twisted_residual", "ew", 1e-9)
def _core_twisted(t: Trial, rng):
    """Twisted residual U(1) law: B, G transform through C(alpha) = diag(alpha, 1/alpha); eta is invariant."""
    F = _ew(t)
    D1 = _ew_dressed(t)
    al, F3, D3 = _ew_u1(t)
    C = ew.alpha_tilde_cocycle()
    j = al.value[0, 0]
    rB = _dev(residual_twisted_transform(connection(D1.B, "su(2)", F.g), j, C), D3.B, t.points)
    rG = _dev(residual_twisted_transform(tensor(D1.G), j, C), D3.G, t.points)
    r_eta = _mat_dev([[D1.eta]], [[D3.eta]], t.points)
    return {"B": rB, "G": rG, "eta": r_eta}


@_prop("core.twisted_composition", "conformal", 1e-10)
def _core_twisted_comp(t: Trial, rng):
    """Two successive Weyl rescalings z, z': u1 rebuilt from the transformed fields equals Z'^-1 Z^-1 u1 C(z z')."""
    c = _cf(t)
    z, z2 = c.z, c.z2
    W2 = cf.weyl_transform(cf.weyl_transform(c.varpi, z), z2)
    u_two = cf.boost_dressing(W2).value
    u1 = cf.boost_dressing(c.varpi).value
    C = cf.weyl_cocycle(c.varpi.e_inv)
    zz = ex.mul(z, z2)
    inv = mat_mul(rf.weyl_matrix(ex.power(z2, -1)), rf.weyl_matrix(ex.power(z, -1)))
    rhs = mat_mul(mat_mul(inv, u1), C(zz).value)
    return _mat_dev(u_two, rhs, t.points)


@_prop("core.cocycle", "conformal", 1e-10)
def _core_cocycle(t: Trial, rng):
    """Cocycle identity C(z z') = C(z) C_{pz}(z') = C(z') Z'^-1 C(z) Z' for the Weyl maps C and Cbar."""
    c = _cf(t)
    ei = c.varpi.e_inv
    C, Cs = cf.weyl_cocycle(ei), cf.weyl_cocycle_spin(ei)
    pairs = [(c.z, c.z2)] + [(rf.weyl_factor(rng, Fraction(1, 2)), rf.weyl_factor(rng, Fraction(1, 2))) for _ in range(2)]
    out = 0.0
    for z, z2 in pairs:
        out = max(out, C.identity_residual(z, z2, t.points), Cs.identity_residual(z, z2, t.points))
        out = max(out, C.identity_residual(z2, z, t.points), Cs.identity_residual(z2, z, t.points))
    return out


@_prop("core.group_membership", "none", 1e-10)
def _core_membership(t: Trial, rng):
    """Random maps from every group constructor pass their membership residual."""
    half = Fraction(1, 2)
    maps = [
        ("SU(2)", rf.su2_map(rng, half).value),
        ("U(1)", rf.u1_map(rng, 1, half).value),
        ("SO(1,3)", rf.lorentz_map(rng, half).value),
        ("SL(2,C)", rf.lorentz_map(rng, half).spin),
        ("K1", rf.k1_map(rng, half)[0].value),
        ("W", rf.weyl_matrix(rf.weyl_factor(rng, half))),
        ("SU(2,2)", rf.weyl_spin_matrix(rf.weyl_factor(rng, half))),
    ]
    return {name: GaugeMap(m, m, name).membership_residual(t.points) for name, m in maps}


@_prop("core.lie_iso", "none", 1e-10)
def _core_iso(t: Trial, rng):
    """so(2,4) -> su(2,2) preserves brackets and lands in su(2,2)."""
    basis = rf.so24_basis()
    out = {"bracket": 0.0, "membership": 0.0}
    for _ in range(5):
        x = sum(c * b for c, b in zip(rng.normal(size=15), basis))
        y = sum(c * b for c, b in zip(rng.normal(size=15), basis))
        img = lambda m: np.asarray(groups.so24_to_su22(*groups.so24_params(m)), dtype=complex)  # noqa: E731
        br = img(x @ y - y @ x)
        out["bracket"] = max(out["bracket"], float(np.max(np.abs(br - (img(x) @ img(y) - img(y) @ img(x))))))
        out["membership"] = max(out["membership"], float(groups.ALGEBRAS["su(2,2)"](img(x))))
    return out


@_prop("core.spin_cover", "none", 1e-10)
def _core_cover(t: Trial, rng):
    """The spin cover SL(2,C) -> SO(1,3) is a group morphism."""
    import scipy.linalg

    def rand_sl2c():
        m = sum((rng.normal() + 1j * rng.normal()) * 0.5 * groups.PAULI[k] for k in (1, 2, 3))
        return scipy.linalg.expm(m)

    res = 0.0
    for _ in range(5):
        a, b = rand_sl2c(), rand_sl2c()
        lhs = groups.spin_cover(a @ b)
        rhs = groups.spin_cover(a) @ groups.spin_cover(b)
        res = max(res, float(np.max(np.abs(lhs - rhs))) / max(1.0, float(np.max(np.abs(lhs)))))
    return res


@_prop("core.bar_det", "none", 1e-12)
def _core_bar_det(t: Trial, rng):
    """det(x^a sigma_a) = x^T eta x."""
    res = 0.0
    for _ in range(3):
        x = rng.normal(size=4)
        res = max(res, abs(np.linalg.det(groups.bar_map(x)) - x @ groups.ETA @ x))
    return float(res)


# brst ------------------------------------------------------------------------------------


@_prop("brst.d_squared", "forms", 0.0)
def _brst_dd(t: Trial, rng):
    """d(d xi) = 0 exactly for chart-dependent ghost parameters and for the variation d xi of a connection."""
    xi = _su2_param(rng)
    x = zero_form(xi)
    return _all_zero(x.d().d())


@_prop("brst.nilpotency", "ew", 1e-8)
def _brst_nil(t: Trial, rng):
    """delta_xi delta_zeta - delta_zeta delta_xi = delta_[xi,zeta] on connections, curvatures and sections."""
    F = _ew(t)
    xi, zeta = _su2_param(rng), _su2_param(rng)
    b = connection(F.b, "su(2)", F.g)
    fields = {"connection": b, "curvature": curvature(b), "section": section(F.phi)}
    return {k: brst.nilpotency_check(f, xi, zeta, t.points) for k, f in fields.items()}


@_prop("brst.flow_fd", "ew", 1e-7)
def _brst_fd(t: Trial, rng):
    """Variations agree with a central finite difference of the finite flow exp(t xi)."""
    F = _ew(t)
    xi = _su2_param(rng)
    pts = t.points[:5]
    out = {}
    for k, f in {"connection": connection(F.b, "su(2)", F.g), "section": section(F.phi)}.items():
        (exact,) = values([brst.brst_variation(f, xi).form], pts)
        out[k] = float(np.max(np.abs(exact - brst.flow_fd(f, xi, pts))))
    return out


@_prop("brst.derivation", "ew", 1e-9)
def _brst_derivation(t: Trial, rng):
    """delta_xi is a derivation over the wedge product of covariant objects."""
    F = _ew(t)
    xi = _su2_param(rng)
    b = connection(F.b, "su(2)", F.g)
    Om = curvature(b)
    phi = section(F.phi)
    dOm, dphi = brst.brst_variation(Om, xi).form, brst.brst_variation(phi, xi).form
    r1 = _dev(brst.brst_variation(tensor(Om.form @ Om.form), xi).form, dOm @ Om.form + Om.form @ dOm, t.points)
    r2 = _dev(brst.brst_variation(section(Om.form @ phi.form), xi).form, dOm @ phi.form + Om.form @ dphi, t.points)
    return {"tensor_tensor": r1, "tensor_section": r2}


def _ew_dress_fields(F):
    def u_of(f):
        return ew.polar_decompose(f["phi"].form)[0]

    return u_of


@_prop("brst.erasure", "ew", 1e-9)
def _brst_erasure(t: Trial, rng):
    """For xi in su(2): s u = -xi u, the dressed ghost vanishes and dressed fields have zero variation."""
    F = _ew(t)
    xi = _su2_param(rng)
    fields = {"b": connection(F.b, "su(2)", F.g), "phi": section(F.phi)}
    xi_of = lambda name, f: xi  # noqa: E731
    u = _ew_dressed(t).u
    su = brst.map_variation(lambda f: ew.polar_decompose(f["phi"].form)[0], fields, xi_of)
    r_su = _mat_dev(su, brst.predicted_map_variation(u, xi, "erased"), t.points)
    v = brst.dressed_ghost(u, xi, su)
    r_v = float(np.max(np.abs(matrix_values(v, t.points))))
    sB = brst.field_variation(lambda f: dress(f["b"], ew.polar_decompose(f["phi"].form)[0]), fields, xi_of)
    r_B = _max_abs([sB], t.points)
    return {"su": r_su, "ghost": r_v, "dressed_connection": r_B}


def _cf_ghost(t: Trial, kind: str, rng):
    c = _cf(t)
    if kind == "lorentz":
        coeffs = rng.normal(size=6) * 0.5
        xi = sum(a * b for a, b in zip(coeffs, rf.so13_basis()))
        return cf.lorentz_ghost(xi), None
    if kind == "weyl":
        eps = rf.random_poly(rng, scale=Fraction(1, 2))
        return cf.weyl_ghost(eps), cf.weyl_ghost_c(eps, c.varpi.e_inv)
    iota = [rf.random_poly(rng, scale=Fraction(1, 2)) for _ in range(4)]
    return cf.boost_ghost(iota), None


@_prop("brst.k1_ghost", "conformal", 1e-9)
def _brst_k1(t: Trial, rng):
    """A conformal-boost ghost is erased: s u1 = -xi u1 and the composite ghost vanishes."""
    xi, _ = _cf_ghost(t, "k1", rng)
    u1, su, v = cf.composite_ghost(_cf(t).varpi, xi)
    return {
        "su": _mat_dev(su, brst.predicted_map_variation(u1, xi, "erased"), t.points),
        "ghost": float(np.max(np.abs(matrix_values(v, t.points)))),
    }


@_prop("brst.adjoint_ghost", "conformal", 1e-9)
def _brst_adjoint(t: Trial, rng):
    """Lorentz ghost (adjoint case): s u1 = [u1, xi] and the dressed ghost equals xi."""
    xi, _ = _cf_ghost(t, "lorentz", rng)
    u1, su, v = cf.composite_ghost(_cf(t).varpi, xi)
    return {
        "su": _mat_dev(su, brst.predicted_map_variation(u1, xi, "adjoint"), t.points),
        "ghost": _mat_dev(v, xi, t.points),
    }


@_prop("brst.twisted_ghost", "conformal", 1e-9)
def _brst_twisted(t: Trial, rng):
    """Weyl ghost (twisted case): s u1 = -xi u1 + u1 c(eps) and the dressed ghost equals c(eps)."""
    xi, c_eps = _cf_ghost(t, "weyl", rng)
    u1, su, v = cf.composite_ghost(_cf(t).varpi, xi)
    return {
        "su": _mat_dev(su, brst.predicted_map_variation(u1, xi, "twisted", c_eps), t.points),
        "ghost": _mat_dev(v, c_eps, t.points),
    }


@_prop("brst.weyl_ghost_symbolic", "conformal", 0.0)
def _brst_weyl_sym(t: Trial, rng):
    """The composite Weyl ghost carries the entries d_mu eps e^mu_a exactly."""
    c = _cf(t)
    e, ei = c.normal_tetrads[0][1:] if c.normal_tetrads else (c.varpi.e, c.varpi.e_inv)
    varpi = cf.ConformalCartan.from_blocks(c.varpi.a, c.varpi.A, e, c.varpi.P, ei)
    xi, c_eps = _cf_ghost(t, "weyl", rng)
    c_eps = cf.weyl_ghost_c(xi[0, 0], ei)
    _, _, v = cf.composite_ghost(varpi, xi)
    cells = [(0, 0)] + [(0, 1 + a) for a in range(DIM)] + [(1 + a, 5) for a in range(DIM)] + [(5, 5)]
    return all(normal.equal(v[i, j], c_eps[i, j]) for i, j in cells)


@_prop("brst.modified", "ew+conformal", 1e-8)
def _brst_modified(t: Trial, rng):
    """Dressed fields obey s chi^u = delta_v chi^u with the dressed ghost v (SU(2) and Lorentz cases)."""
    F = _ew(t)
    xi = _su2_param(rng)
    fields = {"b": connection(F.b, "su(2)", F.g), "phi": section(F.phi)}
    xi_of = lambda name, f: xi  # noqa: E731
    D = _ew_dressed(t)
    build = lambda f: dress(f["b"], ew.polar_decompose(f["phi"].form)[0])  # noqa: E731
    sB = brst.field_variation(build, fields, xi_of)
    su = brst.map_variation(lambda f: ew.polar_decompose(f["phi"].form)[0], fields, xi_of)
    v = brst.dressed_ghost(D.u, xi, su)
    r_ew = brst.modified_brst_check(connection(D.B, "su(2)", F.g), sB, v, t.points)

    c = _cf(t)
    xl, _ = _cf_ghost(t, "lorentz", rng)
    d, _ = _cf_dressed(t)
    build_c = lambda f: dress(f["varpi"], cf._boost_from_fields(f, c.varpi))  # noqa: E731
    sW = brst.field_variation(build_c, {"varpi": c.varpi.field()}, lambda n, f: xl)
    _, _, vl = cf.composite_ghost(c.varpi, xl)
    r_cf = brst.modified_brst_check(d.varpi1.field(), sW, vl, t.points)
    return {"electroweak": r_ew, "conformal_lorentz": r_cf}


# electroweak ------------------------------------------------------------------------------


@_prop("ew.lagrangian_equality", "ew", 1e-9)
def _ew_lag(t: Trial, rng):
    """The Lagrangian in (a, b, phi) equals the one in (A, W+, W-, Z, eta), pointwise, relative error."""
    F = _ew(t)
    V = t.memo("ew.variables", lambda: ew.ew_variables(F, t.points))
    return max_deviation(ew.ew_lagrangian(F), ew.ew_lagrangian_dressed(V), t.points, relative=True)


@_prop("ew.no_cross_coupling", "ew", 1e-10)
def _ew_cross(t: Trial, rng):
    """The dressed Lagrangian has no bilinear A-Z coupling (polarization with W+- switched off)."""
    F = _ew(t)
    V = t.memo("ew.variables", lambda: ew.ew_variables(F, t.points))
    z1 = V.Wp.zero(V.Wp.degree, V.Wp.shape)
    zA = V.A.zero(1, V.A.shape)
    base = replace(V, Wp=z1, Wm=z1)
    L = lambda A, Z: ew.ew_lagrangian_dressed(replace(base, A=A, Z=Z))  # noqa: E731
    cross = L(V.A, V.Z) - L(V.A, zA) - L(zA, V.Z) + L(zA, zA)
    scale = max(1.0, _max_abs([L(V.A, V.Z)], t.points))
    return _max_abs([cross], t.points) / scale


@_prop("ew.mass_ratio", "ew", 1e-12)
def _ew_mass(t: Trial, rng):
    """m_W / m_Z = cos(theta_W) across random couplings in the broken phase."""
    F = _ew(t)
    couplings = [(F.g, F.gp)] + [tuple(rng.uniform(0.05, 2.0, size=2)) for _ in range(19)]
    res = 0.0
    for g, gp in couplings:
        m = ew.masses(-abs(F.mu2) if F.mu2 != 0 else -1.0, F.lam, g, gp)
        res = max(res, abs(m.m_W / m.m_Z - m.cos_theta_W), abs(m.cos_theta_W - g / math.hypot(g, gp)))
    return res


@_prop("ew.symmetric_phase", "ew", 0.0)
def _ew_symmetric(t: Trial, rng):
    """In the symmetric phase (mu^2 >= 0) every mass vanishes."""
    F = _ew(t)
    for mu2 in (0.0, abs(F.mu2), float(rng.uniform(0.1, 3.0))):
        m = ew.masses(mu2, F.lam, F.g, F.gp)
        if any(x != 0 for x in (m.m_W, m.m_Z, m.m_H)):
            return False
    return True


def _ew_su2_erasure(t: Trial, rng=None):
    D1 = _ew_dressed(t)
    _, _, D2 = _ew_su2(t)
    return max(_dev(D1.B, D2.B, t.points), _dev(D1.G, D2.G, t.points), _dev(D1.Deta, D2.Deta, t.points), _dev(D1.a, D2.a, t.points))


@_prop("ew.su2_erasure", "ew", 1e-10)
def _ew_erasure(t: Trial, rng):
    """Every dressed electroweak field is invariant under a random SU(2) gauge map."""
    return _ew_su2_erasure(t)


@_prop("ew.eta_invariance", "ew", 1e-10)
def _ew_eta(t: Trial, rng):
    """eta = |phi| is invariant under U(1) x SU(2)."""
    eta = _ew_dressed(t).eta
    return max(_mat_dev([[eta]], [[_ew_su2(t)[2].eta]], t.points), _mat_dev([[eta]], [[_ew_u1(t)[2].eta]], t.points))


@_prop("ew.residual_u1", "ew", 1e-9)
def _ew_u1_law(t: Trial, rng):
    """Under the residual U(1): W+ -> alpha^2 W+, W- -> alpha^-2 W-, Z unchanged, A -> A + alpha^-1 d alpha / e."""
    F = _ew(t)
    V1 = t.memo("ew.variables", lambda: ew.ew_variables(F, t.points))
    al, F3, _ = _ew_u1(t)
    V3 = ew.ew_variables(F3, t.points)
    a = al.value[0, 0]
    e = F.g * F.gp / math.hypot(F.g, F.gp)
    return {
        "Wp": _dev(V3.Wp, V1.Wp * ex.power(a, 2), t.points),
        "Wm": _dev(V3.Wm, V1.Wm * ex.power(a, -2), t.points),
        "A": _dev(V3.A, V1.A + zero_form([[al.inverse[0, 0]]]) @ zero_form([[a]]).d() * (1 / e), t.points),
        "Z": _dev(V3.Z, V1.Z, t.points),
    }


@_prop("ew.lagrangian_invariance", "ew", 1e-9)
def _ew_lag_inv(t: Trial, rng):
    """The Lagrangian 4-form is gauge invariant (random SU(2) and U(1) maps), relative error."""
    F = _ew(t)
    L = ew.ew_lagrangian(F)
    return max(
        max_deviation(L, ew.ew_lagrangian(_ew_su2(t)[1]), t.points, relative=True),
        max_deviation(L, ew.ew_lagrangian(_ew_u1(t)[1]), t.points, relative=True),
    )


# gr -----------------------------------------------------------------------------------------


@_prop("gr.metricity", "gr", 1e-12)
def _gr_metricity(t: Trial, rng):
    """The dressed linear connection is metric: dg - Gamma^T g - g Gamma = 0."""
    return gr.metricity_residual(_gr_dressed(t), t.points)


@_prop("gr.metricity_symbolic", "gr", 0.0)
def _gr_metricity_sym(t: Trial, rng):
    """Metricity holds as an exact identity for an so(1,3)-valued spin connection."""
    return gr.metricity_symbolic(_gr(t))


@_prop("gr.palatini_eh", "gr", 1e-8)
def _gr_pal(t: Trial, rng):
    """Palatini and Einstein-Hilbert Lagrangians agree pointwise (relative error)."""
    P, M = _gr(t), _gr_dressed(t)
    return max_deviation(gr.palatini_lagrangian(P), gr.einstein_hilbert_lagrangian(M), t.points, relative=True)


def _gr_erasure(t: Trial, rng=None):
    M = _gr_dressed(t)
    _, _, M2 = _gr_lorentz(t)
    r = max(_dev(M.Gamma, M2.Gamma, t.points), _dev(M.sR, M2.sR, t.points), _dev(M.T, M2.T, t.points))
    return max(r, _mat_dev(M.metric.g, M2.metric.g, t.points))


@_prop("gr.lorentz_erasure", "gr", 1e-10)
def _gr_erase(t: Trial, rng):
    """Gamma, its curvature, torsion and the metric are invariant under a random Lorentz map S(x)."""
    return _gr_erasure(t)


@_prop("gr.coordinate_composition", "gr", 1e-10)
def _gr_comp(t: Trial, rng):
    """A change of frame by G1 then G2 equals the change by G1 G2; L_EH is invariant."""
    M = _gr_dressed(t)
    G1, G2 = rf.tetrad(rng), rf.tetrad(rng)
    Ma = gr.coordinate_change(gr.coordinate_change(M, G1), G2)
    Mb = gr.coordinate_change(M, mat_mul(G1, G2))
    out = {
        "Gamma": _dev(Ma.Gamma, Mb.Gamma, t.points),
        "curvature": _dev(Ma.sR, Mb.sR, t.points),
        "torsion": _dev(Ma.T, Mb.T, t.points),
        "metric": _mat_dev(Ma.metric.g, Mb.metric.g, t.points),
    }
    out["lagrangian"] = max_deviation(
        gr.einstein_hilbert_lagrangian(M), gr.einstein_hilbert_lagrangian(Ma), t.points, relative=True
    )
    return out


# conformal ----------------------------------------------------------------------------------


@_prop("conformal.membership", "conformal", 1e-10)
def _cf_membership(t: Trial, rng):
    """Cartan connection values lie in so(2,4), their spin images and the dressed spin connection in su(2,2)."""
    c = _cf(t)
    tw = _cf_twistor(t)
    v1, v2, v3 = values([c.varpi.form, cf.build_spin_cartan(c.varpi.form), tw.form], t.points)
    so24, su22 = groups.ALGEBRAS["so(2,4)"], groups.ALGEBRAS["su(2,2)"]
    return {
        "varpi": max(float(so24(m)) for comp in v1 for m in comp),
        "spin": max(float(su22(m)) for comp in v2 for m in comp),
        "spin_dressed": max(float(su22(m)) for comp in v3 for m in comp),
    }


@_prop("conformal.boost_constraint", "conformal", 1e-11)
def _cf_boost(t: Trial, rng):
    """The a-block of the boost-dressed connection vanishes."""
    d, _ = _cf_dressed(t)
    return _max_abs([d.varpi1.a], t.points)


def _cf_k1_erasure(t: Trial, rng=None):
    def build():
        c = _cf(t)
        d, phi2 = _cf_dressed(t)
        _, r = rf.k1_map(t.rng("conformal.k1_map"), Fraction(1, 2))
        Wg = cf.k1_transform(c.varpi, r)
        Ki = groups.k1_matrix([-x for x in r])
        dg = cf.dress_tractor(Wg, zero_form(Ki) @ c.phi)
        return max(_dev(d.varpi1.form, dg.varpi1.form, t.points), _dev(d.phi1, dg.phi1, t.points))

    return t.memo("conformal.k1_erasure", build)


@_prop("conformal.k1_erasure", "conformal", 1e-10)
def _cf_k1(t: Trial, rng):
    """Dressed connection and tractor are invariant under a random conformal boost map."""
    return _cf_k1_erasure(t)


@_prop("conformal.lorentz_residual", "conformal", 1e-10)
def _cf_lorentz_law(t: Trial, rng):
    """Residual Lorentz law blockwise: A1 -> S^-1 A1 S + S^-1 dS, theta -> S^-1 theta, P1 -> P1 S."""
    d, _ = _cf_dressed(t)
    L, S, WS, dS, _ = _cf_lorentz(t)
    Sf, Sif = zero_form(L.value), zero_form(L.inverse)
    W1, W1S = d.varpi1, dS.varpi1
    return {
        "A": _dev(W1S.A, Sif @ W1.A @ Sf + Sif @ Sf.d(), t.points),
        "theta": _dev(W1S.theta, Sif @ W1.theta, t.points),
        "P": _dev(W1S.P, W1.P @ Sf, t.points),
        "a": _max_abs([W1S.a], t.points),
    }


@_prop("conformal.weyl_residual", "conformal", 1e-9)
def _cf_weyl_law(t: Trial, rng):
    """Weyl residual law: closed forms for varpi1, tractor and twistor equal the generic cocycle path and the two-path result."""
    c = _cf(t)
    d, _ = _cf_dressed(t)
    Wz, dz, _ = _cf_weyl(t)
    z = c.z
    ups = cf.weyl_upsilon(z, c.varpi.e_inv)
    C = cf.weyl_cocycle(c.varpi.e_inv)
    closed = cf.varpi_weyl_closed(d.varpi1, z, ups)
    generic = residual_twisted_transform(d.varpi1.field(), z, C).form
    tw = _cf_twistor(t)
    zi = ex.power(z, -1)
    twz = cf.dress_twistor(Wz, zero_form(rf.weyl_spin_matrix(zi)) @ c.psi)
    Cs = cf.weyl_cocycle_spin(c.varpi.e_inv)
    return {
        "varpi_closed": _dev(closed, dz.varpi1.form, t.points),
        "varpi_generic": _dev(generic, dz.varpi1.form, t.points),
        "tractor": _dev(cf.tractor_weyl_closed(d.phi1, z, ups), dz.phi1, t.points),
        "twistor": _dev(cf.twistor_weyl_closed(tw.psi1, z, ups), twz.psi1, t.points),
        "spin_connection": _dev(residual_twisted_transform(connection(tw.form), z, Cs).form, twz.form, t.points),
    }


@_prop("conformal.tractor_metric_invariance", "conformal", 1e-9)
def _cf_tractor_metric(t: Trial, rng):
    """The tractor metric <phi1, phi1'> is invariant under residual Lorentz and Weyl actions."""
    d, p2 = _cf_dressed(t)
    _, _, _, dS, p2S = _cf_lorentz(t)
    _, dz, p2z = _cf_weyl(t)
    m = cf.tractor_metric(d.phi1, p2)
    return {
        "lorentz": _dev(m, cf.tractor_metric(dS.phi1, p2S), t.points),
        "weyl": _dev(m, cf.tractor_metric(dz.phi1, p2z), t.points),
    }


@_prop("conformal.twistor_helicity_invariance", "conformal", 1e-9)
def _cf_helicity(t: Trial, rng):
    """Twistor helicity is invariant under residual SL(2,C) and Weyl actions."""
    c = _cf(t)
    tw = _cf_twistor(t)
    L, _, WS, _, _ = _cf_lorentz(t)
    Wz, _, _ = _cf_weyl(t)
    Lsi = rf.embed_spin(L.spin_inverse, L.spin)
    twS = cf.dress_twistor(WS, zero_form(Lsi) @ c.psi)
    twz = cf.dress_twistor(Wz, zero_form(rf.weyl_spin_matrix(ex.power(c.z, -1))) @ c.psi)
    h = cf.twistor_helicity(tw.psi1)
    return {
        "lorentz": _dev(h, cf.twistor_helicity(twS.psi1), t.points),
        "weyl": _dev(h, cf.twistor_helicity(twz.psi1), t.points),
    }


@_prop("conformal.sigma_compatibility", "conformal", 1e-9)
def _cf_sigma(t: Trial, rng):
    """D1 preserves the tractor metric and Dbar1 the twistor pairing (Leibniz identities)."""
    c = _cf(t)
    d, p2 = _cf_dressed(t)
    D1 = d.D
    D2 = p2.d() + d.varpi1.form @ p2
    lhs = cf.tractor_metric(d.phi1, p2).d()
    rhs = cf.tractor_metric(D1, p2) + cf.tractor_metric(d.phi1, D2)
    tw = _cf_twistor(t)
    Sb = zero_form(groups.SIGMA_BAR)
    pair = tw.psi1.H @ Sb @ tw.psi1
    rhs2 = tw.D.H @ Sb @ tw.psi1 + tw.psi1.H @ Sb @ tw.D
    return {"tractor": _dev(lhs, rhs, t.points), "twistor": _dev(pair.d(), rhs2, t.points)}


@_prop("conformal.covariant_derivatives", "conformal", 1e-9)
def _cf_covd(t: Trial, rng):
    """D1 phi1 and Dbar1 psi1 match their block columns; D1 D1 phi1 = Omega1 phi1."""
    d, _ = _cf_dressed(t)
    tw = _cf_twistor(t)
    DD = d.D.d() + d.varpi1.form @ d.D
    return {
        "tractor": _dev(d.D, cf.tractor_covariant_closed(d.varpi1, d.phi1), t.points),
        "twistor": _dev(tw.D, cf.twistor_covariant_closed(d.varpi1, tw.psi1), t.points),
        "second": _dev(DD, d.Omega @ d.phi1, t.points),
    }


@_prop("conformal.lorentz_weyl_commute", "conformal", 1e-9)
def _cf_commute(t: Trial, rng):
    """Residual Lorentz and Weyl actions on varpi1 commute."""
    c = _cf(t)
    d, _ = _cf_dressed(t)
    L, S, _, _, _ = _cf_lorentz(t)
    z = c.z
    W1 = d.varpi1
    # Lorentz first, then Weyl with the rotated frame
    a1 = W1.with_form(gauge_transform(W1.field(), S).form, mat_mul(L.inverse, W1.e), mat_mul(W1.e_inv, L.value))
    one = cf.varpi_weyl_closed(a1, z, cf.weyl_upsilon(z, a1.e_inv))
    # Weyl first, then Lorentz
    b1 = cf.varpi_weyl_closed(W1, z, cf.weyl_upsilon(z, W1.e_inv))
    two = act(connection(b1), S.value, S.inverse).form
    return _dev(one, two, t.points)


@_prop("conformal.spin_consistency", "conformal", 1e-10)
def _cf_spin(t: Trial, rng):
    """Spin image of the dressed connection equals the dressed spin connection; ubar1 uses the bar of q."""
    d, _ = _cf_dressed(t)
    tw = _cf_twistor(t)
    c = _cf(t)
    q = cf.boost_q(c.varpi.a, c.varpi.e_inv)
    qb = groups.cobar_map(q)
    ub = tw.u1.value
    r_q = _mat_dev(ub[0:2, 2:4], np.asarray(np.frompyfunc(lambda x: ex.mul(-1j, x), 1, 1)(qb), dtype=object), t.points)
    return {"connection": _dev(cf.build_spin_cartan(d.varpi1.form), tw.form, t.points), "q_bar": r_q}


@_prop("conformal.normal_connection", "conformal", 1e-8)
def _cf_normal_prop(t: Trial, rng):
    """Normal connection of a metric: f = 0 and the W-block is trace-free (W^a_bad = 0)."""
    out = {}
    for label, N in _cf_normal(t):
        curv = cf.conformal_curvature(N.form)
        out[label + ".f"] = _max_abs([curv["f"]], t.points)
        out[label + ".theta"] = _max_abs([curv["Theta"]], t.points)
        comp = cf._frame_components(curv["W"], N.e_inv)
        tr = [ex.add(*[comp[a, b, a, dd] for a in range(DIM)]) for b in range(DIM) for dd in range(DIM)]
        out[label + ".W_trace"] = float(np.max(np.abs(ex.evaluate(tr, t.points))))
    return out


@_prop("conformal.normal_torsion_symbolic", "conformal", 0.0)
def _cf_normal_sym(t: Trial, rng):
    """The torsion block Theta of the normal connection vanishes identically."""
    for label, N in _cf_normal(t):
        if label != "conformally_flat":
            continue
        th = N.theta
        if not _all_zero(th.d() + N.A @ th):
            return False
    return True


@_prop("conformal.cotton_fd", "conformal", 1e-8)
def _cf_cotton(t: Trial, rng):
    """Cotton block nabla P1 of the normal connection matches the finite-difference oracle."""
    from .gr_tetrad import induced_metric

    pts = t.points[: min(len(t.points), 6)] * 0.6
    out = {}
    for label, N in _cf_normal(t):
        (cv,) = values([cf.cotton_block(N)], pts)
        g = oracles.metric_function(induced_metric(N.e, N.e_inv).g)
        cfd = oracles.cotton_fd(g, pts)
        eiv = ex.evaluate(list(N.e_inv.flat), pts).T.reshape(len(pts), DIM, DIM)
        frame = np.einsum("nlb,nlmv->nbmv", eiv, cfd)
        res = 0.0
        for k, (m, v) in enumerate(_indices(2)):
            res = max(res, float(np.max(np.abs(cv[k, :, 0, :] - frame[:, :, m, v]))))
        out[label] = res
    return out


REGISTRY: dict[str, Property] = {}


def _load_data(name: str):
    return json.loads(resources.files("dressing").joinpath("data", name).read_text(encoding="utf-8"))


# source anchors that the registry as a whole must cite
REQUIRED_ANCHORS = tuple(_load_data("required_anchors.json"))


def _build_registry():
    refs = _load_data("property_refs.json")
    for p in _PROPS:
        REGISTRY[p.id] = replace(p, paper_ref=refs.get(p.id, ""))


def check_coverage(registry: dict[str, Property] | None = None) -> None:
    """Every required anchor is cited by at least one registered property."""
    reg = REGISTRY if registry is None else registry
    missing = [a for a in REQUIRED_ANCHORS if not any(a in p.paper_ref for p in reg.values())]
    if missing:
        raise RuntimeError(f"property registry does not cover: {', '.join(missing)}")
    unnamed = [p.id for p in reg.values() if not p.paper_ref]
    if unnamed:
        raise RuntimeError(f"properties without a reference: {', '.join(unnamed)}")


_build_registry()
check_coverage()


# runner ------------------------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    seed: int = 0
    trials: int = 20
    points: int = 20
    tolerances: dict = field(default_factory=dict)
    fixture: str | None = None

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise UsageError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if self.trials < 1:
            raise UsageError("trials must be >= 1")
        if self.points < 1:
            raise UsageError("points must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        for k, v in self.tolerances.items():
            if k not in REGISTRY:
                raise UsageError(f"tolerance override for unknown property {k!r}")
            if not (isinstance(v, (int, float)) and v > 0 and math.isfinite(v)):
                raise UsageError(f"tolerance for {k} must be a positive number")


def selected(suite: str) -> list[Property]:
    return [p for p in REGISTRY.values() if suite == "all" or p.suite == suite]


def _fmt(x: float) -> float | str:
    """Six significant digits as a JSON number; non-finite values become "inf"."""
    x = float(x)
    return float(f"{x:.6g}") if math.isfinite(x) else "inf"


def _reduce(value) -> tuple[float, dict | None]:
    if isinstance(value, (bool, np.bool_)):
        return (0.0 if value else 1.0), None
    if isinstance(value, dict):
        detail = {k: float(v) for k, v in value.items()}
        return max(detail.values()), detail
    return float(value), None


def run_suite(cfg: SuiteConfig, overrides: dict | None = None) -> dict:
    """Run the selected properties over all trials; returns {"schema", "body", "meta"}."""
    cfg.validate()
    start = time.perf_counter()
    overrides = dict(overrides or {})
    props = selected(cfg.suite)
    state = {p.id: {"max": 0.0, "detail": {}, "trials": 0, "error": None, "symbolic": False} for p in props}
    for trial in range(cfg.trials):
        tr = Trial(cfg.seed, trial, cfg.points, overrides)
        for p in props:
            st = state[p.id]
            if st["error"] is not None:
                continue
            try:
                value = p.fn(tr, tr.rng("property:" + p.id))
            except Exception as err:  # recorded, not raised: the report carries the failure
                st["error"] = {"type": type(err).__name__, "message": str(err), "trial": trial}
                continue
            if isinstance(value, (bool, np.bool_)):
                st["symbolic"] = True
            res, detail = _reduce(value)
            if not math.isfinite(res):
                res = math.inf
            st["max"] = max(st["max"], res)
            for k, v in (detail or {}).items():
                st["detail"][k] = max(st["detail"].get(k, 0.0), v)
            st["trials"] += 1
    records = []
    for p in props:
        st = state[p.id]
        tol = cfg.tolerances.get(p.id, p.tolerance)
        rec = {"id": p.id, "paper_ref": p.paper_ref, "family": p.family, "trials": st["trials"]}
        if st["error"] is not None:
            rec.update({"pass": False, "error": st["error"]})
        elif st["symbolic"]:
            rec.update({"check": "exact", "max_residual": _fmt(st["max"]), "tolerance": "exact", "pass": st["max"] == 0.0})
        else:
            rec.update(
                {
                    "check": "numeric",
                    "max_residual": _fmt(st["max"]),
                    "tolerance": _fmt(tol),
                    "pass": st["max"] < tol,
                }
            )
            if st["detail"]:
                rec["detail"] = {k: _fmt(v) for k, v in sorted(st["detail"].items())}
        records.append(rec)
    body = {
        "suite": cfg.suite,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "points": cfg.points,
        "fixture": cfg.fixture,
        "tolerance_overrides": {k: _fmt(v) for k, v in sorted(cfg.tolerances.items())},
        "properties": records,
        "pass": all(r["pass"] for r in records),
    }
    meta = {
        "wall_time_s": round(time.perf_counter() - start, 3),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    return {"schema": SCHEMA, "body": body, "meta": meta}


def report_body_json(report: dict) -> str:
    """Canonical serialization of the deterministic part of a report."""
    return json.dumps(report["body"], sort_keys=True, indent=2)


def explain(pid: str) -> str:
    if pid not in REGISTRY:
        raise UsageError(f"unknown property {pid!r}; valid ids:\n  " + "\n  ".join(sorted(REGISTRY)))
    p = REGISTRY[pid]
    tol = "exact" if p.tolerance == 0.0 else _fmt(p.tolerance)
    return (
        f"{p.id}\n"
        f"  statement: {p.statement}\n"
        f"  reference: {p.paper_ref}\n"
        f"  fixture family: {p.family}\n"
        f"  tolerance: {tol}\n"
    )
