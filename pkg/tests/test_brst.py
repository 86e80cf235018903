from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from dressing import brst
from dressing import conformal as cf
from dressing import electroweak as ew
from dressing import expr as ex
from dressing import normal
from dressing import random_fields as rf
from dressing.fixtures import random_fixture
from dressing.forms import DIM, MatrixForm, dx, values, zero_form
from dressing.gauge import GaugeMap, MapClass, connection, curvature, dress, matrix_values, max_deviation, section

HALF = Fraction(1, 2)


def su2_param(rng, const=False):
    basis = rf.su2_basis()
    if const:
        return sum(float(c) * b for c, b in zip(rng.normal(size=3), basis)).tolist()
    m = None
    for b in basis:
        p = rf.random_poly(rng, scale=HALF)
        term = np.frompyfunc(lambda x, p=p: ex.mul(ex.const(complex(x)), p), 1, 1)(b.astype(complex))
        m = term if m is None else m + term
    return m


def so13_param(rng):
    m = None
    for b in rf.so13_basis():
        p = rf.random_poly(rng, scale=HALF)
        term = np.frompyfunc(lambda x, p=p: ex.mul(ex.const(float(x)), p), 1, 1)(b)
        m = term if m is None else m + term
    return m


def max_abs(m, points):
    return float(np.max(np.abs(matrix_values(m, points))))


def test_zero_ghost_gives_zero_variation(rng, points):
    b = connection(rf.algebra_form(rng, rf.su2_basis()), "su(2)")
    out = brst.brst_variation(b, np.zeros((2, 2)).tolist()).form
    assert max_deviation(out, MatrixForm.zero(1, (2, 2)), points) == 0


def test_abelian_constant_ghost(points):
    w = connection(dx(1) * ex.coord(0))
    out = brst.brst_variation(w, [[0.7j]]).form
    assert max_deviation(out, MatrixForm.zero(1, (1, 1)), points) == 0


def test_abelian_nilpotency(rng, points):
    w = connection(dx(2) * rf.random_poly(rng))
    xi, zeta = [[ex.I * rf.random_poly(rng)]], [[ex.I * rf.random_poly(rng)]]
    lhs = brst.second_variation(w, xi, zeta) - brst.second_variation(w, zeta, xi)
    resid = lhs - brst.brst_variation(w, brst.bracket(xi, zeta)).form
    assert all(normal.is_zero(e) for m in resid.comps.values() for e in m.flat)
    assert brst.nilpotency_check(w, xi, zeta, points) < 1e-15


def test_constant_su2_nilpotency(rng, points):
    F = random_fixture("ew", rng).F
    b = connection(F.b, "su(2)", F.g)
    xi, zeta = su2_param(rng, const=True), su2_param(rng, const=True)
    for chi in (b, curvature(b), section(F.phi)):
        assert brst.nilpotency_check(chi, xi, zeta, points) < 1e-12


def test_chart_dependent_so13_nilpotency(rng, points):
    w = connection(rf.algebra_form(rng, rf.so13_basis()), "so(1,3)")
    xi, zeta = so13_param(rng), so13_param(rng)
    for chi in (w, curvature(w)):
        assert brst.nilpotency_check(chi, xi, zeta, points) < 1e-8


def test_variation_matches_finite_difference(rng, points):
    F = random_fixture("ew", rng).F
    xi = su2_param(rng)
    pts = points[:5]
    for chi in (connection(F.b, "su(2)", F.g), section(F.phi)):
        (exact,) = values([brst.brst_variation(chi, xi).form], pts)
        assert np.max(np.abs(exact - brst.flow_fd(chi, xi, pts))) < 1e-7


def test_d_squared_on_ghost(rng):
    x = zero_form(su2_param(rng))
    assert all(normal.is_zero(e) for m in x.d().d().comps.values() for e in m.flat)


def test_identity_dressing_reduces_to_plain_variation(rng, points):
    w = connection(rf.algebra_form(rng, rf.su2_basis()), "su(2)")
    xi = su2_param(rng)
    u = GaugeMap.identity(2, "SU(2)", MapClass.DRESSING)
    v = brst.dressed_ghost(u, xi, np.zeros((2, 2)).tolist())
    s_w = brst.field_variation(lambda f: dress(f["w"], u), {"w": w}, lambda n, f: xi)
    assert brst.modified_brst_check(w, s_w, v, points) < 1e-12


def test_su2_sector_is_erased(rng, points):
    F = random_fixture("ew", rng).F
    xi = su2_param(rng)
    fields = {"b": connection(F.b, "su(2)", F.g), "phi": section(F.phi)}
    xi_of = lambda name, f: xi  # noqa: E731
    u = ew.polar_decompose(F.phi, points)[0]
    su = brst.map_variation(lambda f: ew.polar_decompose(f["phi"].form)[0], fields, xi_of)
    pred = brst.predicted_map_variation(u, xi, "erased")
    assert np.max(np.abs(matrix_values(su, points) - matrix_values(pred, points))) < 1e-9
    assert max_abs(brst.dressed_ghost(u, xi, su), points) < 1e-9
    sB = brst.field_variation(lambda f: dress(f["b"], ew.polar_decompose(f["phi"].form)[0]), fields, xi_of)
    (v,) = values([sB], points)
    assert np.max(np.abs(v)) < 1e-9


def _varpi(rng):
    return random_fixture("conformal", rng)


def test_boost_ghost_disappears(rng, points):
    c = _varpi(rng)
    xi = cf.boost_ghost([rf.random_poly(rng, scale=HALF) for _ in range(DIM)])
    u1, su, v = cf.composite_ghost(c.varpi, xi)
    assert max_abs(v, points) < 1e-9
    pred = brst.predicted_map_variation(u1, xi, "erased")
    assert np.max(np.abs(matrix_values(su, points) - matrix_values(pred, points))) < 1e-9


def test_lorentz_ghost_is_kept(rng, points):
    c = _varpi(rng)
    s = sum(a * b for a, b in zip(rng.normal(size=6) * 0.5, rf.so13_basis()))
    xi = cf.lorentz_ghost(s)
    _, _, v = cf.composite_ghost(c.varpi, xi)
    assert np.max(np.abs(matrix_values(v, points) - matrix_values(xi, points))) < 1e-9


def test_weyl_ghost_becomes_cocycle_derivative(rng, points):
    c = _varpi(rng)
    eps = rf.random_poly(rng, scale=HALF)
    xi = cf.weyl_ghost(eps)
    c_eps = cf.weyl_ghost_c(eps, c.varpi.e_inv)
    u1, su, v = cf.composite_ghost(c.varpi, xi)
    assert np.max(np.abs(matrix_values(v, points) - matrix_values(c_eps, points))) < 1e-9
    pred = brst.predicted_map_variation(u1, xi, "twisted", c_eps)
    assert np.max(np.abs(matrix_values(su, points) - matrix_values(pred, points))) < 1e-9


def test_weyl_ghost_derivative_entries_exact(rng):
    c = _varpi(rng)
    _, e, ei = c.normal_tetrads[1]
    varpi = cf.ConformalCartan.from_blocks(c.varpi.a, c.varpi.A, e, c.varpi.P, ei)
    eps = rf.random_poly(rng, scale=HALF)
    _, _, v = cf.composite_ghost(varpi, cf.weyl_ghost(eps))
    for a in range(DIM):
        expected = ex.add(*[ex.mul(ex.diff(eps, mu), ei[mu, a]) for mu in range(DIM)])
        assert normal.equal(v[0, 1 + a], expected)


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_variation_is_derivation(seed):
    rng = np.random.default_rng(seed)
    pts = rf.sample_points(rng, 6)
    w = connection(rf.algebra_form(rng, rf.su2_basis()), "su(2)")
    Om = curvature(w)
    phi = section(rf.section(rng, 2))
    xi = su2_param(rng)
    dOm, dphi = brst.brst_variation(Om, xi).form, brst.brst_variation(phi, xi).form
    lhs = brst.brst_variation(section(Om.form @ phi.form), xi).form
    assert max_deviation(lhs, dOm @ phi.form + Om.form @ dphi, pts) < 1e-9
