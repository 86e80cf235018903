from fractions import Fraction

import numpy as np
import pytest

from dressing import conformal as cf
from dressing import expr as ex
from dressing import groups
from dressing import normal
from dressing import oracles
from dressing import random_fields as rf
from dressing.fixtures import random_fixture
from dressing.forms import DIM, MatrixForm, eye, mat_mul, one_form, values, zero_form
from dressing.gauge import dress, gauge_transform, matrix_values, max_deviation, residual_twisted_transform, section
from dressing.gr_tetrad import induced_metric

HALF = Fraction(1, 2)


def small(forms, points):
    vals = values(forms, points)
    return max(float(np.max(np.abs(v))) if v.size else 0.0 for v in vals)


def flat_model():
    return cf.ConformalCartan.from_blocks(MatrixForm.zero(1, (1, 1)), MatrixForm.zero(1, (4, 4)), eye(4), MatrixForm.zero(1, (1, 4)))


@pytest.fixture
def fixture(rng):
    return random_fixture("conformal", rng)


def test_flat_model_is_flat(points):
    curv = cf.conformal_curvature(flat_model().form)
    assert small([curv[k] for k in ("Omega", "f", "C", "Theta", "W")], points) == 0


def test_abelian_a_only(rng, points):
    a = one_form([[[rf.random_poly(rng)]] for _ in range(DIM)])
    v = cf.ConformalCartan.from_blocks(a, MatrixForm.zero(1, (4, 4)), eye(4), MatrixForm.zero(1, (1, 4)))
    assert max_deviation(cf.conformal_curvature(v.form)["f"], a.d(), points) < 1e-14


def test_membership(fixture, points):
    (v,) = values([fixture.varpi.form], points)
    assert max(groups.ALGEBRAS["so(2,4)"](m) for comp in v for m in comp) < 1e-10


def test_boost_q_examples(rng, points):
    v = flat_model()
    assert all(q.is_zero for q in cf.boost_q(v.a, v.e_inv))
    assert np.allclose(matrix_values(cf.boost_dressing(v).value, points), np.eye(6))
    a = one_form([[[rf.random_poly(rng)]] for _ in range(DIM)])
    q = cf.boost_q(a, eye(4))
    for b in range(DIM):
        assert normal.equal(q[b], a.comps[(b,)][0, 0])


def test_boost_constraint_and_schouten_wedge(fixture, points):
    d = cf.dress_tractor(fixture.varpi, fixture.phi)
    assert small([d.varpi1.a], points) < 1e-11
    f1 = cf.conformal_curvature(d.varpi1.form)["f"]
    assert max_deviation(f1, d.varpi1.P @ d.varpi1.theta, points) < 1e-10


def test_flat_tractor_derivative(points):
    # the soldering form couples the slots, so only the bottom slot is free
    d = cf.dress_tractor(flat_model(), zero_form([[0], [0], [0], [0], [0], [4]]))
    assert small([d.D], points) == 0
    phi = zero_form([[1], [2], [0], [0], [3], [4]])
    d = cf.dress_tractor(flat_model(), phi)
    assert small([d.D], points) > 0.5
    assert max_deviation(d.D, cf.tractor_covariant_closed(d.varpi1, d.phi1), points) < 1e-14


def test_k1_invariance(fixture, points):
    d = cf.dress_tractor(fixture.varpi, fixture.phi)
    _, r = rf.k1_map(np.random.default_rng(5), HALF)
    Ki = groups.k1_matrix([-x for x in r])
    dg = cf.dress_tractor(cf.k1_transform(fixture.varpi, r), zero_form(Ki) @ fixture.phi)
    assert max_deviation(d.varpi1.form, dg.varpi1.form, points) < 1e-10
    assert max_deviation(d.phi1, dg.phi1, points) < 1e-10


def test_lorentz_identity(fixture, points):
    W = cf.lorentz_transform(fixture.varpi, eye(4), eye(4))
    assert max_deviation(W.form, fixture.varpi.form, points) == 0


def test_constant_boost_conjugates_blocks(fixture, points):
    S = rf.boost(1, 0.4)
    Si = rf.boost(1, -0.4)
    W = cf.lorentz_transform(fixture.varpi, S, Si)
    Sf, Sif = zero_form(S), zero_form(Si)
    v = fixture.varpi
    assert max_deviation(W.A, Sif @ v.A @ Sf, points) < 1e-13
    assert max_deviation(W.theta, Sif @ v.theta, points) < 1e-13
    assert max_deviation(W.P, v.P @ Sf, points) < 1e-13


def test_lorentz_residual_two_paths(fixture, points):
    L = rf.lorentz_map(np.random.default_rng(9), scale=HALF)
    S = cf.embed_lorentz_map(L.value, L.inverse)
    d = cf.dress_tractor(fixture.varpi, fixture.phi)
    dS = cf.dress_tractor(cf.lorentz_transform(fixture.varpi, L.value, L.inverse), zero_form(S.inverse) @ fixture.phi)
    assert max_deviation(dS.varpi1.form, gauge_transform(d.varpi1.field(), S).form, points) < 1e-10
    assert max_deviation(dS.phi1, zero_form(S.inverse) @ d.phi1, points) < 1e-10


def test_weyl_cocycle_trivial_and_constant(fixture, points):
    C = cf.weyl_cocycle(fixture.varpi.e_inv)
    assert np.allclose(matrix_values(C(ex.ONE).value, points), np.eye(6))
    c36 = matrix_values(C(ex.const(36)).value, points)
    c4c9 = matrix_values(mat_mul(C(ex.const(4)).value, C(ex.const(9)).value), points)
    assert np.allclose(c36, c4c9, atol=1e-14)
    assert np.allclose(c36[0], np.diag([36, 1, 1, 1, 1, 1 / 36]))


def test_weyl_cocycle_chart_dependent(fixture, points):
    for C in (cf.weyl_cocycle(fixture.varpi.e_inv), cf.weyl_cocycle_spin(fixture.varpi.e_inv)):
        assert C.identity_residual(fixture.z, fixture.z2, points) < 1e-10
        assert C.identity_residual(fixture.z2, fixture.z, points) < 1e-10


def test_tractor_weyl_examples(fixture, points):
    d = cf.dress_tractor(fixture.varpi, fixture.phi)
    ei = fixture.varpi.e_inv
    one = cf.tractor_weyl_closed(d.phi1, ex.ONE, cf.weyl_upsilon(ex.ONE, ei))
    assert max_deviation(one, d.phi1, points) == 0
    z = ex.const(3)
    out = cf.tractor_weyl_closed(d.phi1, z, cf.weyl_upsilon(z, ei))
    grading = zero_form(np.diag([Fraction(1, 3), 1, 1, 1, 1, 3]).tolist())
    assert max_deviation(out, grading @ d.phi1, points) < 1e-14
    tw = cf.dress_twistor(fixture.varpi, fixture.psi)
    out = cf.twistor_weyl_closed(tw.psi1, z, cf.weyl_upsilon(z, ei))
    r3 = 3**0.5
    assert max_deviation(out, zero_form(np.diag([1 / r3, 1 / r3, r3, r3]).tolist()) @ tw.psi1, points) < 1e-14


def test_weyl_closed_forms_match_generic_path(fixture, points):
    z = fixture.z
    ei = fixture.varpi.e_inv
    ups = cf.weyl_upsilon(z, ei)
    d = cf.dress_tractor(fixture.varpi, fixture.phi)
    Zi = rf.weyl_matrix(ex.power(z, -1))
    dz = cf.dress_tractor(cf.weyl_transform(fixture.varpi, z), zero_form(Zi) @ fixture.phi)
    assert max_deviation(cf.varpi_weyl_closed(d.varpi1, z, ups), dz.varpi1.form, points) < 1e-9
    generic = residual_twisted_transform(d.varpi1.field(), z, cf.weyl_cocycle(ei)).form
    assert max_deviation(generic, dz.varpi1.form, points) < 1e-9
    assert max_deviation(cf.tractor_weyl_closed(d.phi1, z, ups), dz.phi1, points) < 1e-9


def test_null_tractor():
    e0 = zero_form([[1], [0], [0], [0], [0], [0]])
    assert normal.is_zero(cf.tractor_metric(e0, e0).comps[()][0, 0])


def test_tractor_metric_and_helicity_invariance(fixture, points):
    z = fixture.z
    d = cf.dress_tractor(fixture.varpi, fixture.phi)
    p2 = dress(section(fixture.phi2), d.u1).form
    Wz = cf.weyl_transform(fixture.varpi, z)
    Zi = zero_form(rf.weyl_matrix(ex.power(z, -1)))
    dz = cf.dress_tractor(Wz, Zi @ fixture.phi)
    p2z = dress(section(Zi @ fixture.phi2), dz.u1).form
    m = cf.tractor_metric(d.phi1, p2)
    assert max_deviation(m, cf.tractor_metric(dz.phi1, p2z), points) < 1e-9
    tw = cf.dress_twistor(fixture.varpi, fixture.psi)
    twz = cf.dress_twistor(Wz, zero_form(rf.weyl_spin_matrix(ex.power(z, -1))) @ fixture.psi)
    assert max_deviation(cf.twistor_helicity(tw.psi1), cf.twistor_helicity(twz.psi1), points) < 1e-9


def test_flat_twistor_derivative(points):
    psi = zero_form([[0], [0], [ex.coord(2)], [ex.I]])
    tw = cf.dress_twistor(flat_model(), psi)
    assert max_deviation(tw.D, psi.d(), points) == 0
    psi = zero_form([[ex.coord(0)], [1], [ex.coord(2)], [ex.I]])
    tw = cf.dress_twistor(flat_model(), psi)
    assert max_deviation(tw.D, cf.twistor_covariant_closed(flat_model(), tw.psi1), points) < 1e-14


def test_spin_connection_membership(fixture, points):
    tw = cf.dress_twistor(fixture.varpi, fixture.psi)
    (v,) = values([tw.form], points)
    assert max(groups.ALGEBRAS["su(2,2)"](m) for comp in v for m in comp) < 1e-10


def test_spin_dressing_uses_bar_of_q(fixture, points):
    q = cf.boost_q(fixture.varpi.a, fixture.varpi.e_inv)
    ub = matrix_values(cf.spin_boost_dressing(fixture.varpi).value, points)
    qb = matrix_values(groups.cobar_map(q), points)
    assert np.allclose(ub[:, 0:2, 2:4], -1j * qb)
    d = cf.dress_tractor(fixture.varpi)
    tw = cf.dress_twistor(fixture.varpi)
    assert max_deviation(cf.build_spin_cartan(d.varpi1.form), tw.form, points) < 1e-10


def test_normal_connection_of_minkowski(points):
    N = cf.normal_cartan(eye(4))
    assert small([N.A, N.P], points) == 0


def _w_trace(N, points):
    curv = cf.conformal_curvature(N.form)
    comp = cf._frame_components(curv["W"], N.e_inv)
    tr = [ex.add(*[comp[a, b, a, d] for a in range(DIM)]) for b in range(DIM) for d in range(DIM)]
    return curv, float(np.max(np.abs(ex.evaluate(tr, points))))


def test_normal_connection_conformally_flat(fixture, points):
    label, e, ei = fixture.normal_tetrads[0]
    assert label == "conformally_flat"
    N = cf.normal_cartan(e, ei)
    curv, w_trace = _w_trace(N, points)
    th = N.theta
    assert all(normal.is_zero(x) for m in (th.d() + N.A @ th).comps.values() for x in m.flat)
    assert small([curv["f"]], points) < 1e-9
    assert w_trace < 1e-8


def test_cotton_block_against_finite_differences(fixture, points):
    pts = points[:4] * 0.6
    for _, e, ei in fixture.normal_tetrads:
        N = cf.normal_cartan(e, ei)
        (cv,) = values([cf.cotton_block(N)], pts)
        cfd = oracles.cotton_fd(oracles.metric_function(induced_metric(e, ei).g), pts)
        eiv = ex.evaluate(list(ei.flat), pts).T.reshape(len(pts), DIM, DIM).real
        # symbolic C_b as coordinate 2-form components (m<v); oracle in the frame index b
        idx = [(m, v) for m in range(DIM) for v in range(m + 1, DIM)]
        sym = np.stack([cv[k, :, 0, :].real for k in range(len(idx))], axis=1)  # [n, pair, b]
        fd = np.stack([np.einsum("nlb,nl->nb", eiv, cfd[:, :, m, v]) for m, v in idx], axis=1)
        assert np.max(np.abs(sym - fd)) < 1e-8
