import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dressing import expr as ex
from dressing import gauge as gg
from dressing import gr_tetrad as gr
from dressing import random_fields as rf
from dressing.fixtures import random_fixture
from dressing.forms import MatrixForm, as_matrix, eye, mat_mul, values

ETA = np.diag([1.0, -1.0, -1.0, -1.0])
X1 = ex.coord(1)


def mvals(m, points):
    return gg.matrix_values(m, points)


def zero_A():
    return MatrixForm.zero(1, (4, 4))


def test_trivial_tetrad(points):
    M = gr.tetrad_dress(gr.PoincareCartan(zero_A(), eye(4)), points)
    assert gg.max_deviation(M.Gamma, zero_A(), points) == 0
    assert np.allclose(mvals(M.metric.g, points), ETA)


def test_constant_scaled_tetrad(rng, points):
    A = rf.algebra_form(rng, rf.so13_basis())
    c = 1.7
    e = as_matrix(np.diag([c] * 4).tolist())
    M = gr.tetrad_dress(gr.PoincareCartan(A, e), points)
    assert gg.max_deviation(M.Gamma, A, points) < 1e-14
    assert np.allclose(mvals(M.metric.g, points), c**2 * ETA)


def test_induced_metric_diagonal(points):
    f = ex.add(1, ex.mul(ex.Fraction(1, 3), X1))
    e = eye(4)
    e[0, 0] = f
    g = mvals(gr.induced_metric(e).g, points)
    fv = 1 + points[:, 1] / 3
    assert np.allclose(g[:, 0, 0], fv**2)
    assert np.allclose(g[:, 1:, 1:], -np.eye(3))


def test_metric_invariant_under_lorentz(rng, points):
    P = random_fixture("gr", rng).P
    L = rf.lorentz_map(rng, scale=ex.Fraction(1, 2))
    P2 = gr.lorentz_transform(P, L.value, L.inverse)
    assert np.allclose(mvals(gr.induced_metric(P2.e, P2.e_inv).g, points), mvals(gr.induced_metric(P.e).g, points))


def test_lorentz_erasure(rng, points):
    P = random_fixture("gr", rng).P
    L = rf.lorentz_map(rng, scale=ex.Fraction(1, 2))
    M = gr.tetrad_dress(P, points)
    M2 = gr.tetrad_dress(gr.lorentz_transform(P, L.value, L.inverse), points)
    for x, y in ((M.Gamma, M2.Gamma), (M.sR, M2.sR), (M.T, M2.T)):
        assert gg.max_deviation(x, y, points) < 1e-10


def test_metricity_flat_and_random(rng, points):
    flat = gr.tetrad_dress(gr.PoincareCartan(zero_A(), eye(4)), points)
    assert gr.metricity_residual(flat, points) == 0
    P = random_fixture("gr", rng).P
    assert gr.metricity_residual(gr.tetrad_dress(P, points), points) < 1e-12
    assert gr.metricity_symbolic(P)


def test_metricity_detects_corruption(rng, points):
    P = random_fixture("gr", rng).P
    bump = np.zeros((4, 4))
    bump[1, 2] = 1e-3  # breaks the eta-antisymmetry of A
    corrupted = P.A + MatrixForm(1, {(0,): as_matrix(bump.tolist())}, (4, 4))
    P2 = gr.PoincareCartan(corrupted, P.e, P.e_inv)
    res = gr.metricity_residual(gr.tetrad_dress(P2, points), points)
    assert 1e-4 < res < 1e-2
    assert not gr.metricity_symbolic(P2)


def test_degenerate_tetrad(points):
    e = eye(4)
    e[2, 2] = ex.ZERO
    with pytest.raises(gr.DegenerateTetradError):
        gr.tetrad_dress(gr.PoincareCartan(zero_A(), e), points)


def test_flat_lagrangians_vanish(points):
    P = gr.PoincareCartan(zero_A(), eye(4))
    zero4 = MatrixForm.zero(4, (1, 1))
    assert gg.max_deviation(gr.palatini_lagrangian(P), zero4, points) == 0
    assert gg.max_deviation(gr.einstein_hilbert_lagrangian(gr.tetrad_dress(P)), zero4, points) == 0


def _diag_case(f):
    e = eye(4)
    e[0, 0] = f
    return gr.PoincareCartan(gr.levi_civita_spin_connection(e), e)


def test_palatini_equals_eh_on_linear_diagonal(points):
    # e^0_0 = 1 + eps x1 is a Rindler frame: both sides vanish
    P = _diag_case(ex.add(1, ex.mul(ex.Fraction(3, 10), X1)))
    M = gr.tetrad_dress(P, points)
    zero4 = MatrixForm.zero(4, (1, 1))
    assert gg.max_deviation(gr.palatini_lagrangian(P), zero4, points) < 1e-14
    assert gg.max_deviation(gr.einstein_hilbert_lagrangian(M), zero4, points) < 1e-14


def test_palatini_equals_eh_on_curved_diagonal(points):
    P = _diag_case(ex.add(1, ex.mul(ex.Fraction(3, 10), X1, X1)))
    M = gr.tetrad_dress(P, points)
    Lp, Le = gr.palatini_lagrangian(P), gr.einstein_hilbert_lagrangian(M)
    assert gg.max_deviation(Lp, Le, points, relative=True) < 1e-12
    assert gg.max_deviation(P.torsion(), MatrixForm.zero(2, (4, 1)), points) < 1e-13
    (v,) = values([Le], points)
    assert np.max(np.abs(v)) > 1e-3


def test_lagrangians_scale_together(rng, points):
    P = random_fixture("gr", rng).P
    c = 1.9
    Pc = gr.PoincareCartan(P.A, mat_mul(as_matrix(np.diag([c] * 4).tolist()), P.e))
    (p1, p2) = values([gr.palatini_lagrangian(P), gr.palatini_lagrangian(Pc)], points)
    (e1, e2) = values([gr.einstein_hilbert_lagrangian(gr.tetrad_dress(P)), gr.einstein_hilbert_lagrangian(gr.tetrad_dress(Pc))], points)
    assert np.allclose(p2, c**2 * p1, rtol=1e-10, atol=1e-14)
    assert np.allclose(e2, c**2 * e1, rtol=1e-10, atol=1e-14)


def test_coordinate_change_identity_and_constant(rng, points):
    M = gr.tetrad_dress(random_fixture("gr", rng).P, points)
    Mi = gr.coordinate_change(M, eye(4))
    assert gg.max_deviation(Mi.Gamma, M.Gamma, points) == 0
    G = as_matrix(np.diag([2, 1, 1, 1]).tolist())
    Mg = gr.coordinate_change(M, G)
    g0, g1 = mvals(M.metric.g, points), mvals(Mg.metric.g, points)
    Gn = np.diag([2.0, 1, 1, 1])
    assert np.allclose(g1, Gn.T @ g0 @ Gn)


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_coordinate_change_composes(seed):
    rng = np.random.default_rng(seed)
    pts = rf.sample_points(rng, 6)
    M = gr.tetrad_dress(random_fixture("gr", rng).P, pts)
    G1, G2 = rf.tetrad(rng), rf.tetrad(rng)
    Ma = gr.coordinate_change(gr.coordinate_change(M, G1), G2)
    Mb = gr.coordinate_change(M, mat_mul(G1, G2))
    assert gg.max_deviation(Ma.Gamma, Mb.Gamma, pts) < 1e-10
    assert gg.max_deviation(Ma.T, Mb.T, pts) < 1e-10
    L0, L1 = gr.einstein_hilbert_lagrangian(M), gr.einstein_hilbert_lagrangian(Ma)
    assert gg.max_deviation(L0, L1, pts, relative=True) < 1e-10
