from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dressing import expr as ex
from dressing import normal
from dressing import random_fields as rf
from dressing.forms import (
    as_matrix,
    scale,
    ETA,
    MatrixForm,
    Metric,
    DegenerateMetricError,
    dx,
    evaluate,
    exterior_d,
    graded_commutator,
    hodge,
    one_form,
    values,
    wedge,
    zero_form,
)
from dressing.groups import PAULI

X0, X1, X2 = ex.coord(0), ex.coord(1), ex.coord(2)


def vanishes(f):
    """Exact zero after normalization of every entry."""
    return all(normal.is_zero(x) for m in f.comps.values() for x in m.flat)


def mdx(m, *mus, coef=None):
    """Matrix m times dx^mus (times an optional scalar coefficient)."""
    m = as_matrix(m)
    if coef is not None:
        m = scale(m, coef)
    return MatrixForm(len(mus), {tuple(mus): m}, m.shape)


def test_d_of_x0_dx1():
    f = dx(1) * X0
    assert not vanishes(exterior_d(f))
    assert vanishes(exterior_d(f) - dx(0, 1))


def test_d_of_constant_matrix_is_zero():
    f = zero_form([[1, 2], [3, ex.I]])
    out = f.d()
    assert out.degree == 1 and vanishes(out)


def test_d_of_x0x1_dx2_matches_partials():
    f = dx(2) * ex.mul(X0, X1)
    got = f.d()
    expected = dx(0, 2) * X1 + dx(1, 2) * X0
    assert vanishes(got - expected)


def test_wedge_of_identity_blocks():
    one = np.eye(2).tolist()
    assert vanishes(wedge(mdx(one, 0), mdx(one, 1)) - mdx(one, 0, 1))


def test_wedge_antisymmetry():
    assert vanishes(wedge(dx(0), dx(0)))


def _pauli(k):
    return PAULI[k].astype(complex).tolist()


def _pauli_form(k):
    return zero_form(_pauli(k))


def test_wedge_square_is_commutator_proportional():
    A = mdx(_pauli(1), 0, coef=X1) + mdx(_pauli(2), 1, coef=X0)
    AA = wedge(A, A)
    comm = PAULI[1] @ PAULI[2] - PAULI[2] @ PAULI[1]
    expected = mdx(comm.tolist(), 0, 1, coef=ex.mul(X0, X1))
    assert vanishes(AA - expected)


def test_graded_commutator_abelian_vanishes():
    w = dx(1) * X0 + dx(3) * ex.mul(X2, X2)
    assert vanishes(graded_commutator(w, w))


def test_graded_commutator_zero_forms():
    f, g = _pauli_form(1) * X0, _pauli_form(3)
    assert vanishes(graded_commutator(f, g) - (f @ g - g @ f))


def test_half_bracket_equals_wedge(rng, points):
    w = rf.algebra_form(rng, rf.su2_basis(), scale=1)
    lhs = w.d() + graded_commutator(w, w) * ex.Fraction(1, 2)
    rhs = w.d() + w @ w
    va, vb = values([lhs, rhs], points)
    assert np.max(np.abs(va - vb)) < 1e-12


def test_hodge_of_one_is_volume():
    assert vanishes(hodge(zero_form([[1]])) - dx(0, 1, 2, 3))


def _levi_civita_hodge(form_components, p):
    """Independent oracle: (*f)_J = (1/p!) f_I eta^{II'} eps_{I'J} in signature (+,-,-,-)."""
    eta = np.diag([1.0, -1.0, -1.0, -1.0])
    eps = np.zeros((4,) * 4)
    for perm in permutations(range(4)):
        eps[perm] = np.linalg.det(np.eye(4)[list(perm)])
    raised = np.einsum("a,ab->b", form_components, eta) if p == 1 else None
    return np.einsum("a,abcd->bcd", raised, eps)


def test_hodge_of_dx0():
    got = hodge(dx(0))
    f = np.zeros(4)
    f[0] = 1.0
    oracle = _levi_civita_hodge(f, 1)
    assert vanishes(got - dx(1, 2, 3) * int(oracle[1, 2, 3]))
    assert oracle[1, 2, 3] == 1.0


def test_double_hodge_on_two_forms():
    f = dx(0, 1)
    assert vanishes(hodge(hodge(f)) + f)


def test_evaluate_on_vectors():
    e = np.eye(4)
    assert evaluate(dx(0, 1), np.zeros(4), [e[0], e[1]])[0, 0] == 1
    assert evaluate(dx(0, 1), np.zeros(4), [e[1], e[0]])[0, 0] == -1
    assert evaluate(dx(2) * X0, [2, 0, 0, 0], [e[2]])[0, 0] == 2


def test_degenerate_metric_detected():
    g = Metric.from_matrix([[X0, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]])
    with pytest.raises(DegenerateMetricError):
        g.check(np.zeros((1, 4)))


def test_json_round_trip(rng):
    f = rf.algebra_form(rng, rf.so13_basis(), scale=ex.Fraction(1, 2))
    assert vanishes(MatrixForm.from_json(f.to_json()) - f)


def test_expr_integral_floats_become_exact():
    assert ex.const(2.0).is_exact
    assert not ex.const(0.6000000000000001).is_exact


def test_expr_diff_and_subs():
    f = ex.mul(ex.exp(X0), ex.power(X1, 3))
    d1 = ex.diff(f, 1)
    val = ex.evaluate([d1], np.array([[0.3, 2.0, 0, 0]]))[0, 0]
    assert abs(val - np.exp(0.3) * 12.0) < 1e-12
    g = ex.subs(f, {ex.coord(1): ex.const(2)})
    assert abs(ex.evaluate([g], np.zeros((1, 4)))[0, 0] - 8.0) < 1e-12


poly_terms = st.lists(
    st.tuples(st.integers(-5, 5), st.lists(st.integers(0, 2), min_size=4, max_size=4)), min_size=1, max_size=4
)


def _poly(terms):
    return ex.add(*[ex.monomial(ex.const(c), k) for c, k in terms])


@settings(max_examples=40, deadline=None)
@given(poly_terms, st.integers(0, 3))
def test_dd_is_zero(terms, p):
    c = _poly(terms)
    f = zero_form([[c]]) if p == 0 else None
    for k, idx in enumerate(combinations(range(4), p) if p else ()):
        term = dx(*idx) * ex.mul(c, ex.coord(k % 4))
        f = term if f is None else f + term
    assert vanishes(f.d().d())


@settings(max_examples=30, deadline=None)
@given(poly_terms, poly_terms, st.integers(0, 2), st.integers(0, 2))
def test_leibniz(t1, t2, p, q):
    def mk(terms, deg, shift):
        if deg == 0:
            return zero_form([[_poly(terms)]])
        return dx(*range(shift, shift + deg)) * _poly(terms)

    f, g = mk(t1, p, 0), mk(t2, q, 4 - q)
    lhs = wedge(f, g).d()
    rhs = wedge(f.d(), g) + wedge(f, g.d()) * (-1) ** p
    assert vanishes(lhs - rhs)


def test_one_form_constructor():
    f = one_form([[[X0]], [[0]], [[0]], [[X1]]])
    assert f.degree == 1 and f.shape == (1, 1)
    assert ETA.sqrt_abs_det.is_one
