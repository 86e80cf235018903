import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from dressing import groups as G
from dressing import random_fields as rf

SIGMA_ETA = np.diag([1.0, -1.0, -1.0, -1.0])
floats = st.floats(-2, 2, allow_nan=False)


def sigma_form():
    s = np.zeros((6, 6))
    s[0, 5] = s[5, 0] = 1.0
    s[1:5, 1:5] = -SIGMA_ETA
    return s


def test_eta_transpose_examples():
    assert np.allclose(G.eta_transpose(np.array([[1.0, 0, 0, 0]])).ravel(), [1, 0, 0, 0])
    assert np.allclose(G.eta_transpose(np.array([[0, 1.0, 0, 0]])).ravel(), [0, -1, 0, 0])


@given(st.lists(floats, min_size=4, max_size=4))
def test_eta_transpose_involution(r):
    r = np.array([r])
    col = G.eta_transpose(r)
    assert np.allclose(G.eta_transpose(col.T), r.T)
    assert np.allclose((SIGMA_ETA @ col).T, r)


def test_k0_examples():
    assert np.allclose(G.conformal_H_compose(1.0, np.eye(4), np.zeros((1, 4))), np.eye(6))
    assert np.allclose(G.k0_matrix(2.0, np.eye(4)), np.diag([2, 1, 1, 1, 1, 0.5]))


def test_generic_h_element_preserves_sigma(rng):
    sig = sigma_form()
    for _ in range(10):
        S = G.random_lorentz(rng)
        m = G.conformal_H_compose(float(rng.uniform(0.5, 2)), S, rng.normal(size=(1, 4)))
        assert np.max(np.abs(m.T @ sig @ m - sig)) < 1e-12


def test_decompose_round_trip(rng):
    assert G.decompose_conformal_H(np.eye(6))[0] == pytest.approx(1.0)
    z, S, r = G.decompose_conformal_H(G.k1_matrix(np.array([[1.0, 2, 3, 4]])))
    assert z == pytest.approx(1.0)
    assert np.allclose(S, np.eye(4)) and np.allclose(r, [[1, 2, 3, 4]])
    for _ in range(100):
        z0, S0, r0 = float(rng.uniform(0.3, 3)), G.random_lorentz(rng), rng.normal(size=(1, 4))
        z1, S1, r1 = G.decompose_conformal_H(G.conformal_H_compose(z0, S0, r0))
        assert z1 == pytest.approx(z0) and np.allclose(S1, S0) and np.allclose(r1, r0)


def test_bar_map_examples():
    assert np.allclose(G.bar_map([1, 0, 0, 0]), np.eye(2))
    assert np.allclose(G.bar_map([0, 0, 0, 1]), np.diag([1, -1]))


def test_bar_det_is_quadratic_form(rng):
    for _ in range(50):
        x = rng.normal(size=4)
        assert abs(np.linalg.det(G.bar_map(x)) - x @ SIGMA_ETA @ x) < 1e-12


def test_spin_cover_kernel():
    assert np.allclose(G.spin_cover(np.eye(2)), np.eye(4))
    assert np.allclose(G.spin_cover(-np.eye(2)), np.eye(4))


def test_spin_cover_rotation_against_conjugation():
    phi = 0.7
    sb = scipy.linalg.expm(1j * phi * G.PAULI[3] / 2)
    # oracle: conjugate each sigma_b and read the coefficients off with the trace pairing
    oracle = np.array(
        [[0.5 * np.trace(G.PAULI[a] @ sb @ G.PAULI[b] @ sb.conj().T).real for b in range(4)] for a in range(4)]
    )
    S = G.spin_cover(sb)
    assert np.allclose(S, oracle)
    c, s = np.cos(phi), np.sin(phi)
    assert np.allclose(S[1:3, 1:3], [[c, s], [-s, c]])
    assert np.allclose(S[0, 0], 1) and np.allclose(S[3, 3], 1)


def _rand_sl2c(rng):
    m = sum((rng.normal() + 1j * rng.normal()) * 0.5 * G.PAULI[k] for k in (1, 2, 3))
    return scipy.linalg.expm(m)


def test_spin_cover_morphism(rng):
    for _ in range(50):
        a, b = _rand_sl2c(rng), _rand_sl2c(rng)
        assert np.max(np.abs(G.spin_cover(a @ b) - G.spin_cover(a) @ G.spin_cover(b))) < 1e-10


def test_iso_zero_and_dilation():
    z = G.so24_to_su22(0.0, np.zeros((4, 4)), np.zeros((4, 1)), np.zeros((1, 4)))
    assert np.allclose(z, 0)
    d = G.so24_to_su22(1.0, np.zeros((4, 4)), np.zeros((4, 1)), np.zeros((1, 4)))
    assert np.allclose(d, np.diag([0.5, 0.5, -0.5, -0.5]))


def _img(m):
    return np.asarray(G.so24_to_su22(*G.so24_params(m)), dtype=complex)


def test_iso_brackets_100_pairs(rng):
    basis = rf.so24_basis()
    for _ in range(100):
        x = sum(c * b for c, b in zip(rng.normal(size=15), basis))
        y = sum(c * b for c, b in zip(rng.normal(size=15), basis))
        lhs = _img(x @ y - y @ x)
        rhs = _img(x) @ _img(y) - _img(y) @ _img(x)
        assert np.max(np.abs(lhs - rhs)) < 1e-10
        assert G.ALGEBRAS["su(2,2)"](_img(x)) < 1e-10
        assert G.ALGEBRAS["so(2,4)"](x) < 1e-10


def test_so13_to_sl2c_is_cover_derivative(rng):
    basis = rf.so13_basis()
    for _ in range(10):
        s = sum(c * b for c, b in zip(rng.normal(size=6), basis))
        t = 1e-6
        S = G.spin_cover(scipy.linalg.expm(t * np.asarray(G.so13_to_sl2c(s), dtype=complex)))
        assert np.max(np.abs((S - np.eye(4)) / t - s)) < 1e-5


@settings(max_examples=30, deadline=None)
@given(st.lists(floats, min_size=6, max_size=6))
def test_random_lorentz_generators_preserve_eta(coefs):
    s = sum(c * b for c, b in zip(coefs, rf.so13_basis()))
    S = scipy.linalg.expm(s)
    assert np.max(np.abs(S.T @ SIGMA_ETA @ S - SIGMA_ETA)) < 1e-9 * max(1.0, np.max(np.abs(S)) ** 2)
