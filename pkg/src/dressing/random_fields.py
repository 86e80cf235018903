"""Seeded random symbolic fields and group-valued maps.

Coefficients are exact rationals in [-1/2, 1/2] so that exact normalization
stays available.  Group-valued maps are products of one-parameter subgroups
with polynomial parameters; each comes with its exact inverse, and
trigonometric and hyperbolic functions are written through ``exp`` so that
identities such as ``cos^2 + sin^2 = 1`` hold in normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import expr as ex
from . import groups
from .forms import DIM, MatrixForm, _indices, as_matrix, eye, mat_mul, zeros

HALF = Fraction(1, 2)


def rat(rng: np.random.Generator, scale=1) -> Fraction:
    return Fraction(int(rng.integers(-500, 501)), 1000) * Fraction(scale)


def random_poly(rng, degree: int = 2, nterms: int = 3, scale=1, constant: bool = True) -> ex.Expr:
    """Sum of a few random monomials of total degree <= degree."""
    exps = [p for p in product(range(degree + 1), repeat=DIM) if sum(p) <= degree and (constant or sum(p) > 0)]
    picks = rng.choice(len(exps), size=min(nterms, len(exps)), replace=False)
    return ex.add(*(ex.monomial(rat(rng, scale), exps[int(k)]) for k in sorted(picks)))


def sample_points(rng, n: int, box: float = 0.5) -> np.ndarray:
    return rng.uniform(-box, box, size=(n, DIM))


def cos_(a):
    return HALF * (ex.exp(ex.I * a) + ex.exp(-ex.I * a))


def sin_(a):
    return -ex.I * HALF * (ex.exp(ex.I * a) - ex.exp(-ex.I * a))


def cosh_(a):
    return HALF * (ex.exp(a) + ex.exp(-a))


def sinh_(a):
    return HALF * (ex.exp(a) - ex.exp(-a))


@dataclass(frozen=True)
class MapSample:
    """A group-valued 0-form with its inverse, both as Expr matrices."""

    value: np.ndarray
    inverse: np.ndarray
    params: tuple = ()


def _chain(factors):
    """Product of (g, g^-1) pairs with the inverse in reverse order."""
    g, gi = factors[0]
    for f, fi in factors[1:]:
        g = mat_mul(g, f)
        gi = mat_mul(fi, gi)
    return g, gi


def _su2_factor(k: int, th) -> tuple[np.ndarray, np.ndarray]:
    c, s = cos_(HALF * th), sin_(HALF * th)
    sig = groups.PAULI[k]

    def build(sign):
        m = zeros(2)
        for i in range(2):
            for j in range(2):
                terms = []
                if i == j:
                    terms.append(c)
                if sig[i, j] != 0:
                    terms.append(ex.mul(ex.const(complex(sig[i, j])), ex.I, sign, s))
                m[i, j] = ex.add(*terms) if terms else ex.ZERO
        return m

    return build(1), build(-1)


def su2_map(rng, scale=1) -> MapSample:
    """prod_k exp(i theta_k sigma_k / 2) with polynomial theta_k."""
    th = [random_poly(rng, scale=scale) for _ in range(3)]
    g, gi = _chain([_su2_factor(k + 1, th[k]) for k in range(3)])
    return MapSample(g, gi, tuple(th))


def u1_phase(rng, scale=1) -> tuple[ex.Expr, ex.Expr]:
    th = random_poly(rng, scale=scale)
    return ex.exp(ex.I * th), ex.exp(-ex.I * th)


def u1_map(rng, n: int = 1, scale=1) -> MapSample:
    a, ai = u1_phase(rng, scale)
    m, mi = eye(n), eye(n)
    for i in range(n):
        m[i, i], mi[i, i] = a, ai
    return MapSample(m, mi)


_ROT_PLANES = {1: (2, 3), 2: (3, 1), 3: (1, 2)}


def boost(k: int, beta) -> np.ndarray:
    m = eye(4)
    m[0, 0] = m[k, k] = cosh_(beta)
    m[0, k] = m[k, 0] = sinh_(beta)
    return m


def rotation(k: int, phi) -> np.ndarray:
    """Rotation about axis k: e_i -> cos e_i + sin e_j in the cyclic plane (i, j)."""
    i, j = _ROT_PLANES[k]
    m = eye(4)
    m[i, i] = m[j, j] = cos_(phi)
    m[j, i] = sin_(phi)
    m[i, j] = -sin_(phi)
    return m


def boost_lift(k: int, beta) -> np.ndarray:
    """cosh(beta/2) + sinh(beta/2) sigma_k."""
    return _pauli_combo(cosh_(HALF * beta), sinh_(HALF * beta), k, 1)


def rotation_lift(k: int, phi) -> np.ndarray:
    """cos(phi/2) - i sin(phi/2) sigma_k."""
    return _pauli_combo(cos_(HALF * phi), sin_(HALF * phi), k, -ex.I)


def _pauli_combo(c, s, k, factor) -> np.ndarray:
    sig = groups.PAULI[k]
    m = zeros(2)
    for i in range(2):
        for j in range(2):
            terms = [c] if i == j else []
            if sig[i, j] != 0:
                terms.append(ex.mul(ex.const(complex(sig[i, j])), factor, s))
            if terms:
                m[i, j] = ex.add(*terms)
    return m


@dataclass(frozen=True)
class LorentzSample:
    value: np.ndarray
    inverse: np.ndarray
    spin: np.ndarray
    spin_inverse: np.ndarray


def lorentz_map(rng, scale=1, generators=None) -> LorentzSample:
    """Product of boosts and rotations with polynomial parameters, plus its spin lift."""
    gens = generators or [("b", 1), ("b", 2), ("b", 3), ("r", 1), ("r", 2), ("r", 3)]
    vec, spin = [], []
    for kind, k in gens:
        p = random_poly(rng, scale=scale)
        if kind == "b":
            vec.append((boost(k, p), boost(k, -p)))
            spin.append((boost_lift(k, p), boost_lift(k, -p)))
        else:
            vec.append((rotation(k, p), rotation(k, -p)))
            spin.append((rotation_lift(k, p), rotation_lift(k, -p)))
    s, si = _chain(vec)
    sb, sbi = _chain(spin)
    return LorentzSample(s, si, sb, sbi)


def embed_lorentz(s: np.ndarray) -> np.ndarray:
    """diag(1, S, 1) in the 6x6 conformal presentation."""
    m = eye(6)
    m[1:5, 1:5] = s
    return m


def embed_spin(sb: np.ndarray, sbi: np.ndarray) -> np.ndarray:
    """diag(Sb^{-1 *}, Sb) in the 4x4 twistor presentation."""
    conj = np.frompyfunc(ex.conj, 1, 1)
    m = zeros(4)
    m[0:2, 0:2] = np.asarray(conj(sbi), dtype=object).T
    m[2:4, 2:4] = sb
    return m


def k1_map(rng, scale=1) -> tuple[MapSample, list]:
    r = [random_poly(rng, scale=scale) for _ in range(4)]
    m = as_matrix(groups.k1_matrix(r))
    mi = as_matrix(groups.k1_matrix([-x for x in r]))
    return MapSample(m, mi, tuple(r)), r


def weyl_factor(rng, scale=1) -> ex.Expr:
    """z = exp(sigma) with polynomial sigma."""
    return ex.exp(random_poly(rng, scale=scale))


def weyl_matrix(z) -> np.ndarray:
    m = eye(6)
    m[0, 0] = ex._lift(z)
    m[5, 5] = ex.power(ex._lift(z), -1)
    return m


def weyl_spin_matrix(z) -> np.ndarray:
    m = eye(4)
    h = ex.sqrt(ex._lift(z))
    m[0, 0] = m[1, 1] = h
    m[2, 2] = m[3, 3] = ex.power(h, -1)
    return m


# algebra bases ------------------------------------------------------------------


def su2_basis() -> list[np.ndarray]:
    return [1j * groups.PAULI[k] for k in (1, 2, 3)]


def u2_basis() -> list[np.ndarray]:
    return [1j * groups.PAULI[k] for k in range(4)]


def so13_basis() -> list[np.ndarray]:
    out = []
    for a in range(4):
        for b in range(a + 1, 4):
            k = np.zeros((4, 4))
            k[a, b], k[b, a] = 1, -1
            out.append(groups.ETA @ k)
    return out


def so24_basis() -> list[np.ndarray]:
    out = []
    for a in range(6):
        for b in range(a + 1, 6):
            k = np.zeros((6, 6))
            k[a, b], k[b, a] = 1, -1
            out.append(groups.SIGMA @ k)
    return out


def _combo(basis, coeffs) -> np.ndarray:
    shape = basis[0].shape
    m = zeros(*shape)
    for i in range(shape[0]):
        for j in range(shape[1]):
            terms = [ex.mul(ex.const(complex(b[i, j])), c) for b, c in zip(basis, coeffs) if b[i, j] != 0 and not c.is_zero]
            if terms:
                m[i, j] = ex.add(*terms)
    return m


def algebra_form(rng, basis, degree: int = 1, density: float = 0.5, scale=1, nterms: int = 2) -> MatrixForm:
    """Random algebra-valued p-form; each coefficient is nonzero with probability density."""
    comps = {}
    for idx in _indices(degree):
        coeffs = [random_poly(rng, nterms=nterms, scale=scale) if rng.random() < density else ex.ZERO for _ in basis]
        comps[idx] = _combo(basis, coeffs)
    return MatrixForm(degree, comps, basis[0].shape)


def section(rng, n: int, complex_: bool = True, scale=1, nterms: int = 2) -> MatrixForm:
    """Random column of n scalar 0-forms."""
    col = zeros(n, 1)
    for i in range(n):
        v = random_poly(rng, nterms=nterms, scale=scale)
        if complex_:
            v = v + ex.I * random_poly(rng, nterms=nterms, scale=scale)
        col[i, 0] = v
    return MatrixForm(0, {(): col})


def tetrad(rng, scale=Fraction(1, 5), density: float = 0.35, nterms: int = 1, degree: int = 2) -> np.ndarray:
    """1 + a sparse small polynomial perturbation, as a 4x4 Expr matrix e^a_mu."""
    e = eye(4)
    for a in range(4):
        for mu in range(4):
            if rng.random() < density:
                e[a, mu] = e[a, mu] + random_poly(rng, degree=degree, nterms=nterms, scale=scale, constant=False)
    return e
