"""Matrix presentations of the groups and algebras used by the dressing constructions.

Functions accept numeric arrays or object arrays of :class:`~dressing.expr.Expr`
where that makes sense, so the same formulas build both sample matrices and
symbolic fields.

Index conventions:

* ``eta = diag(1, -1, -1, -1)``; row covectors r are eta-transposed to the
  column ``r^t = (r eta^-1)^T``.
* vectors map to hermitian matrices by ``x -> x^a sigma_a``; covectors use the
  trace-dual basis ``sigma^a = sigma_a / 2``, which is what makes the
  so(2,4) -> su(2,2) map a Lie algebra morphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from . import expr as ex
from .forms import as_matrix, mat_mul

__all__ = [
    "PAULI",
    "ETA",
    "SIGMA",
    "SIGMA_BAR",
    "GroupSpec",
    "GROUPS",
    "ALGEBRAS",
    "MembershipError",
    "eta_transpose",
    "bar_map",
    "cobar_map",
    "unbar",
    "spin_cover",
    "so13_to_sl2c",
    "so24_element",
    "so24_params",
    "so24_to_su22",
    "k0_matrix",
    "k1_matrix",
    "conformal_H_compose",
    "decompose_conformal_H",
    "random_lorentz",
    "grade_components",
]

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
ETA = np.diag([1.0, -1.0, -1.0, -1.0])
SIGMA = np.zeros((6, 6))
SIGMA[0, 5] = SIGMA[5, 0] = -1.0
SIGMA[1:5, 1:5] = ETA
SIGMA_BAR = np.zeros((4, 4))
SIGMA_BAR[0:2, 2:4] = np.eye(2)
SIGMA_BAR[2:4, 0:2] = np.eye(2)
_ETA_DIAG = (1, -1, -1, -1)


class MembershipError(ValueError):
    pass


def _sym(*xs) -> bool:
    for x in xs:
        a = np.asarray(x, dtype=object) if not isinstance(x, np.ndarray) else x
        if a.dtype == object and any(isinstance(e, ex.Expr) for e in a.flat):
            return True
    return False


def _mm(a, b):
    if _sym(a, b):
        return mat_mul(as_matrix(a), as_matrix(b))
    return np.asarray(a) @ np.asarray(b)


def _iu(sym: bool):
    return ex.I if sym else 1j


def _flat(v):
    return list(np.asarray(v, dtype=object).reshape(-1))


def _herm2(c0, c1, c2, c3, sym):
    """c0 sigma_0 + c1 sigma_1 + c2 sigma_2 + c3 sigma_3."""
    i = _iu(sym)
    m = [[c0 + c3, c1 - i * c2], [c1 + i * c2, c0 - c3]]
    return as_matrix(m) if sym else np.array(m, dtype=complex)


def eta_transpose(r):
    """Column ``(r eta^-1)^T`` of a row covector r (1x4 or length 4)."""
    vals = _flat(r)
    if len(vals) != 4:
        raise ValueError("eta-transposition needs a 4-covector")
    col = [vals[a] * _ETA_DIAG[a] for a in range(4)]
    if _sym(r):
        return as_matrix(col)
    return np.array(col, dtype=float if np.isrealobj(np.asarray(r)) else complex).reshape(4, 1)


def bar_map(x):
    """Hermitian 2x2 matrix ``x^a sigma_a`` of a 4-vector."""
    v = _flat(x)
    return _herm2(v[0], v[1], v[2], v[3], _sym(x))


def cobar_map(r):
    """Hermitian 2x2 matrix ``r_a sigma^a`` of a covector, ``sigma^a = sigma_a / 2``."""
    v = _flat(r)
    half = ex.const(ex.Fraction(1, 2)) if _sym(r) else 0.5
    return _herm2(*(half * c for c in v), _sym(r))


def unbar(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    return np.array([0.5 * np.trace(PAULI[a] @ m) for a in range(4)])


def spin_cover(sb, tol: float = 1e-10) -> np.ndarray:
    """Lorentz matrix S with bar(S x) = Sb bar(x) Sb^*, for Sb in SL(2,C)."""
    sb = np.asarray(sb, dtype=complex)
    if abs(np.linalg.det(sb) - 1) > tol:
        raise MembershipError("spin cover needs det = 1")
    s = np.empty((4, 4))
    for a in range(4):
        for b in range(4):
            s[a, b] = 0.5 * np.trace(PAULI[a] @ sb @ PAULI[b] @ sb.conj().T).real
    return s


_EPS3 = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}


def so13_to_sl2c(s):
    """Image of s in so(1,3) under the derivative of the spin cover.

    Boost generators (s[k,0] = s[0,k]) map to sigma_k / 2, rotations
    (s[l,j] = phi eps_{kjl}) to -i phi sigma_k / 2.
    """
    sym = _sym(s)
    s = as_matrix(s) if sym else np.asarray(s)
    i = _iu(sym)
    coef = []
    for k in range(3):
        c = s[k + 1, 0] * (ex.Fraction(1, 2) if sym else 0.5)
        rot = []
        for (kk, j, l), e in _EPS3.items():
            if kk == k:
                rot.append(e * s[l + 1, j + 1])
        r = rot[0]
        for t in rot[1:]:
            r = r + t
        coef.append(c - i * r * (ex.Fraction(1, 4) if sym else 0.25))
    zero = ex.ZERO if sym else 0.0
    return _herm2(zero, coef[0], coef[1], coef[2], sym)


def _dagger(m):
    if _sym(m):
        conj = np.frompyfunc(ex.conj, 1, 1)
        return np.asarray(conj(as_matrix(m)).T, dtype=object)
    return np.asarray(m).conj().T


def so24_element(eps, s, tau, iota):
    """[[eps, iota, 0], [tau, s, iota^t], [0, tau^t, -eps]] in so(2,4)."""
    sym = _sym(eps, s, tau, iota)
    tau_v = _flat(tau)
    iota_v = _flat(iota)
    if sym:
        m = np.empty((6, 6), dtype=object)
        m.fill(ex.ZERO)
        zero_s = as_matrix(s)
    else:
        m = np.zeros((6, 6))
        zero_s = np.asarray(s, dtype=float)
    m[0, 0] = eps
    m[5, 5] = -eps
    m[1:5, 1:5] = zero_s
    for a in range(4):
        m[0, 1 + a] = iota_v[a]
        m[1 + a, 5] = iota_v[a] * _ETA_DIAG[a]
        m[1 + a, 0] = tau_v[a]
        m[5, 1 + a] = tau_v[a] * _ETA_DIAG[a]
    return as_matrix(m) if sym else m


def so24_params(m):
    """(eps, s, tau, iota) of an so(2,4) matrix (no membership check)."""
    m = np.asarray(m)
    return m[0, 0], m[1:5, 1:5], m[1:5, 0].reshape(4, 1), m[0, 1:5].reshape(1, 4)


def so24_to_su22(eps, s, tau, iota):
    """[[-(sb^* - eps/2), -i iota_bar], [i tau_bar, sb - eps/2]] in su(2,2)."""
    sym = _sym(eps, s, tau, iota)
    i = _iu(sym)
    sb = so13_to_sl2c(s)
    half = ex.Fraction(1, 2) if sym else 0.5
    one = as_matrix(np.eye(2)) if sym else np.eye(2)
    e2 = _scale(one, eps * half, sym)
    ul = _neg(_sub(_dagger(sb), e2), sym)
    ur = _scale(cobar_map(iota), -i, sym)
    ll = _scale(bar_map(tau), i, sym)
    lr = _sub(sb, e2)
    if sym:
        return as_matrix(np.block([[ul, ur], [ll, lr]]))
    return np.block([[ul, ur], [ll, lr]])


def _scale(m, c, sym):
    if sym:
        out = np.empty(m.shape, dtype=object)
        for k, e in np.ndenumerate(m):
            out[k] = ex.mul(e, c)
        return out
    return m * c


def _sub(a, b):
    return a - b


def _neg(a, sym):
    return -a


def k0_matrix(z, s):
    """diag(z, S, 1/z)."""
    sym = _sym(z, s)
    if sym:
        m = np.empty((6, 6), dtype=object)
        m.fill(ex.ZERO)
        m[0, 0] = ex._lift(z)
        m[1:5, 1:5] = as_matrix(s)
        m[5, 5] = ex.power(ex._lift(z), -1)
        return m
    m = np.zeros((6, 6))
    m[0, 0] = z
    m[1:5, 1:5] = s
    m[5, 5] = 1.0 / z
    return m


def k1_matrix(r):
    """[[1, r, r r^t / 2], [0, 1_4, r^t], [0, 0, 1]] for a row covector r."""
    sym = _sym(r)
    v = _flat(r)
    rt = [v[a] * _ETA_DIAG[a] for a in range(4)]
    rr = v[0] * rt[0]
    for a in range(1, 4):
        rr = rr + v[a] * rt[a]
    if sym:
        m = np.empty((6, 6), dtype=object)
        m.fill(ex.ZERO)
        for a in range(6):
            m[a, a] = ex.ONE
        m[0, 5] = ex.mul(ex.Fraction(1, 2), rr)
    else:
        m = np.eye(6, dtype=complex if np.iscomplexobj(np.asarray(v)) else float)
        m[0, 5] = 0.5 * rr
    for a in range(4):
        m[0, 1 + a] = ex._lift(v[a]) if sym else v[a]
        m[1 + a, 5] = ex._lift(rt[a]) if sym else rt[a]
    return m


def lorentz_residual(s) -> float:
    s = np.asarray(s, dtype=float)
    return float(np.max(np.abs(s.T @ ETA @ s - ETA)))


def conformal_H_compose(z, s, r, tol: float = 1e-8):
    """K0(z, S) K1(r) as a 6x6 matrix."""
    if not _sym(z, s, r):
        if lorentz_residual(s) >= tol:
            raise MembershipError("S is not a Lorentz matrix")
        if not z > 0:
            raise MembershipError("Weyl factor must be positive")
    return _mm(k0_matrix(z, s), k1_matrix(r))


def decompose_conformal_H(m, tol: float = 1e-8):
    """(z, S, r) with conformal_H_compose(z, S, r) = m."""
    m = np.asarray(m, dtype=float)
    lower = np.concatenate([m[1:, 0], m[5, 1:5]])
    if m.shape != (6, 6) or np.max(np.abs(lower)) > tol:
        raise MembershipError("matrix is not block upper triangular")
    if np.max(np.abs(m.T @ SIGMA @ m - SIGMA)) > tol * max(1.0, np.max(np.abs(m)) ** 2):
        raise MembershipError("matrix does not preserve Sigma")
    z = m[0, 0]
    if not z > 0:
        raise MembershipError("Weyl entry must be positive")
    s = m[1:5, 1:5].copy()
    r = (m[0, 1:5] / z).reshape(1, 4)
    return z, s, r


def random_lorentz(rng: np.random.Generator) -> np.ndarray:
    """exp of a random so(1,3) element with entries in [-1, 1]."""
    k = rng.uniform(-1, 1, size=(4, 4))
    k = k - k.T
    return scipy.linalg.expm(ETA @ k)


def grade_components(m) -> dict[int, np.ndarray]:
    """Split an so(2,4) matrix into its grade -1, 0, +1 parts."""
    m = np.asarray(m)
    out = {g: np.zeros_like(m) for g in (-1, 0, 1)}
    for i in range(6):
        for j in range(6):
            bi = 0 if i == 0 else (2 if i == 5 else 1)
            bj = 0 if j == 0 else (2 if j == 5 else 1)
            out[bj - bi][i, j] = m[i, j]
    return out


# Group and algebra specifications --------------------------------------------


def _unitary_res(m):
    m = np.asarray(m, dtype=complex)
    return np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))


def _su2_res(m):
    m = np.asarray(m, dtype=complex)
    return max(_unitary_res(m), abs(np.linalg.det(m) - 1))


def _so13_res(m):
    m = np.asarray(m, dtype=complex)
    return max(np.max(np.abs(m.T @ ETA @ m - ETA)), np.max(np.abs(m.imag)), abs(np.linalg.det(m) - 1))


def _H_res(m):
    m = np.asarray(m, dtype=complex)
    lower = np.concatenate([m[1:, 0], m[5, 1:5]])
    return max(np.max(np.abs(m.T @ SIGMA @ m - SIGMA)), np.max(np.abs(lower)), np.max(np.abs(m.imag)))


def _su22_res(m):
    m = np.asarray(m, dtype=complex)
    return max(np.max(np.abs(m.conj().T @ SIGMA_BAR @ m - SIGMA_BAR)), abs(np.linalg.det(m) - 1))


def _weyl_res(m):
    m = np.asarray(m, dtype=complex)
    target = np.diag([m[0, 0], 1, 1, 1, 1, 1 / m[0, 0]]) if m.shape == (6, 6) else np.diag([m[0, 0]])
    return max(np.max(np.abs(m - target)), abs(m[0, 0].imag), 0.0 if m[0, 0].real > 0 else 1.0)


def _K1_res(m):
    m = np.asarray(m, dtype=complex)
    return np.max(np.abs(m - k1_matrix(m[0, 1:5])))


@dataclass(frozen=True)
class GroupSpec:
    name: str
    size: int
    field: str
    metric: np.ndarray | None
    residual: Callable[[np.ndarray], float]

    def check(self, m, tol: float = 1e-10) -> float:
        r = float(self.residual(m))
        if r >= tol:
            raise MembershipError(f"{self.name} membership residual {r:.3g}")
        return r


GROUPS: dict[str, GroupSpec] = {
    g.name: g
    for g in (
        GroupSpec("U(1)", 1, "complex", None, _unitary_res),
        GroupSpec("SU(2)", 2, "complex", None, _su2_res),
        GroupSpec("U(2)", 2, "complex", None, _unitary_res),
        GroupSpec("SO(1,3)", 4, "real", ETA, _so13_res),
        GroupSpec("W", 6, "real", None, _weyl_res),
        GroupSpec("K1", 6, "real", SIGMA, _K1_res),
        GroupSpec("H", 6, "real", SIGMA, _H_res),
        GroupSpec("SO(1,3)<H", 6, "real", SIGMA, _H_res),
        GroupSpec("SU(2,2)", 4, "complex", SIGMA_BAR, _su22_res),
        GroupSpec("SL(2,C)", 2, "complex", None, lambda m: abs(np.linalg.det(np.asarray(m)) - 1)),
    )
}


def _alg(cond):
    return lambda m: float(np.max(np.abs(cond(np.asarray(m, dtype=complex)))))


ALGEBRAS: dict[str, Callable[[np.ndarray], float]] = {
    "u(1)": _alg(lambda m: m + m.conj().T),
    "u(2)": _alg(lambda m: m + m.conj().T),
    "su(2)": lambda m: max(_alg(lambda m: m + m.conj().T)(m), abs(np.trace(np.asarray(m)))),
    "so(1,3)": _alg(lambda m: np.concatenate([(m.T @ ETA + ETA @ m).ravel(), m.imag.ravel()])),
    "so(2,4)": _alg(lambda m: np.concatenate([(m.T @ SIGMA + SIGMA @ m).ravel(), m.imag.ravel()])),
    "su(2,2)": _alg(lambda m: m.conj().T @ SIGMA_BAR + SIGMA_BAR @ m),
    "sl(2,C)": lambda m: abs(np.trace(np.asarray(m))),
    "gl(4)": lambda m: 0.0,
}
