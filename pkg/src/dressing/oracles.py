"""Finite-difference curvature of a coordinate metric, independent of the symbolic path.

Derivatives are nested 8th-order central differences of a vectorised metric
function ``g(X) -> (N, 4, 4)``.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import expr as ex
from .forms import DIM, as_matrix

__all__ = [
    "metric_function",
    "fd_derivative",
    "christoffel_fd",
    "ricci_fd",
    "schouten_fd",
    "cotton_fd",
]

_OFFSETS = (1, 2, 3, 4)
_COEFFS = (4 / 5, -1 / 5, 4 / 105, -1 / 280)

MetricFn = Callable[[np.ndarray], np.ndarray]


def metric_function(g) -> MetricFn:
    """Numeric evaluator of a 4x4 Expr metric."""
    g = as_matrix(g)
    flat = list(g.flat)

    def fn(X):
        v = ex.evaluate(flat, np.asarray(X, dtype=float))
        return np.real_if_close(v.T.reshape(len(X), DIM, DIM), tol=1e6)

    return fn


def fd_derivative(f: Callable[[np.ndarray], np.ndarray], h: float) -> Callable[[np.ndarray], np.ndarray]:
    """X -> array with a new axis 1 holding d_mu f(X)."""

    def df(X):
        X = np.asarray(X, dtype=float)
        n = len(X)
        shifted = []
        for mu in range(DIM):
            for k in _OFFSETS:
                for sgn in (1, -1):
                    Y = X.copy()
                    Y[:, mu] += sgn * k * h
                    shifted.append(Y)
        vals = f(np.concatenate(shifted))
        vals = vals.reshape((DIM, len(_OFFSETS), 2, n) + vals.shape[1:])
        out = np.zeros((n, DIM) + vals.shape[4:], dtype=vals.dtype)
        for mu in range(DIM):
            for i, c in enumerate(_COEFFS):
                out[:, mu] += c * (vals[mu, i, 0] - vals[mu, i, 1])
        return out / h

    return df


def christoffel_fd(g: MetricFn, h: float) -> MetricFn:
    """X -> Gamma[N, l, mu, nu]."""
    dg = fd_derivative(g, h)

    def gam(X):
        gv = g(X)
        d = dg(X)  # d[n, c, a, b] = d_c g_ab
        gi = np.linalg.inv(gv)
        t = np.einsum("nmkv->nkmv", d) + np.einsum("nvkm->nkmv", d) - np.einsum("nkmv->nkmv", d)
        return 0.5 * np.einsum("nlk,nkmv->nlmv", gi, t)

    return gam


def _riemann(g: MetricFn, h: float):
    gam = christoffel_fd(g, h)
    dgam = fd_derivative(gam, h)  # [n, m, r, v, s] = d_m Gamma^r_{v s}

    def riem(X):
        G = gam(X)
        dG = dgam(X)
        # R^r_{s m v} = d_m G^r_{v s} - d_v G^r_{m s} + G^r_{m l} G^l_{v s} - G^r_{v l} G^l_{m s}
        R = np.einsum("nmrvs->nrsmv", dG) - np.einsum("nvrms->nrsmv", dG)
        R = R + np.einsum("nrml,nlvs->nrsmv", G, G) - np.einsum("nrvl,nlms->nrsmv", G, G)
        return R, G

    return riem


def ricci_fd(g: MetricFn, h: float):
    riem = _riemann(g, h)

    def ric(X):
        R, G = riem(X)
        return np.einsum("nrsrv->nsv", R), G

    return ric


def schouten_fd(g: MetricFn, h: float, with_gamma: bool = False):
    """P_{mu nu} = -(Ric - R g / 6) / 2, the sign matching ``conformal.schouten``."""
    ric = ricci_fd(g, h)

    def P(X):
        Rc, G = ric(X)
        gv = g(X)
        R = np.einsum("nab,nab->n", np.linalg.inv(gv), Rc)
        out = -0.5 * (Rc - R[:, None, None] * gv / 6)
        return (out, G) if with_gamma else out

    return P


def cotton_fd(g: MetricFn, X, h: float = 0.05) -> np.ndarray:
    """C[n, l, m, v] = d_m P_{v l} - d_v P_{m l} - G^k_{m l} P_{v k} + G^k_{v l} P_{m k}."""
    P = schouten_fd(g, h)
    dP = fd_derivative(P, h)(X)  # [n, m, a, b]
    Pv, G = schouten_fd(g, h, with_gamma=True)(X)
    C = np.einsum("nmvl->nlmv", dP) - np.einsum("nvml->nlmv", dP)
    C = C - np.einsum("nkml,nvk->nlmv", G, Pv) + np.einsum("nkvl,nmk->nlmv", G, Pv)
    return C
