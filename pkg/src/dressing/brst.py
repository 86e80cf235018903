"""BRST variations as infinitesimal gauge flows evaluated on concrete parameters.

For an algebra-valued 0-form xi the variation of a field is the t-derivative
at t = 0 of its transform by exp(t xi):

    omega -> (1/c) d xi + [omega, xi],   Omega -> [Omega, xi],   phi -> -xi phi.

Second variations treat the parameter as field independent, so the
commutator of two variations closes on the bracket:
``delta_xi delta_zeta - delta_zeta delta_xi = delta_[xi, zeta]``.
"""

from __future__ import annotations

from typing import Callable, Mapping

import numpy as np
import scipy.linalg

from . import expr as ex
from .forms import DIM, MatrixForm, _indices, as_matrix, mat_mul, values, zero_form
from .gauge import Field, GaugeMap, Kind, _inv_coupling, max_deviation

__all__ = [
    "T",
    "brst_variation",
    "second_variation",
    "bracket",
    "nilpotency_check",
    "flow_fd",
    "map_variation",
    "field_variation",
    "dressed_ghost",
    "predicted_map_variation",
    "modified_brst_check",
    "t_derivative",
]

T = ex.param("t")


def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x, y = as_matrix(x), as_matrix(y)
    return mat_mul(x, y) - mat_mul(y, x)


def _commutator(f: MatrixForm, xi: MatrixForm) -> MatrixForm:
    """[f, xi] for a form f and a 0-form xi."""
    return f @ xi - xi @ f


def brst_variation(chi: Field, xi) -> Field:
    """First-order change of chi under the flow exp(t xi)."""
    x = zero_form(as_matrix(xi))
    f = chi.form
    if chi.kind is Kind.SECTION:
        return chi.with_form(-(x @ f))
    if x.rows != f.rows:
        raise ValueError("ghost parameter does not match the field's algebra")
    out = _commutator(f, x)
    if chi.kind is Kind.CONNECTION:
        out = out + x.d() * _inv_coupling(chi.coupling)
    return chi.with_form(out)


def _linear_part(chi: Field, dchi: MatrixForm, zeta) -> MatrixForm:
    """delta_zeta applied to a variation dchi of chi (inhomogeneous term drops)."""
    z = zero_form(as_matrix(zeta))
    if chi.kind is Kind.SECTION:
        return -(z @ dchi)
    return _commutator(dchi, z)


def second_variation(chi: Field, xi, zeta) -> MatrixForm:
    """delta_xi delta_zeta chi."""
    return _linear_part(chi, brst_variation(chi, xi).form, zeta)


def nilpotency_check(chi: Field, xi, zeta, points) -> float:
    """Sup-norm of delta_xi delta_zeta chi - delta_zeta delta_xi chi - delta_[xi,zeta] chi."""
    lhs = second_variation(chi, xi, zeta) - second_variation(chi, zeta, xi)
    rhs = brst_variation(chi, bracket(xi, zeta)).form
    return max_deviation(lhs, rhs, points)


# finite-difference oracle ---------------------------------------------------


def _expm_and_grad(xv: np.ndarray, dxv: np.ndarray, t: float):
    """exp(t X) and its partial derivatives for X with derivatives dX (4, n, n)."""
    g = scipy.linalg.expm(t * xv)
    dg = np.stack([scipy.linalg.expm_frechet(t * xv, t * dxv[mu], compute_expm=False) for mu in range(DIM)])
    return g, dg


def flow_fd(chi: Field, xi, points, h: float = 1e-5) -> np.ndarray:
    """Central finite difference in t of chi^{exp(t xi)}, componentwise at the points.

    Returns an array shaped like ``forms.values`` output for chi.
    """
    xi = as_matrix(xi)
    x0 = zero_form(xi)
    dxi = x0.d()
    f = chi.form
    fv, xv, dxv = values([f, x0, dxi], points)
    xv = xv[0]
    n_pts = xv.shape[0]
    inv_c = complex(ex.evaluate([ex._lift(_inv_coupling(chi.coupling))], np.zeros((1, DIM)))[0, 0])
    out = np.zeros_like(fv)
    for p in range(n_pts):
        dx_p = dxv[:, p]
        for sign in (1, -1):
            t = sign * h
            g, dg = _expm_and_grad(xv[p], dx_p, t)
            gi = scipy.linalg.expm(-t * xv[p])
            for k, idx in enumerate(_indices(f.degree)):
                if chi.kind is Kind.SECTION:
                    val = gi @ fv[k, p]
                else:
                    val = gi @ fv[k, p] @ g
                    if chi.kind is Kind.CONNECTION:
                        val = val + inv_c * (gi @ dg[idx[0]])
                out[k, p] += sign * val
    return out / (2 * h)


# variations of constructions --------------------------------------------------


def t_derivative(m, at=0) -> np.ndarray:
    """Exact d/dt of an Expr matrix at t = at."""
    m = as_matrix(m)
    out = np.empty(m.shape, dtype=object)
    for k, e in np.ndenumerate(m):
        out[k] = ex.subs(ex.diff(e, T), {T: at})
    return out


def _shift(fields: Mapping[str, Field], xi_of: Callable[[str, Field], object]) -> dict:
    out = {}
    for name, f in fields.items():
        xi = xi_of(name, f)
        if xi is None:
            out[name] = f
        else:
            out[name] = f.with_form(f.form + brst_variation(f, xi).form * T)
    return out


def map_variation(construct: Callable[[Mapping[str, Field]], GaugeMap], fields: Mapping[str, Field], xi_of) -> np.ndarray:
    """s u: exact t-derivative of the construction applied to the varied fields.

    ``xi_of(name, field)`` gives the parameter acting on each field (or None).
    """
    u = construct(_shift(fields, xi_of))
    return t_derivative(u.value)


def field_variation(build: Callable[[Mapping[str, Field]], Field], fields: Mapping[str, Field], xi_of) -> MatrixForm:
    """s of a composite field, from the t-derivative of its construction."""
    f = build(_shift(fields, xi_of)).form
    comps = {k: t_derivative(m) for k, m in f.comps.items()}
    return MatrixForm(f.degree, comps, f.shape)


def predicted_map_variation(u: GaugeMap, xi, cls: str, c_xi=None) -> np.ndarray:
    """s u from the equivariance class: erased -xi u, adjoint [u, xi], twisted -xi u + u c(xi)."""
    xi = as_matrix(xi)
    if cls == "erased":
        return -mat_mul(xi, u.value)
    if cls == "adjoint":
        return bracket(u.value, xi)
    if cls == "twisted":
        if c_xi is None:
            raise ValueError("twisted class needs c(xi)")
        return -mat_mul(xi, u.value) + mat_mul(u.value, as_matrix(c_xi))
    raise ValueError(f"unknown equivariance class {cls!r}")


def dressed_ghost(u: GaugeMap, xi, su) -> np.ndarray:
    """v^u = u^-1 xi u + u^-1 s u."""
    xi, su = as_matrix(xi), as_matrix(su)
    return mat_mul(mat_mul(u.inverse, xi), u.value) + mat_mul(u.inverse, su)


def modified_brst_check(chi_u: Field, s_chi_u: MatrixForm, v, points) -> float:
    """Sup-norm of s chi^u - delta_v chi^u (e.g. s omega^u - dv - [omega^u, v])."""
    return max_deviation(s_chi_u, brst_variation(chi_u, v).form, points)
