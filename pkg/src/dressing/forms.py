"""Matrix-valued differential forms on a single four-dimensional chart.

A :class:`MatrixForm` of degree p stores one matrix of expressions for every
strictly increasing multi-index (mu_1 < ... < mu_p).  Products of matrix
forms combine the matrix product with the exterior product.

Hodge convention (used everywhere)::

    *(dx^{m1}...dx^{mp}) = sqrt|g| / (4-p)!  g^{m1 n1}...g^{mp np}
                           eps_{n1 n2 n3 n4} dx^{n(p+1)}...dx^{n4}

with eps_{0123} = +1 and eta = diag(1, -1, -1, -1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from . import expr as ex
from .expr import Expr, const
from .normal import equal as _normal_equal

__all__ = [
    "DIM",
    "ETA",
    "MatrixForm",
    "Metric",
    "DegenerateMetricError",
    "ShapeError",
    "as_matrix",
    "zero_form",
    "one_form",
    "dx",
    "wedge",
    "exterior_d",
    "graded_commutator",
    "hodge",
    "evaluate",
    "values",
    "mat_det",
    "mat_inv",
    "mat_mul",
    "eye",
    "zeros",
]

DIM = 4


class ShapeError(ValueError):
    pass


class DegenerateMetricError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def _indices(p: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(DIM), p))


def _perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
            elif seq[i] == seq[j]:
                return 0
    return sign


_lift_all = np.frompyfunc(ex._lift, 1, 1)


def as_matrix(m) -> np.ndarray:
    """Object array of Expr from nested lists, numbers, or a numeric array."""
    if isinstance(m, Expr):
        m = [[m]]
    a = np.asarray(m, dtype=object)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    out = _lift_all(a)
    return np.asarray(out, dtype=object)


def zeros(r: int, c: int | None = None) -> np.ndarray:
    c = r if c is None else c
    out = np.empty((r, c), dtype=object)
    out.fill(ex.ZERO)
    return out


def eye(n: int) -> np.ndarray:
    out = zeros(n)
    for i in range(n):
        out[i, i] = ex.ONE
    return out


def scale(m: np.ndarray, c) -> np.ndarray:
    """Entrywise product of an Expr matrix with a scalar."""
    c = ex._lift(c)
    out = np.empty(m.shape, dtype=object)
    for k, e in np.ndenumerate(m):
        out[k] = ex.mul(e, c)
    return out


def _is_zero_matrix(m: np.ndarray) -> bool:
    return all(e.is_zero for e in m.flat)


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    out = zeros(a.shape[0], b.shape[1])
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            terms = [a[i, k] * b[k, j] for k in range(a.shape[1]) if not (a[i, k].is_zero or b[k, j].is_zero)]
            if terms:
                out[i, j] = ex.add(*terms)
    return out


def mat_det(m: np.ndarray) -> Expr:
    m = as_matrix(m)
    n = m.shape[0]
    if n == 1:
        return m[0, 0]
    if n == 2:
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    terms = []
    for j in range(n):
        if m[0, j].is_zero:
            continue
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        terms.append((-1) ** j * m[0, j] * mat_det(minor))
    return ex.add(*terms)


def mat_inv(m: np.ndarray) -> np.ndarray:
    """Symbolic inverse through the adjugate; diagonal matrices handled directly."""
    m = as_matrix(m)
    n = m.shape[0]
    if all(m[i, j].is_zero for i in range(n) for j in range(n) if i != j):
        out = zeros(n)
        for i in range(n):
            out[i, i] = ex.power(m[i, i], -1)
        return out
    inv_det = ex.power(mat_det(m), -1)
    out = zeros(n)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(m, j, axis=0), i, axis=1)
            c = mat_det(minor) if n > 1 else ex.ONE
            if not c.is_zero:
                out[i, j] = (-1) ** (i + j) * c * inv_det
    return out


class MatrixForm:
    """Matrix-valued p-form; immutable by convention."""

    __slots__ = ("degree", "shape", "comps")

    def __init__(self, degree: int, comps: dict, shape: tuple[int, int] | None = None):
        if not 0 <= degree <= DIM:
            raise ValueError("form degree must lie in 0..4")
        self.degree = degree
        full = {}
        for idx, m in comps.items():
            idx = tuple(idx)
            if len(idx) != degree or any(idx[i] >= idx[i + 1] for i in range(len(idx) - 1)):
                raise ValueError(f"multi-index {idx} is not strictly increasing of length {degree}")
            full[idx] = as_matrix(m)
        if shape is None:
            if not full:
                raise ValueError("shape required for an empty form")
            shape = next(iter(full.values())).shape
        self.shape = tuple(shape)
        for idx in _indices(degree):
            if idx not in full:
                full[idx] = zeros(*self.shape)
            elif full[idx].shape != self.shape:
                raise ShapeError("inconsistent component shapes")
        self.comps = full

    # construction ---------------------------------------------------------
    @staticmethod
    def zero(degree: int, shape) -> "MatrixForm":
        return MatrixForm(degree, {}, shape)

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    def __getitem__(self, key) -> "MatrixForm":
        if not isinstance(key, tuple) or len(key) != 2:
            raise IndexError("index matrix forms with two slices or ints")
        key = tuple(slice(k, k + 1) if isinstance(k, (int, np.integer)) else k for k in key)
        comps = {idx: m[key] for idx, m in self.comps.items()}
        shape = next(iter(comps.values())).shape
        return MatrixForm(self.degree, comps, shape)

    def entry(self, i: int, j: int) -> "MatrixForm":
        return self[i : i + 1, j : j + 1]

    def component(self, idx=()) -> np.ndarray:
        return self.comps[tuple(idx)]

    def scalar(self, idx=()) -> Expr:
        if self.shape != (1, 1):
            raise ShapeError("not a scalar form")
        return self.comps[tuple(idx)][0, 0]

    @staticmethod
    def block(rows) -> "MatrixForm":
        rows = [list(r) for r in rows]
        deg = None
        for r in rows:
            for f in r:
                if isinstance(f, MatrixForm):
                    deg = f.degree if deg is None else deg
                    if f.degree != deg:
                        raise ValueError("blocks of different degrees")
        if deg is None:
            raise ValueError("no form among blocks")
        heights = []
        for r in rows:
            hs = {f.rows for f in r if isinstance(f, MatrixForm)}
            if len(hs) != 1:
                raise ShapeError("inconsistent block heights")
            heights.append(hs.pop())
        widths = []
        for j in range(len(rows[0])):
            ws = {r[j].cols for r in rows if isinstance(r[j], MatrixForm)}
            if len(ws) != 1:
                raise ShapeError("inconsistent block widths")
            widths.append(ws.pop())
        comps = {}
        for idx in _indices(deg):
            blocks = []
            for i, r in enumerate(rows):
                line = []
                for j, f in enumerate(r):
                    line.append(f.comps[idx] if isinstance(f, MatrixForm) else zeros(heights[i], widths[j]))
                blocks.append(line)
            comps[idx] = np.block(blocks)
        return MatrixForm(deg, comps, (sum(heights), sum(widths)))

    def map(self, fn) -> "MatrixForm":
        vf = np.frompyfunc(fn, 1, 1)
        return MatrixForm(self.degree, {k: np.asarray(vf(m), dtype=object) for k, m in self.comps.items()}, self.shape)

    # algebra --------------------------------------------------------------
    def _check_same(self, o: "MatrixForm"):
        if not isinstance(o, MatrixForm):
            raise TypeError("expected a MatrixForm")
        if o.degree != self.degree or o.shape != self.shape:
            raise ShapeError(f"degree/shape mismatch: {self.degree}{self.shape} vs {o.degree}{o.shape}")

    def __add__(self, o):
        self._check_same(o)
        return MatrixForm(self.degree, {k: self.comps[k] + o.comps[k] for k in self.comps}, self.shape)

    def __sub__(self, o):
        self._check_same(o)
        return MatrixForm(self.degree, {k: self.comps[k] - o.comps[k] for k in self.comps}, self.shape)

    def __neg__(self):
        return MatrixForm(self.degree, {k: -m for k, m in self.comps.items()}, self.shape)

    def __mul__(self, c):
        if isinstance(c, MatrixForm):
            raise TypeError("use @ (wedge) for products of forms")
        return MatrixForm(self.degree, {k: scale(m, c) for k, m in self.comps.items()}, self.shape)

    def __rmul__(self, c):
        return self.__mul__(c)

    def __matmul__(self, o):
        return wedge(self, o)

    @property
    def T(self) -> "MatrixForm":
        return MatrixForm(self.degree, {k: m.T.copy() for k, m in self.comps.items()}, self.shape[::-1])

    def conj(self) -> "MatrixForm":
        return self.map(ex.conj)

    @property
    def H(self) -> "MatrixForm":
        return self.conj().T

    def trace(self) -> "MatrixForm":
        if self.rows != self.cols:
            raise ShapeError("trace of a non-square form")
        return MatrixForm(self.degree, {k: [[ex.add(*np.diag(m))]] for k, m in self.comps.items()}, (1, 1))

    def d(self) -> "MatrixForm":
        return exterior_d(self)

    def is_zero(self) -> bool:
        """Exact structural zero (no normalization)."""
        return all(_is_zero_matrix(m) for m in self.comps.values())

    def __repr__(self):
        return f"MatrixForm(degree={self.degree}, shape={self.shape})"

    # serialization --------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "shape": list(self.shape),
            "components": [
                {"index": list(k), "matrix": [[ex.to_json(e) for e in row] for row in m]}
                for k, m in self.comps.items()
                if not _is_zero_matrix(m)
            ],
        }

    @staticmethod
    def from_json(d: dict) -> "MatrixForm":
        comps = {}
        for c in d.get("components", []):
            comps[tuple(c["index"])] = [[ex.from_json(e) for e in row] for row in c["matrix"]]
        return MatrixForm(int(d["degree"]), comps, tuple(d["shape"]))


def zero_form(m) -> MatrixForm:
    return MatrixForm(0, {(): as_matrix(m)})


def one_form(components) -> MatrixForm:
    """1-form from its four coefficient matrices A_mu (A = A_mu dx^mu)."""
    comps = {(mu,): as_matrix(components[mu]) for mu in range(DIM)}
    return MatrixForm(1, comps)


def dx(*mus: int) -> MatrixForm:
    """Scalar basis form dx^{m1} ^ ... ^ dx^{mp} (any order, sign applied)."""
    sign = _perm_sign(mus)
    if len(set(mus)) != len(mus) or sign == 0:
        return MatrixForm.zero(len(mus), (1, 1))
    return MatrixForm(len(mus), {tuple(sorted(mus)): [[sign]]}, (1, 1))


def _merge_index(i: tuple, j: tuple):
    if set(i) & set(j):
        return None, 0
    seq = i + j
    return tuple(sorted(seq)), _perm_sign(seq)


def wedge(f: MatrixForm, g: MatrixForm) -> MatrixForm:
    if f.cols != g.rows:
        raise ShapeError(f"wedge shape mismatch {f.shape} x {g.shape}")
    p = f.degree + g.degree
    shape = (f.rows, g.cols)
    if p > DIM:
        return MatrixForm.zero(DIM, shape)
    acc: dict[tuple, list] = {}
    nzg = {j: m for j, m in g.comps.items() if not _is_zero_matrix(m)}
    for i, fm in f.comps.items():
        if _is_zero_matrix(fm):
            continue
        for j, gm in nzg.items():
            k, s = _merge_index(i, j)
            if s == 0:
                continue
            prod = mat_mul(fm, gm)
            acc.setdefault(k, []).append(prod if s > 0 else -prod)
    comps = {}
    for k, parts in acc.items():
        if len(parts) == 1:
            comps[k] = parts[0]
        else:
            comps[k] = _sum_matrices(parts)
    return MatrixForm(p, comps, shape)


def _sum_matrices(parts) -> np.ndarray:
    r, c = parts[0].shape
    out = zeros(r, c)
    for a in range(r):
        for b in range(c):
            terms = [m[a, b] for m in parts if not m[a, b].is_zero]
            if terms:
                out[a, b] = ex.add(*terms)
    return out


_diff_entry = {mu: np.frompyfunc(lambda e, mu=mu: ex.diff(e, mu), 1, 1) for mu in range(DIM)}


def exterior_d(f: MatrixForm) -> MatrixForm:
    if f.degree >= DIM:
        return MatrixForm.zero(DIM, f.shape)
    acc: dict[tuple, list] = {}
    for i, m in f.comps.items():
        if _is_zero_matrix(m):
            continue
        for mu in range(DIM):
            if mu in i:
                continue
            dm = np.asarray(_diff_entry[mu](m), dtype=object)
            if _is_zero_matrix(dm):
                continue
            k, s = _merge_index((mu,), i)
            acc.setdefault(k, []).append(dm if s > 0 else -dm)
    comps = {k: (v[0] if len(v) == 1 else _sum_matrices(v)) for k, v in acc.items()}
    return MatrixForm(f.degree + 1, comps, f.shape)


def graded_commutator(f: MatrixForm, g: MatrixForm) -> MatrixForm:
    if f.rows != f.cols or g.shape != f.shape:
        raise ShapeError("graded commutator needs square forms of equal shape")
    sign = (-1) ** (f.degree * g.degree)
    a = wedge(f, g)
    b = wedge(g, f)
    if a.degree != b.degree:  # both beyond top degree
        return a
    return a - b if sign > 0 else a + b


@dataclass(frozen=True)
class Metric:
    """Symmetric metric g_{mu nu} with its inverse and sqrt|det g| as expressions."""

    g: np.ndarray
    inverse: np.ndarray
    sqrt_abs_det: Expr

    @staticmethod
    def from_matrix(g, inverse=None, sqrt_abs_det=None, lorentzian: bool = True) -> "Metric":
        g = as_matrix(g)
        if g.shape != (DIM, DIM):
            raise ShapeError("metric must be 4x4")
        for i in range(DIM):
            for j in range(i + 1, DIM):
                if not (g[i, j] is g[j, i] or _normal_equal(g[i, j], g[j, i])):
                    raise ValueError("metric is not symmetric")
        inv = as_matrix(inverse) if inverse is not None else mat_inv(g)
        if sqrt_abs_det is None:
            det = mat_det(g)
            sqrt_abs_det = ex.sqrt(-det if lorentzian else det)
        return Metric(g, inv, ex._lift(sqrt_abs_det))

    def check(self, points, tol: float = 1e-12) -> None:
        det = ex.evaluate([mat_det(self.g)], points)[0]
        if np.any(np.abs(det) <= tol):
            raise DegenerateMetricError("metric is degenerate at a sample point")


def _minkowski() -> Metric:
    eta = zeros(DIM)
    for i, s in enumerate((1, -1, -1, -1)):
        eta[i, i] = const(s)
    return Metric(eta, eta.copy(), ex.ONE)


ETA = _minkowski()


def hodge(f: MatrixForm, g: Metric = ETA) -> MatrixForm:
    p = f.degree
    q = DIM - p
    ginv = g.inverse
    out: dict[tuple, list] = {}
    for j in _indices(q):
        comp = [k for k in range(DIM) if k not in j]
        terms = []
        for i, m in f.comps.items():
            if _is_zero_matrix(m):
                continue
            coef_terms = []
            for nu in permutations(comp):
                s = _perm_sign(nu + j)
                factors = [ginv[i[k], nu[k]] for k in range(p)]
                if any(x.is_zero for x in factors):
                    continue
                coef_terms.append(ex.mul(s, *factors))
            if not coef_terms:
                continue
            coef = ex.add(*coef_terms)
            if coef.is_zero:
                continue
            terms.append(scale(m, ex.mul(g.sqrt_abs_det, coef)))
        if terms:
            out[j] = terms[0] if len(terms) == 1 else _sum_matrices(terms)
    return MatrixForm(q, out, f.shape)


def values(forms, points, params=None) -> list[np.ndarray]:
    """Numerical components of several forms at once, sharing subexpressions.

    Each result has shape (n_components, N, rows, cols) with components in
    the canonical multi-index order.
    """
    forms = list(forms)
    flat = []
    layout = []
    for f in forms:
        start = len(flat)
        for idx in _indices(f.degree):
            flat.extend(f.comps[idx].flat)
        layout.append((start, len(_indices(f.degree)), f.shape))
    vals = ex.evaluate(flat, points, params)
    n = vals.shape[1]
    out = []
    for start, nc, (r, c) in layout:
        block = vals[start : start + nc * r * c].reshape(nc, r, c, n)
        out.append(np.moveaxis(block, 3, 1))
    return out


def evaluate(f: MatrixForm, p, vs) -> np.ndarray:
    """Value of the form at point p on the vectors vs (alternating, multilinear)."""
    vs = [np.asarray(v, dtype=float) for v in vs]
    if len(vs) != f.degree:
        raise ValueError(f"need {f.degree} vectors, got {len(vs)}")
    (vals,) = values([f], np.asarray(p, dtype=float).reshape(1, DIM))
    out = np.zeros(f.shape, dtype=complex)
    for n, idx in enumerate(_indices(f.degree)):
        if f.degree:
            w = np.linalg.det(np.array([[v[i] for v in vs] for i in idx]))
        else:
            w = 1.0
        out += w * vals[n, 0]
    return out
