"""Exact scalar expressions over the chart coordinates x0..x3 and named parameters.

Nodes are hash-consed: building the same expression twice returns the same
object, so derivative caches and evaluation memos can key on identity.
Construction applies only cheap local rewrites (constant folding, flattening,
collection of like terms and powers, merging of exponentials).  Anything
heavier lives in :mod:`dressing.normal`.
"""

from __future__ import annotations

import numbers
import threading
import weakref
from fractions import Fraction

import numpy as np

__all__ = [
    "Expr",
    "SingularPointError",
    "const",
    "coord",
    "param",
    "X",
    "I",
    "ZERO",
    "ONE",
    "add",
    "mul",
    "power",
    "exp",
    "log",
    "sin",
    "cos",
    "sqrt",
    "diff",
    "subs",
    "conj",
    "evaluate",
    "to_json",
    "from_json",
    "monomial",
]


class SingularPointError(ArithmeticError):
    """An expression is not finite at one of the requested points."""


_TABLE: "weakref.WeakValueDictionary[tuple, Expr]" = weakref.WeakValueDictionary()
_LOCK = threading.Lock()

# Numbers are kept as (re, im) pairs whose parts are Fraction (exact) or float.
Num = tuple


def _as_num(v) -> Num:
    if isinstance(v, tuple):
        return v
    if isinstance(v, (bool, np.bool_)):
        v = int(v)
    if isinstance(v, (int, np.integer)):
        return (Fraction(int(v)), Fraction(0))
    if isinstance(v, Fraction):
        return (v, Fraction(0))
    if isinstance(v, (float, np.floating)):
        return (_exact_if_integral(float(v)), Fraction(0))
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        return (_exact_if_integral(v.real), _exact_if_integral(v.imag))
    raise TypeError(f"not a number: {v!r}")


def _exact_if_integral(x: float):
    """Integer-valued floats (e.g. matrix entries 1.0, -1.0) become exact."""
    if x.is_integer() and abs(x) < 2**53:
        return Fraction(int(x))
    return x


_F0 = Fraction(0)


def _nadd(a: Num, b: Num) -> Num:
    if a[1] == 0 and b[1] == 0:
        return (a[0] + b[0], _F0)
    return (a[0] + b[0], a[1] + b[1])


def _nmul(a: Num, b: Num) -> Num:
    ar, ai = a
    br, bi = b
    if ai == 0 and bi == 0:
        if ar == 1 and type(ar) is Fraction:
            return (br, _F0)
        if br == 1 and type(br) is Fraction:
            return (ar, _F0)
        return (ar * br, _F0)
    return (ar * br - ai * bi, ar * bi + ai * br)


def _ninv(a: Num) -> Num:
    d = a[0] * a[0] + a[1] * a[1]
    if d == 0:
        raise ZeroDivisionError("inverse of exact zero")
    return (a[0] / d, -a[1] / d)


def _npow(a: Num, n: int) -> Num:
    if n < 0:
        a, n = _ninv(a), -n
    out: Num = (Fraction(1), Fraction(0))
    for _ in range(n):
        out = _nmul(out, a)
    return out


def _is_zero(a: Num) -> bool:
    return a[0] == 0 and a[1] == 0


def _is_one(a: Num) -> bool:
    return a[0] == 1 and a[1] == 0


def _clean(a: Num) -> Num:
    re, im = a
    if im == 0:
        im = Fraction(0)
    if re == 0 and isinstance(re, float):
        re = Fraction(0)
    return (re, im)


def _ncomplex(a: Num) -> complex:
    return complex(float(a[0]), float(a[1]))


class Expr:
    """Immutable expression node.  Build through the module functions."""

    __slots__ = ("op", "args", "data", "free", "_d", "__weakref__")
    __array_ufunc__ = None

    def __new__(cls, *a, **k):  # pragma: no cover - guard
        raise TypeError("use the constructor functions in dressing.expr")

    # arithmetic -----------------------------------------------------------
    def __add__(self, o):
        return add(self, o)

    __radd__ = __add__

    def __sub__(self, o):
        return add(self, mul(-1, o))

    def __rsub__(self, o):
        return add(o, mul(-1, self))

    def __mul__(self, o):
        return mul(self, o)

    def __rmul__(self, o):
        return mul(o, self)

    def __neg__(self):
        return mul(-1, self)

    def __pos__(self):
        return self

    def __truediv__(self, o):
        return mul(self, power(_lift(o), -1))

    def __rtruediv__(self, o):
        return mul(o, power(self, -1))

    def __pow__(self, n):
        if isinstance(n, Fraction) and n == Fraction(1, 2):
            return sqrt(self)
        if not isinstance(n, (int, np.integer)):
            raise TypeError("only integer powers are supported; use sqrt/exp/log")
        return power(self, int(n))

    # inspection -----------------------------------------------------------
    @property
    def is_const(self) -> bool:
        return self.op == "const"

    @property
    def is_zero(self) -> bool:
        return self.op == "const" and _is_zero(self.data)

    @property
    def is_one(self) -> bool:
        return self.op == "const" and _is_one(self.data)

    @property
    def is_exact(self) -> bool:
        """True when no float constant occurs anywhere in the tree."""
        for n in _postorder([self]):
            if n.op == "const" and any(isinstance(p, float) for p in n.data):
                return False
        return True

    def value(self) -> complex:
        if self.op != "const":
            raise ValueError("not a constant")
        return _ncomplex(self.data)

    def __repr__(self):
        return _to_str(self)

    def __reduce__(self):
        return (from_json, (to_json(self),))


def _num_key(p):
    # integer pairs hash far faster than Fractions
    if type(p) is Fraction:
        return (p.numerator, p.denominator)
    return ("f", p)


def _intern(op: str, args: tuple, data, free: frozenset) -> Expr:
    key = (op, args, data if op != "const" else tuple(_num_key(p) for p in data))
    node = _TABLE.get(key)
    if node is not None:
        return node
    with _LOCK:
        node = _TABLE.get(key)
        if node is None:
            node = object.__new__(Expr)
            node.op = op
            node.args = args
            node.data = data
            node.free = free
            node._d = {}
            _TABLE[key] = node
    return node


def _union(args) -> frozenset:
    out: frozenset = frozenset()
    for a in args:
        if a.free:
            out = out | a.free
    return out


def const(v) -> Expr:
    if isinstance(v, Expr):
        return v
    return _intern("const", (), _clean(_as_num(v)), frozenset())


def _lift(v) -> Expr:
    return v if isinstance(v, Expr) else const(v)


def coord(i: int) -> Expr:
    if not 0 <= int(i) < 4:
        raise ValueError("chart coordinates are x0..x3")
    return _intern("coord", (), int(i), frozenset({("x", int(i))}))


def param(name: str) -> Expr:
    return _intern("param", (), str(name), frozenset({("p", str(name))}))


ZERO = const(0)
ONE = const(1)
I = _intern("const", (), (Fraction(0), Fraction(1)), frozenset())
X = tuple(coord(i) for i in range(4))


def _split_coef(t: Expr) -> tuple[Num, Expr | None]:
    if t.op == "const":
        return t.data, None
    if t.op == "mul" and t.args[0].op == "const":
        rest = t.args[1:]
        core = rest[0] if len(rest) == 1 else _intern("mul", rest, None, _union(rest))
        return t.args[0].data, core
    return (Fraction(1), Fraction(0)), t


def add(*terms) -> Expr:
    flat: list[Expr] = []
    for t in terms:
        t = _lift(t)
        if t.op == "add":
            flat.extend(t.args)
        else:
            flat.append(t)
    c: Num = (Fraction(0), Fraction(0))
    coefs: dict[Expr, Num] = {}
    for t in flat:
        k, core = _split_coef(t)
        if core is None:
            c = _nadd(c, k)
        elif core in coefs:
            coefs[core] = _nadd(coefs[core], k)
        else:
            coefs[core] = k
    out = []
    for core, k in coefs.items():
        if _is_zero(k):
            continue
        out.append(core if _is_one(k) else mul(const(k), core))
    c = _clean(c)
    if not _is_zero(c):
        out.insert(0, const(c))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    args = tuple(out)
    return _intern("add", args, None, _union(args))


def mul(*factors) -> Expr:
    flat: list[Expr] = []
    for f in factors:
        f = _lift(f)
        if f.op == "mul":
            flat.extend(f.args)
        else:
            flat.append(f)
    c: Num = (Fraction(1), Fraction(0))
    powers: dict[Expr, int] = {}
    exp_args: list[Expr] = []
    exp_slot = None
    for f in flat:
        if f.op == "const":
            c = _nmul(c, f.data)
            continue
        if f.op == "exp":
            if exp_slot is None:
                exp_slot = len(powers)
                powers[_EXP_SLOT] = 0
            exp_args.append(f.args[0])
            continue
        base, n = (f.args[0], f.data) if f.op == "pow" else (f, 1)
        powers[base] = powers.get(base, 0) + n
    c = _clean(c)
    if _is_zero(c):
        return ZERO
    out = []
    again = False
    for base, n in powers.items():
        if base is _EXP_SLOT:
            e = exp(add(*exp_args))
            if e.op == "const":
                c = _clean(_nmul(c, e.data))
            else:
                again = again or e.op != "exp"
                out.append(e)
            continue
        if n != 0:
            p = power(base, n)
            if p.op == "const":
                c = _clean(_nmul(c, p.data))
            else:
                again = again or p.op in ("mul", "exp")
                out.append(p)
    if again:
        return mul(const(c), *out)
    if not out:
        return const(c)
    if not _is_one(c):
        out.insert(0, const(c))
    if len(out) == 1:
        return out[0]
    args = tuple(out)
    return _intern("mul", args, None, _union(args))


class _Slot:
    pass


_EXP_SLOT = _Slot()


def _exact_root(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = _isqrt(n), _isqrt(d)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def _isqrt(n: int):
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


def power(base, n: int) -> Expr:
    base = _lift(base)
    n = int(n)
    if n == 0:
        return ONE
    if n == 1:
        return base
    if base.op == "const":
        if _is_zero(base.data) and n < 0:
            raise ZeroDivisionError("negative power of exact zero")
        return const(_npow(base.data, n))
    if base.op == "pow":
        return power(base.args[0], base.data * n)
    if base.op == "exp":
        return exp(mul(n, base.args[0]))
    if base.op == "mul":
        return mul(*[power(f, n) for f in base.args])
    if base.op == "sqrt" and n % 2 == 0:
        return power(base.args[0], n // 2)
    return _intern("pow", (base,), n, base.free)


def _unary(op: str, a) -> Expr:
    a = _lift(a)
    return _intern(op, (a,), None, a.free)


def exp(a) -> Expr:
    a = _lift(a)
    if a.is_zero:
        return ONE
    if a.op == "log":
        return a.args[0]
    return _unary("exp", a)


def log(a) -> Expr:
    a = _lift(a)
    if a.is_one:
        return ZERO
    return _unary("log", a)


def sin(a) -> Expr:
    a = _lift(a)
    if a.is_zero:
        return ZERO
    return _unary("sin", a)


def cos(a) -> Expr:
    a = _lift(a)
    if a.is_zero:
        return ONE
    return _unary("cos", a)


def sqrt(a) -> Expr:
    a = _lift(a)
    if a.op == "const" and a.data[1] == 0 and isinstance(a.data[0], Fraction):
        r = _exact_root(a.data[0])
        if r is not None:
            return const(r)
    if a.op == "exp" and _is_real(a.args[0]):
        return exp(mul(Fraction(1, 2), a.args[0]))
    return _unary("sqrt", a)


def _is_real(e: Expr) -> bool:
    """Conservative: no imaginary constant anywhere and no log/sqrt nodes."""
    for n in _postorder([e]):
        if n.op == "const" and n.data[1] != 0:
            return False
        if n.op in ("log", "sqrt"):
            return False
    return True


def monomial(coef, powers) -> Expr:
    """``coef * x0**k0 * x1**k1 * x2**k2 * x3**k3``."""
    return mul(coef, *[power(X[i], int(k)) for i, k in enumerate(powers) if k])


# traversal -----------------------------------------------------------------


def _postorder(roots, stop=None):
    """Children-first list of distinct nodes reachable from ``roots``."""
    seen: set[int] = set()
    out: list[Expr] = []
    stack = [(r, False) for r in reversed(list(roots))]
    while stack:
        n, done = stack.pop()
        if done:
            out.append(n)
            continue
        if id(n) in seen:
            continue
        seen.add(id(n))
        stack.append((n, True))
        if stop is not None and stop(n):
            continue
        for ch in reversed(n.args):
            if id(ch) not in seen:
                stack.append((ch, False))
    return out


def _var_key(var) -> tuple:
    if isinstance(var, (int, np.integer)):
        return ("x", int(var))
    if isinstance(var, str):
        return ("p", var)
    if isinstance(var, Expr) and var.op == "coord":
        return ("x", var.data)
    if isinstance(var, Expr) and var.op == "param":
        return ("p", var.data)
    raise TypeError(f"cannot differentiate with respect to {var!r}")


def _rebuild(n: Expr, args: list[Expr]) -> Expr:
    op = n.op
    if op == "add":
        return add(*args)
    if op == "mul":
        return mul(*args)
    if op == "pow":
        return power(args[0], n.data)
    return _UNARY[op](args[0])


_UNARY = {"exp": exp, "log": log, "sin": sin, "cos": cos, "sqrt": sqrt}


def diff(e, var) -> Expr:
    """Exact partial derivative with respect to a coordinate index or parameter."""
    e = _lift(e)
    key = _var_key(var)
    if key not in e.free:
        return ZERO
    cached = e._d.get(key)
    if cached is not None:
        return cached
    order = _postorder([e], stop=lambda n: key not in n.free or key in n._d)
    for n in order:
        if key not in n.free:
            continue
        if key in n._d:
            continue
        n._d[key] = _diff_node(n, key)
    return e._d[key]


def _d(n: Expr, key) -> Expr:
    if key not in n.free:
        return ZERO
    return n._d[key]


def _diff_node(n: Expr, key) -> Expr:
    op = n.op
    if op in ("coord", "param"):
        return ONE
    if op == "add":
        return add(*[_d(a, key) for a in n.args])
    if op == "mul":
        terms = []
        for k, a in enumerate(n.args):
            da = _d(a, key)
            if da.is_zero:
                continue
            terms.append(mul(*n.args[:k], da, *n.args[k + 1 :]))
        return add(*terms)
    a = n.args[0]
    da = _d(a, key)
    if op == "pow":
        return mul(n.data, power(a, n.data - 1), da)
    if op == "exp":
        return mul(n, da)
    if op == "log":
        return mul(da, power(a, -1))
    if op == "sin":
        return mul(cos(a), da)
    if op == "cos":
        return mul(-1, sin(a), da)
    if op == "sqrt":
        return mul(Fraction(1, 2), da, power(n, -1))
    raise AssertionError(op)


def subs(e, mapping: dict) -> Expr:
    """Substitute coordinates/parameters.  Keys: coordinate index, name, or node."""
    e = _lift(e)
    table = {_var_key(k): _lift(v) for k, v in mapping.items()}
    keys = frozenset(table)
    memo: dict[int, Expr] = {}
    for n in _postorder([e], stop=lambda n: not (n.free & keys)):
        if not (n.free & keys):
            memo[id(n)] = n
        elif n.op in ("coord", "param"):
            memo[id(n)] = table[_var_key(n)]
        else:
            memo[id(n)] = _rebuild(n, [memo[id(a)] for a in n.args])
    return memo[id(e)]


def conj(e) -> Expr:
    """Complex conjugate, with coordinates and parameters taken real."""
    e = _lift(e)
    memo: dict[int, Expr] = {}
    for n in _postorder([e]):
        if n.op == "const":
            memo[id(n)] = const((n.data[0], -n.data[1]))
        elif not n.args:
            memo[id(n)] = n
        else:
            memo[id(n)] = _rebuild(n, [memo[id(a)] for a in n.args])
    return memo[id(e)]


# numerical evaluation -------------------------------------------------------


def evaluate(exprs, points, params: dict | None = None, *, check: bool = True) -> np.ndarray:
    """Evaluate a sequence of expressions at points of shape (N, 4).

    Returns a complex array of shape (len(exprs), N).  Shared subexpressions
    are computed once.
    """
    exprs = [_lift(e) for e in exprs]
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    npts = pts.shape[0]
    params = params or {}
    memo: dict[int, object] = {}
    with np.errstate(all="ignore"):
        for n in _postorder(exprs):
            op = n.op
            if op == "const":
                v = _ncomplex(n.data)
            elif op == "coord":
                v = pts[:, n.data].astype(complex)
            elif op == "param":
                if n.data not in params:
                    raise KeyError(f"no value for parameter {n.data!r}")
                v = np.broadcast_to(np.asarray(params[n.data], dtype=complex), (npts,))
            elif op == "add":
                v = memo[id(n.args[0])]
                for a in n.args[1:]:
                    v = v + memo[id(a)]
            elif op == "mul":
                v = memo[id(n.args[0])]
                for a in n.args[1:]:
                    v = v * memo[id(a)]
            elif op == "pow":
                b = memo[id(n.args[0])]
                v = b**n.data if n.data > 0 else (1.0 / b) ** (-n.data)
            else:
                v = _NP[op](memo[id(n.args[0])])
            memo[id(n)] = v
    out = np.empty((len(exprs), npts), dtype=complex)
    for k, e in enumerate(exprs):
        out[k] = memo[id(e)]
    if check and not np.all(np.isfinite(out)):
        bad = np.argwhere(~np.isfinite(out))[0]
        raise SingularPointError(f"expression {bad[0]} is singular at point {pts[bad[1]].tolist()}")
    return out


_NP = {"exp": np.exp, "log": np.log, "sin": np.sin, "cos": np.cos, "sqrt": np.sqrt}


# serialization ------------------------------------------------------------


def _num_json(p):
    return str(p) if isinstance(p, Fraction) else float(p)


def _json_num(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    return float(v)


def to_json(e) -> dict:
    """Canonical JSON tree: ``{"op": ..., "args": [...]}`` plus a payload key."""
    e = _lift(e)
    memo: dict[int, dict] = {}
    for n in _postorder([e]):
        if n.op == "const":
            d = {"op": "const", "re": _num_json(n.data[0]), "im": _num_json(n.data[1])}
        elif n.op == "coord":
            d = {"op": "coord", "index": n.data}
        elif n.op == "param":
            d = {"op": "param", "name": n.data}
        else:
            d = {"op": n.op, "args": [memo[id(a)] for a in n.args]}
            if n.op == "pow":
                d["n"] = n.data
        memo[id(n)] = d
    return memo[id(e)]


def from_json(d) -> Expr:
    if isinstance(d, (int, float, str)):
        return const(_json_num(d))
    if not isinstance(d, dict) or "op" not in d:
        raise ValueError(f"malformed expression node: {d!r}")
    op = d["op"]
    if op == "const":
        return const((_json_num(d.get("re", 0)), _json_num(d.get("im", 0))))
    if op == "coord":
        return coord(d["index"])
    if op == "param":
        return param(d["name"])
    args = [from_json(a) for a in d.get("args", [])]
    if op == "add":
        return add(*args)
    if op == "mul":
        return mul(*args)
    if op == "pow":
        return power(args[0], int(d["n"]))
    if op in _UNARY and len(args) == 1:
        return _UNARY[op](args[0])
    raise ValueError(f"unknown expression op {op!r}")


def _fmt_num(a: Num) -> str:
    re, im = a
    if im == 0:
        return str(re)
    if re == 0:
        return f"{im}*I"
    return f"({re}+{im}*I)"


def _to_str(e: Expr) -> str:
    memo: dict[int, str] = {}
    for n in _postorder([e]):
        op = n.op
        if op == "const":
            s = _fmt_num(n.data)
        elif op == "coord":
            s = f"x{n.data}"
        elif op == "param":
            s = n.data
        elif op == "add":
            s = "(" + " + ".join(memo[id(a)] for a in n.args) + ")"
        elif op == "mul":
            s = "*".join(memo[id(a)] for a in n.args)
        elif op == "pow":
            s = f"{memo[id(n.args[0])]}**{n.data}"
        else:
            s = f"{op}({memo[id(n.args[0])]})"
        memo[id(n)] = s
    return memo[id(e)]
