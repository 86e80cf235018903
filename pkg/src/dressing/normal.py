"""Rational normal form for exact zero tests.

An expression is brought to ``N / D`` where ``N`` is a Laurent polynomial with
exact rational coefficients over atoms (coordinates, parameters, the
imaginary unit with ``I**2 = -1``, ``sin``/``cos``/``log``/``sqrt`` of
normalized arguments) times exponentials ``exp(R)`` merged by adding their
normalized arguments, and ``D`` is a product of canonical polynomial factors.

No trigonometric or logarithmic identities are applied, so ``is_zero`` can
answer False for an expression that vanishes identically; it never answers
True for one that does not.
"""

from __future__ import annotations

from fractions import Fraction

from .expr import Expr, _lift, _postorder

__all__ = ["Rat", "normalize", "is_zero", "equal"]

_I = ("I",)
# A monomial is (atoms, expkey): atoms a sorted tuple of (atomkey, power),
# expkey the canonical key of the exponent Rat or () for none.
_ONE_M = ((), ())


class Rat:
    __slots__ = ("num", "den")

    def __init__(self, num: dict, den: dict | None = None):
        self.num = num
        self.den = den or {}

    @property
    def zero(self) -> bool:
        return not self.num

    def key(self) -> tuple:
        return (
            tuple(sorted(self.num.items())),
            tuple(sorted(self.den.items())),
        )


_EXP: dict[tuple, Rat] = {}
_FACTORS: dict[tuple, dict] = {}


def _const(c) -> Rat:
    return Rat({_ONE_M: Fraction(c)} if c != 0 else {})


def _num_poly(re, im) -> dict:
    out = {}
    if re != 0:
        out[_ONE_M] = Fraction(re)
    if im != 0:
        out[(((_I, 1),), ())] = Fraction(im)
    return out


def _merge(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, p in b:
        q = d.get(k, 0) + p
        if q:
            d[k] = q
        else:
            d.pop(k, None)
    return tuple(sorted(d.items()))


def _reduce_I(atoms: tuple) -> tuple[tuple, int]:
    for idx, (k, p) in enumerate(atoms):
        if k == _I:
            p4 = p % 4
            sign = -1 if p4 >= 2 else 1
            rest = atoms[:idx] + atoms[idx + 1 :]
            if p4 % 2:
                rest = tuple(sorted(rest + ((_I, 1),)))
            return rest, sign
    return atoms, 1


def _exp_key(r: Rat) -> tuple:
    if r.zero:
        return ()
    k = r.key()
    _EXP.setdefault(k, r)
    return k


def _mono_mul(m1: tuple, m2: tuple) -> tuple[tuple, int]:
    atoms, sign = _reduce_I(_merge(m1[0], m2[0]))
    e1, e2 = m1[1], m2[1]
    if not e1:
        ek = e2
    elif not e2:
        ek = e1
    else:
        ek = _exp_key(_add(_EXP[e1], _EXP[e2]))
    return (atoms, ek), sign


def _pmul(p: dict, q: dict) -> dict:
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m, s = _mono_mul(m1, m2)
            v = out.get(m, 0) + s * c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _padd(p: dict, q: dict, sq: int = 1) -> dict:
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + sq * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _expand_den(den: dict) -> dict:
    out = {_ONE_M: Fraction(1)}
    for k, n in sorted(den.items()):
        for _ in range(n):
            out = _pmul(out, _FACTORS[k])
    return out


def _add(a: Rat, b: Rat) -> Rat:
    if a.zero:
        return b
    if b.zero:
        return a
    if a.den == b.den:
        return Rat(_padd(a.num, b.num), dict(a.den))
    lcm = dict(a.den)
    for k, n in b.den.items():
        lcm[k] = max(lcm.get(k, 0), n)
    fa = {k: n - a.den.get(k, 0) for k, n in lcm.items() if n - a.den.get(k, 0)}
    fb = {k: n - b.den.get(k, 0) for k, n in lcm.items() if n - b.den.get(k, 0)}
    num = _padd(_pmul(a.num, _expand_den(fa)), _pmul(b.num, _expand_den(fb)))
    return Rat(num, lcm)


def _mul(a: Rat, b: Rat) -> Rat:
    if a.zero or b.zero:
        return Rat({})
    den = dict(a.den)
    for k, n in b.den.items():
        den[k] = den.get(k, 0) + n
    return Rat(_pmul(a.num, b.num), den)


def _mono_inv(m: tuple) -> tuple[tuple, int]:
    atoms = tuple((k, -p) for k, p in m[0])
    atoms, sign = _reduce_I(atoms)
    ek = m[1]
    if ek:
        ek = _exp_key(_mul(_const(-1), _EXP[ek]))
    return (atoms, ek), sign


def _inv(a: Rat) -> Rat:
    if a.zero:
        raise ZeroDivisionError("inverse of an expression that normalizes to zero")
    top = _expand_den(a.den)
    if len(a.num) == 1:
        ((m, c),) = a.num.items()
        mi, s = _mono_inv(m)
        return Rat(_pmul(top, {mi: s / c}))
    # pull out the monomial content and the leading coefficient
    items = sorted(a.num.items())
    content = _content(items)
    ci, s = _mono_inv(content)
    factor = _pmul(dict(items), {ci: Fraction(1)})
    lead = sorted(factor.items())[0][1]
    factor = {m: c / lead for m, c in factor.items()}
    fk = tuple(sorted(factor.items()))
    _FACTORS.setdefault(fk, factor)
    return Rat(_pmul(top, {ci: s / lead}), {fk: 1})


def _content(items) -> tuple:
    """Largest monomial dividing every term (Laurent sense, exp part if shared)."""
    keys = {k for m, _ in items for k, _ in m[0] if k != _I}
    mins = {k: min(dict(m[0]).get(k, 0) for m, _ in items) for k in keys}
    atoms = tuple(sorted((k, p) for k, p in mins.items() if p))
    eks = {m[1] for m, _ in items}
    ek = eks.pop() if len(eks) == 1 else ()
    return (atoms, ek)


def _pow(a: Rat, n: int) -> Rat:
    if n < 0:
        a, n = _inv(a), -n
    out = _const(1)
    base = a
    while n:
        if n & 1:
            out = _mul(out, base)
        n >>= 1
        if n:
            base = _mul(base, base)
    return out


def _atom(key) -> Rat:
    return Rat({(((key, 1),), ()): Fraction(1)})


def _reduce_sqrt(r: Rat) -> Rat:
    """Rewrite sqrt(A)**k with |k| >= 2 through A itself."""
    if not any(k[0] == "sqrt" and abs(p) >= 2 for m in r.num for k, p in m[0]):
        return r
    out = Rat({})
    den = Rat({_ONE_M: Fraction(1)}, dict(r.den))
    for m, c in r.num.items():
        keep = tuple((k, p) for k, p in m[0] if not (k[0] == "sqrt" and abs(p) >= 2))
        term = Rat({(keep, m[1]): c})
        for k, p in m[0]:
            if k[0] == "sqrt" and abs(p) >= 2:
                q, rem = divmod(p, 2)
                term = _mul(term, _pow(_SQRT_ARGS[k], q))
                if rem:
                    term = _mul(term, _atom(k))
        out = _add(out, _mul(term, den))
    return out


_SQRT_ARGS: dict[tuple, Rat] = {}


def normalize(e) -> Rat:
    e = _lift(e)
    memo: dict[int, Rat] = {}
    for n in _postorder([e]):
        op = n.op
        if op == "const":
            re, im = n.data
            r = Rat(_num_poly(Fraction(re), Fraction(im)))
        elif op == "coord":
            r = _atom(("x", n.data))
        elif op == "param":
            r = _atom(("p", n.data))
        elif op == "add":
            r = memo[id(n.args[0])]
            for a in n.args[1:]:
                r = _add(r, memo[id(a)])
        elif op == "mul":
            r = memo[id(n.args[0])]
            for a in n.args[1:]:
                r = _mul(r, memo[id(a)])
            r = _reduce_sqrt(r)
        elif op == "pow":
            r = _reduce_sqrt(_pow(memo[id(n.args[0])], n.data))
        elif op == "exp":
            arg = memo[id(n.args[0])]
            r = _const(1) if arg.zero else Rat({((), _exp_key(arg)): Fraction(1)})
        else:
            arg = memo[id(n.args[0])]
            if op == "sin" and arg.zero:
                r = _const(0)
            elif op == "cos" and arg.zero:
                r = _const(1)
            else:
                key = (op, arg.key())
                if op == "sqrt":
                    _SQRT_ARGS.setdefault(key, arg)
                r = _atom(key)
        memo[id(n)] = r
    return memo[id(e)]


def is_zero(e) -> bool:
    """Exact test; True only if ``e`` vanishes identically."""
    return normalize(e).zero


def equal(a, b) -> bool:
    return is_zero(_lift(a) - _lift(b))
