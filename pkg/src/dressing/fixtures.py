"""Configuration families: seeded random generators and JSON fixture loading.

JSON scalars may be a number, a rational string such as ``"1/3"``, a pair
``[re, im]`` (each part itself a scalar), a polynomial ``{"poly": [[coeff, [k0, k1, k2, k3]], ...]}``
(monomial coeff * x0^k0 ... x3^k3), ``{"exp": scalar}``, or a full
expression tree as produced by ``expr.to_json``.  Matrices are nested lists
of scalars.  A 1-form is ``{"dx": [M0, M1, M2, M3]}`` or the canonical
``MatrixForm.to_json`` layout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from . import expr as ex
from . import random_fields as rf
from .conformal import ConformalCartan
from .electroweak import EWFieldSet
from .forms import DIM, MatrixForm, _indices, as_matrix, eye, mat_inv, one_form, zero_form
from .gr_tetrad import PoincareCartan

__all__ = [
    "FixtureError",
    "parse_scalar",
    "parse_matrix",
    "parse_form",
    "FormsFixture",
    "EWFixture",
    "GRFixture",
    "ConformalFixture",
    "FAMILIES",
    "random_fixture",
    "load_fixture",
    "fixture_from_dict",
]


class FixtureError(ValueError):
    """Malformed or unsupported fixture content."""


# parsing -------------------------------------------------------------------


def _num(v):
    if isinstance(v, bool):
        raise FixtureError("booleans are not numbers")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError as err:
            raise FixtureError(f"bad number {v!r}") from err
    raise FixtureError(f"bad number {v!r}")


def parse_scalar(obj) -> ex.Expr:
    if isinstance(obj, (int, float, str)) and not isinstance(obj, bool):
        return ex.const(_num(obj))
    if isinstance(obj, list):
        if len(obj) != 2:
            raise FixtureError(f"complex scalar must be [re, im], got {obj!r}")
        re, im = obj
        if all(isinstance(v, (int, float, str)) and not isinstance(v, bool) for v in obj):
            return ex.const((_num(re), _num(im)))
        return ex.add(parse_scalar(re), ex.mul(ex.I, parse_scalar(im)))
    if isinstance(obj, dict):
        if "poly" in obj:
            terms = []
            for item in obj["poly"]:
                try:
                    coeff, powers = item
                except (TypeError, ValueError) as err:
                    raise FixtureError(f"bad polynomial term {item!r}") from err
                if len(powers) != DIM or any((not isinstance(k, int)) or k < 0 for k in powers):
                    raise FixtureError(f"monomial powers must be 4 non-negative ints, got {powers!r}")
                c = parse_scalar(coeff)
                terms.append(ex.monomial(c, powers))
            return ex.add(*terms) if terms else ex.ZERO
        if "exp" in obj:
            return ex.exp(parse_scalar(obj["exp"]))
        try:
            return ex.from_json(obj)
        except (ValueError, KeyError, TypeError) as err:
            raise FixtureError(str(err)) from err
    raise FixtureError(f"cannot parse scalar {obj!r}")


def parse_matrix(obj, shape=None) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise FixtureError("matrix must be a non-empty list of rows")
    if len({len(r) for r in obj}) != 1:
        raise FixtureError("ragged matrix")
    m = as_matrix([[parse_scalar(x) for x in row] for row in obj])
    if shape is not None and m.shape != tuple(shape):
        raise FixtureError(f"expected a {shape} matrix, got {m.shape}")
    return m


def parse_form(obj, shape=None) -> MatrixForm:
    if isinstance(obj, dict) and "dx" in obj:
        mats = obj["dx"]
        if len(mats) != DIM:
            raise FixtureError("a 1-form needs four coefficient matrices")
        f = one_form([parse_matrix(m, shape) for m in mats])
    elif isinstance(obj, dict) and "components" in obj:
        try:
            comps = {tuple(c["index"]): parse_matrix(c["matrix"]) for c in obj["components"]}
            f = MatrixForm(int(obj["degree"]), comps, tuple(obj["shape"]))
        except (KeyError, TypeError) as err:
            raise FixtureError(f"bad form layout: {err}") from err
    elif isinstance(obj, list):
        f = zero_form(parse_matrix(obj, shape))
    else:
        raise FixtureError("form must be {'dx': [...]}, a component layout, or a matrix (0-form)")
    if shape is not None and f.shape != tuple(shape):
        raise FixtureError(f"expected shape {shape}, got {f.shape}")
    return f


# families -----------------------------------------------------------------------


@dataclass(frozen=True)
class FormsFixture:
    """Random scalar-valued forms for calculus identities."""

    forms: tuple


@dataclass(frozen=True)
class EWFixture:
    F: EWFieldSet


@dataclass(frozen=True)
class GRFixture:
    P: PoincareCartan


@dataclass(frozen=True)
class ConformalFixture:
    varpi: ConformalCartan
    phi: MatrixForm  # tractor column
    phi2: MatrixForm
    psi: MatrixForm  # twistor column
    z: ex.Expr  # Weyl factor
    z2: ex.Expr
    normal_tetrads: tuple = field(default=())  # (label, e, e_inv) for the normal-connection checks


def _random_forms(rng) -> FormsFixture:
    out = []
    for p in range(4):
        comps = {}
        for idx in _indices(p):
            if rng.random() < 0.6:
                comps[idx] = [[rf.random_poly(rng, degree=3, nterms=3)]]
        out.append(MatrixForm(p, comps, (1, 1)))
    return FormsFixture(tuple(out))


def _random_ew(rng) -> EWFixture:
    half, third = Fraction(1, 2), Fraction(1, 3)
    a = rf.algebra_form(rng, [np.array([[1j]])], scale=half)
    b = rf.algebra_form(rng, rf.su2_basis(), scale=half)
    p1 = rf.random_poly(rng, scale=third) + ex.I * rf.random_poly(rng, scale=third)
    p2 = 1 + rf.random_poly(rng, scale=third) + ex.I * rf.random_poly(rng, scale=third)
    g, gp = (float(x) for x in rng.uniform(0.2, 1.2, size=2))
    mu2 = -float(rng.uniform(0.2, 2.0))
    lam = float(rng.uniform(0.1, 1.0))
    return EWFixture(EWFieldSet(a, b, zero_form([[p1], [p2]]), g, gp, mu2, lam))


def _random_gr(rng) -> GRFixture:
    e = rf.tetrad(rng)
    A = rf.algebra_form(rng, rf.so13_basis(), scale=Fraction(1, 2))
    return GRFixture(PoincareCartan(A, e))


def _row_form(rng, n, density=0.5):
    scale = Fraction(1, 2)
    return one_form(
        [[[rf.random_poly(rng, nterms=2, scale=scale) if rng.random() < density else ex.ZERO for _ in range(n)]] for _ in range(DIM)]
    )


def _diag_tetrad(factors):
    e, ei = eye(4), eye(4)
    for i, f in enumerate(factors):
        e[i, i] = f
        ei[i, i] = ex.power(f, -1)
    return e, ei


def _random_conformal(rng) -> ConformalFixture:
    half = Fraction(1, 2)
    a, P = _row_form(rng, 1), _row_form(rng, 4)
    A = rf.algebra_form(rng, rf.so13_basis(), scale=half)
    e = rf.tetrad(rng)
    varpi = ConformalCartan.from_blocks(a, A, e, P)
    sigma = rf.random_poly(rng, scale=half)
    flat = _diag_tetrad([ex.exp(sigma)] * 4)
    curved = _diag_tetrad([ex.exp(rf.random_poly(rng, scale=half)) for _ in range(4)])
    return ConformalFixture(
        varpi=varpi,
        phi=rf.section(rng, 6, complex_=False),
        phi2=rf.section(rng, 6, complex_=False),
        psi=rf.section(rng, 4),
        z=rf.weyl_factor(rng, scale=half),
        z2=rf.weyl_factor(rng, scale=half),
        normal_tetrads=(("conformally_flat",) + flat, ("perturbed",) + curved),
    )


FAMILIES = {
    "forms": _random_forms,
    "ew": _random_ew,
    "gr": _random_gr,
    "conformal": _random_conformal,
}


def random_fixture(family: str, rng):
    try:
        return FAMILIES[family](rng)
    except KeyError:
        raise FixtureError(f"unknown fixture family {family!r}") from None


# JSON fixtures -----------------------------------------------------------------------


def _req(d: dict, key: str):
    if key not in d:
        raise FixtureError(f"fixture is missing {key!r}")
    return d[key]


def _real(v, name) -> float:
    try:
        return float(_num(v))
    except FixtureError as err:
        raise FixtureError(f"{name}: {err}") from err


def fixture_from_dict(d: dict[str, Any]):
    """(family, fixture) from a decoded JSON object."""
    if not isinstance(d, dict):
        raise FixtureError("fixture root must be an object")
    family = _req(d, "family")
    if family == "ew":
        try:
            F = EWFieldSet(
                parse_form(_req(d, "a"), (1, 1)),
                parse_form(_req(d, "b"), (2, 2)),
                parse_form(_req(d, "phi"), (2, 1)),
                _real(_req(d, "g"), "g"),
                _real(_req(d, "gp"), "gp"),
                _real(_req(d, "mu2"), "mu2"),
                _real(_req(d, "lam"), "lam"),
            )
        except ValueError as err:
            if isinstance(err, FixtureError):
                raise
            raise FixtureError(str(err)) from err
        return family, EWFixture(F)
    if family == "gr":
        e = parse_matrix(_req(d, "tetrad"), (4, 4))
        A = parse_form(_req(d, "spin_connection"), (4, 4))
        return family, GRFixture(PoincareCartan(A, e))
    if family == "conformal":
        e = parse_matrix(_req(d, "tetrad"), (4, 4))
        zero1 = MatrixForm.zero(1, (1, 1))
        a = parse_form(d["a"], (1, 1)) if "a" in d else zero1
        A = parse_form(d["A"], (4, 4)) if "A" in d else MatrixForm.zero(1, (4, 4))
        P = parse_form(d["P"], (1, 4)) if "P" in d else MatrixForm.zero(1, (1, 4))
        varpi = ConformalCartan.from_blocks(a, A, e, P)
        tetrads = []
        for item in d.get("normal_tetrads", []):
            te = parse_matrix(_req(item, "tetrad"), (4, 4))
            tetrads.append((item.get("label", "fixture"), te, mat_inv(te)))
        return family, ConformalFixture(
            varpi=varpi,
            phi=parse_form(_req(d, "tractor"), (6, 1)),
            phi2=parse_form(d.get("tractor2", d["tractor"]), (6, 1)),
            psi=parse_form(_req(d, "twistor"), (4, 1)),
            z=parse_scalar(_req(d, "z")),
            z2=parse_scalar(d.get("z2", d["z"])),
            normal_tetrads=tuple(tetrads),
        )
    raise FixtureError(f"unknown fixture family {family!r}")


def load_fixture(path):
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise FixtureError(f"cannot read fixture: {err}") from err
    try:
        d = json.loads(text)
    except json.JSONDecodeError as err:
        raise FixtureError(f"invalid JSON: {err}") from err
    return fixture_from_dict(d)
