"""Multilinear term trees and their evaluation on structure constants.

Every identity the package checks is written once as a pair of term trees
over formal variables.  A variable lives in a named space ("A", "V", ...);
operations are looked up by name in an environment of coefficient arrays:

* binary ops ``T[a, b, c]`` map (u, v) to ``sum_c T[a, b, c] e_c``,
* unary ops ``M[a, c]`` use the row convention (row ``a`` is the image of
  ``e_a``),
* nullary ops are fixed vectors.

Evaluating a term yields an array with one axis per variable followed by
one output axis, so an identity holds iff the residual array vanishes;
by multilinearity this is the same as checking all basis tuples.

Two relaxations exist so that equations containing index slips can still
be evaluated as written: a variable repeated inside one term is read on
the diagonal, and a term missing some variable is broadcast along it.
Such equations are checked on basis tuples only.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .fields import FieldDescriptor

__all__ = ["Term", "Var", "App", "Expr", "Identity", "op", "evaluate", "residual"]


class Expr:
    """Integer linear combination of atomic terms."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms: tuple = tuple(terms)

    @staticmethod
    def of(x) -> "Expr":
        if isinstance(x, Expr):
            return x
        if isinstance(x, Term):
            return Expr(((1, x),))
        if x == 0:
            return Expr(())
        raise TypeError(f"cannot build an expression from {x!r}")

    def __add__(self, other):
        return Expr(self.terms + Expr.of(other).terms)

    def __radd__(self, other):
        return Expr.of(other) + self

    def __sub__(self, other):
        return self + (-Expr.of(other))

    def __rsub__(self, other):
        return Expr.of(other) - self

    def __neg__(self):
        return Expr((-c, t) for c, t in self.terms)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return Expr((k * c, t) for c, t in self.terms)

    __rmul__ = __mul__

    def variables(self) -> list[str]:
        seen: list[str] = []
        for _, t in self.terms:
            for v in t.variables():
                if v not in seen:
                    seen.append(v)
        return seen

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{t!r}" for c, t in self.terms)


class Term:
    __slots__ = ()

    def _e(self) -> Expr:
        return Expr(((1, self),))

    def __add__(self, o):
        return self._e() + o

    def __radd__(self, o):
        return Expr.of(o) + self._e()

    def __sub__(self, o):
        return self._e() - o

    def __rsub__(self, o):
        return Expr.of(o) - self._e()

    def __neg__(self):
        return -self._e()

    def __mul__(self, k):
        return self._e() * k

    __rmul__ = __mul__

    def variables(self) -> list[str]:
        raise NotImplementedError


class Var(Term):
    __slots__ = ("name", "space")

    def __init__(self, name: str, space: str):
        self.name = name
        self.space = space

    def variables(self):
        return [self.name]

    def __repr__(self):
        return self.name


class App(Term):
    """An operation applied to zero, one, or two argument expressions."""

    __slots__ = ("name", "args")

    def __init__(self, name: str, args: tuple):
        self.name = name
        self.args = tuple(Expr.of(a) for a in args)

    def variables(self):
        out: list[str] = []
        for a in self.args:
            for v in a.variables():
                if v not in out:
                    out.append(v)
        return out

    def __repr__(self):
        return f"{self.name}({', '.join(map(repr, self.args))})"


def op(name: str):
    """Factory: ``m = op("m"); m(x, y)`` builds an application node."""

    def build(*args):
        return App(name, args)

    build.__name__ = name
    return build


@dataclass(frozen=True)
class Identity:
    """``lhs = rhs`` for all values of ``varorder``.

    ``case`` optionally tags the identity with the building block it came
    from (used to attribute disagreements between equivalent formulations).
    """

    name: str
    lhs: Expr
    rhs: Expr
    derived: bool = False
    case: tuple | None = None
    varorder: tuple = dc_field(default=())

    def variables(self) -> tuple:
        if self.varorder:
            return self.varorder
        seen = Expr.of(self.lhs).variables()
        for v in Expr.of(self.rhs).variables():
            if v not in seen:
                seen.append(v)
        return tuple(seen)


def identity(name, lhs, rhs, **kw) -> Identity:
    return Identity(name, Expr.of(lhs), Expr.of(rhs), **kw)


# ---------------------------------------------------------------------------
# evaluation

class _Val:
    __slots__ = ("vars", "arr")

    def __init__(self, vars_, arr):
        self.vars = vars_
        self.arr = arr


def _spaces(e: Expr, acc: dict) -> dict:
    for _, t in e.terms:
        if isinstance(t, Var):
            if acc.setdefault(t.name, t.space) != t.space:
                raise ValueError(f"variable {t.name} used in two spaces")
        else:
            for a in t.args:
                _spaces(a, acc)
    return acc


def _align(v: _Val, order: tuple, vdims: dict) -> np.ndarray:
    """Transpose ``v`` to ``order``, broadcasting variables it does not use."""
    arr = v.arr
    missing = [x for x in order if x not in v.vars]
    cur = list(v.vars)
    for x in missing:
        arr = np.expand_dims(arr, 0)
        arr = np.repeat(arr, vdims[x], axis=0)
        cur.insert(0, x)
    if tuple(cur) != tuple(order):
        arr = np.transpose(arr, [cur.index(x) for x in order] + [len(order)])
    return arr


def _eval_expr(e: Expr, env, vdims, field) -> _Val:
    vals = [(c, _eval_term(t, env, vdims, field)) for c, t in e.terms]
    if not vals:
        raise ValueError("cannot evaluate an empty expression without context")
    order: list = []
    for _, v in vals:
        for x in v.vars:
            if x not in order:
                order.append(x)
    order = tuple(order)
    total = None
    for c, v in vals:
        arr = _align(v, order, vdims)
        term = arr * c if c != 1 else arr
        total = term if total is None else total + term
    return _Val(order, field.reduce(total))


def _merge_repeats(vars_: tuple, arr: np.ndarray) -> _Val:
    # a variable occurring twice in one term is evaluated on the diagonal
    vars_ = list(vars_)
    while len(set(vars_)) != len(vars_):
        seen = {}
        for i, x in enumerate(vars_):
            if x in seen:
                j = seen[x]
                break
            seen[x] = i
        arr = np.moveaxis(np.diagonal(arr, axis1=j, axis2=i), -1, j)
        del vars_[i]
    return _Val(tuple(vars_), arr)


def _eval_term(t: Term, env, vdims, field) -> _Val:
    if isinstance(t, Var):
        return _Val((t.name,), field.eye(vdims[t.name]))
    if not isinstance(t, App):
        raise TypeError(t)
    try:
        T = env[t.name]
    except KeyError:
        raise KeyError(f"operation {t.name!r} missing from the environment") from None
    args = [_eval_expr(a, env, vdims, field) for a in t.args]
    if len(args) != T.ndim - 1:
        raise ValueError(f"{t.name} expects {T.ndim - 1} arguments, got {len(args)}")
    if not args:
        return _Val((), T)
    if len(args) == 1:
        (x,) = args
        return _Val(x.vars, field.reduce(np.tensordot(x.arr, T, axes=([-1], [0]))))
    x, y = args
    # contract left argument with first slot, then right argument with second
    tmp = np.tensordot(x.arr, T, axes=([-1], [0]))            # x.vars + (b, c)
    res = np.tensordot(y.arr, tmp, axes=([-1], [len(x.vars)]))  # y.vars + x.vars + (c,)
    ny, nx = len(y.vars), len(x.vars)
    perm = list(range(ny, ny + nx)) + list(range(ny)) + [ny + nx]
    out = _merge_repeats(x.vars + y.vars, np.transpose(res, perm))
    return _Val(out.vars, field.reduce(out.arr))


class _IntegralRationals:
    """Arithmetic stand-in for the rationals that keeps integral entries as ints.

    Mixed int/Fraction object arrays stay exact, and int products are far
    cheaper than Fraction ones.
    """

    @staticmethod
    def eye(n):
        out = np.zeros((n, n), dtype=object)
        for i in range(n):
            out[i, i] = 1
        return out

    @staticmethod
    def reduce(arr):
        return arr


_INTS = _IntegralRationals()
_to_int = np.vectorize(lambda v: v.numerator if type(v) is Fraction and v.denominator == 1 else v,
                       otypes=[object])
_to_frac = np.vectorize(lambda v: Fraction(v) if isinstance(v, int) else v, otypes=[object])


def _integral_env(env):
    return {k: _to_int(a) if isinstance(a, np.ndarray) and a.dtype == object and a.size else a
            for k, a in env.items()}


def evaluate(e, env: Mapping[str, np.ndarray], dims: Mapping[str, int],
             field: FieldDescriptor, order: tuple | None = None) -> np.ndarray:
    """Evaluate an expression; axes follow ``order`` (then the output axis)."""
    e = Expr.of(e)
    vdims = {name: dims[space] for name, space in _spaces(e, {}).items()}
    rational = field.kind == "rationals"
    if rational:
        v = _eval_expr(e, _integral_env(env), vdims, _INTS)
    else:
        v = _eval_expr(e, env, vdims, field)
    arr = _align(v, tuple(order), vdims) if order is not None and tuple(order) != v.vars else v.arr
    if rational:
        arr = _to_frac(arr) if arr.size else field.zeros(arr.shape)
    return arr


def residual(ident: Identity, env, dims, field: FieldDescriptor) -> np.ndarray:
    """``lhs - rhs`` as an array indexed by (variables..., output)."""
    order = ident.variables()
    lhs = ident.lhs - ident.rhs
    if not lhs.terms:
        raise ValueError(f"identity {ident.name} is empty")
    return evaluate(lhs, env, dims, field, order)


def nonzero_indices(field: FieldDescriptor, arr: np.ndarray) -> list[tuple]:
    """Sorted index tuples (excluding the output axis) with a nonzero residual."""
    arr = field.reduce(arr)
    hits = set()
    for idx, v in np.ndenumerate(arr):
        if v != 0:
            hits.add(idx[:-1])
    return sorted(hits)
