"""Sparse multivariate polynomials with exact coefficients.

These only exist to turn an identity check into a list of polynomial
constraints on unknown structure constants: fill a table with ``Poly``
variables, run the ordinary evaluator, and read off the residual entries.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


class Poly:
    """Polynomial as ``{monomial: coefficient}``; a monomial is a sorted tuple
    of variable indices (repetition means powers)."""

    __slots__ = ("terms", "p")

    def __init__(self, terms=None, p: int = 0):
        self.p = p
        self.terms: dict[tuple, object] = {}
        if terms:
            for mono, c in terms.items():
                self._acc(mono, c)

    @classmethod
    def var(cls, i: int, p: int = 0) -> "Poly":
        return cls({(i,): 1}, p)

    @classmethod
    def const(cls, c, p: int = 0) -> "Poly":
        return cls({(): c}, p)

    def _acc(self, mono, c):
        c = self.terms.get(mono, 0) + c
        if self.p:
            c %= self.p
        if c == 0:
            self.terms.pop(mono, None)
        else:
            self.terms[mono] = c

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, np.integer, Fraction)):
            return Poly({(): int(other) if isinstance(other, np.integer) else other}, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = Poly(self.terms, self.p)
        for mono, c in other.terms.items():
            out._acc(mono, c)
        return out

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()}, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer, Fraction)):
            if other == 0:
                return Poly(p=self.p)
            return Poly({m: c * other for m, c in self.terms.items()}, self.p)
        if not isinstance(other, Poly):
            return NotImplemented
        out = Poly(p=self.p or other.p)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out._acc(tuple(sorted(m1 + m2)), c1 * c2)
        return out

    __rmul__ = __mul__

    def __mod__(self, p):
        if self.p == p:
            return self
        return Poly(self.terms, p)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return (self - other).is_zero()
        if isinstance(other, (int, np.integer, Fraction)):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant(self):
        return self.terms.get((), 0)

    def variables(self) -> set[int]:
        return {v for m in self.terms for v in m}

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def evaluate(self, values) -> object:
        total = 0
        for mono, c in self.terms.items():
            t = c
            for v in mono:
                t = t * values[v]
            total += t
        return total % self.p if self.p else total

    def normalized(self) -> "Poly":
        """Scale so the leading coefficient is 1 (same zero set)."""
        if not self.terms:
            return self
        lead = self.terms[min(self.terms)]
        if self.p:
            inv = pow(int(lead), -1, self.p)
            return Poly({m: c * inv for m, c in self.terms.items()}, self.p)
        return Poly({m: Fraction(c) / lead for m, c in self.terms.items()})

    def integer_terms(self) -> list[tuple[int, tuple]]:
        """Terms with integer coefficients (rationals are cleared of denominators)."""
        if self.p:
            return [(int(c), m) for m, c in sorted(self.terms.items())]
        den = 1
        for c in self.terms.values():
            d = Fraction(c).denominator
            den = den * d // np.gcd(den, d)
        return [(int(Fraction(c) * den), m) for m, c in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items()):
            name = "*".join(f"v{v}" for v in mono)
            parts.append(f"{c}*{name}" if name else f"{c}")
        return " + ".join(parts)


def symbolic_array(shape, start: int, p: int = 0) -> tuple[np.ndarray, int]:
    """Object array of fresh variables numbered from ``start``."""
    arr = np.empty(shape, dtype=object)
    k = start
    for idx in np.ndindex(*shape):
        arr[idx] = Poly.var(k, p)
        k += 1
    return arr, k


def residual_polys(arr) -> list[Poly]:
    """Nonzero entries of an object array as polynomials."""
    out = []
    for v in np.asarray(arr, dtype=object).flat:
        if isinstance(v, Poly):
            if not v.is_zero():
                out.append(v)
        elif v != 0:
            out.append(Poly.const(v))
    return out
