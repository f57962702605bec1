"""Exact scalar fields and small dense linear algebra.

Two fields are supported: the rationals (``fractions.Fraction`` entries in
object arrays) and prime fields F_p (``int64`` residues in ``[0, p)``).
Everything else in the package builds its coefficient arrays through a
:class:`FieldDescriptor`, so arithmetic stays exact end to end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FieldDescriptor",
    "QQ",
    "GF",
    "FieldError",
    "solve_linear",
    "determinant",
    "rank",
    "inverse",
    "dualize_endo_family",
    "tensor_flip",
]


class FieldError(ValueError):
    """Invalid field descriptor or scalar."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldDescriptor:
    """Either the rationals (``kind="rationals"``) or F_p (``kind="fp"``)."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "rationals":
            if self.p is not None:
                raise FieldError("rationals carry no modulus")
        elif self.kind == "fp":
            if not isinstance(self.p, (int, np.integer)) or isinstance(self.p, bool):
                raise FieldError("prime field needs an integer modulus")
            if not 2 <= int(self.p) <= 251:
                raise FieldError(f"modulus {self.p} outside [2, 251]")
            if not _is_prime(int(self.p)):
                raise FieldError(f"modulus {self.p} is not prime")
            object.__setattr__(self, "p", int(self.p))
        else:
            raise FieldError(f"unknown field kind {self.kind!r}")

    # -- descriptors -------------------------------------------------------
    @property
    def is_prime_field(self) -> bool:
        return self.kind == "fp"

    @property
    def dtype(self):
        return np.int64 if self.kind == "fp" else object

    def __str__(self) -> str:
        return "QQ" if self.kind == "rationals" else f"F{self.p}"

    def to_json(self) -> dict:
        if self.kind == "rationals":
            return {"kind": "rationals"}
        return {"kind": "fp", "p": self.p}

    @classmethod
    def from_json(cls, doc) -> "FieldDescriptor":
        if not isinstance(doc, dict) or "kind" not in doc:
            raise FieldError("field must be an object with a 'kind'")
        kind = doc["kind"]
        if kind in ("fp", "prime-field", "prime_field"):
            return cls("fp", doc.get("p", doc.get("modulus")))
        return cls(kind, doc.get("p"))

    @classmethod
    def parse(cls, text: str) -> "FieldDescriptor":
        """Parse CLI spellings: ``q``, ``QQ``, ``rationals``, ``f3``, ``F3``, ``gf3``."""
        t = text.strip().lower()
        if t in ("q", "qq", "rationals", "rational"):
            return QQ
        for prefix in ("gf", "fp", "f"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return cls("fp", int(t[len(prefix):]))
        raise FieldError(f"cannot parse field {text!r}")

    # -- scalars -----------------------------------------------------------
    def scalar(self, v):
        """Coerce ``v`` (int, Fraction, or string) into the field."""
        if isinstance(v, str):
            v = self.parse_scalar(v)
        if isinstance(v, (bool, np.bool_)):
            raise FieldError("booleans are not scalars")
        if self.kind == "rationals":
            if isinstance(v, (int, np.integer)):
                return Fraction(int(v))
            if isinstance(v, Fraction):
                return v
            raise FieldError(f"not an exact rational: {v!r}")
        if isinstance(v, (int, np.integer)):
            return int(v) % self.p
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise FieldError(f"{v} has no image in F{self.p}")
            return v.numerator * pow(v.denominator, -1, self.p) % self.p
        raise FieldError(f"not an exact scalar: {v!r}")

    def parse_scalar(self, s: str):
        s = s.strip()
        try:
            if "/" in s:
                num, den = s.split("/")
                val = Fraction(int(num), int(den))
            else:
                val = Fraction(int(s))
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"cannot parse scalar {s!r}") from exc
        if self.kind == "fp":
            if val.denominator != 1:
                raise FieldError(f"F_p scalars must be integers, got {s!r}")
            return int(val) % self.p
        return val

    def format_scalar(self, v) -> str:
        if self.kind == "fp":
            return str(int(v) % self.p)
        v = Fraction(v)
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def inv(self, v):
        if self.kind == "fp":
            v = int(v) % self.p
            if v == 0:
                raise ZeroDivisionError("zero has no inverse")
            return pow(v, -1, self.p)
        return 1 / Fraction(v)

    def elements(self) -> range:
        if self.kind != "fp":
            raise FieldError("the rationals are not enumerable")
        return range(self.p)

    def units(self) -> range:
        return range(1, self.p) if self.kind == "fp" else None

    # -- arrays ------------------------------------------------------------
    def array(self, data) -> np.ndarray:
        """Nested lists (ints, Fractions, strings) -> a reduced field array."""
        raw = np.array(data, dtype=object)
        if raw.size == 0:
            return np.zeros(raw.shape, dtype=self.dtype)
        conv = np.vectorize(self.scalar, otypes=[object])(raw)
        if self.kind == "fp":
            return conv.astype(np.int64)
        return conv

    def zeros(self, shape) -> np.ndarray:
        if self.kind == "fp":
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.scalar(1)
        return out

    def reduce(self, arr):
        """Normalize an arithmetic result back into the field.

        Object arrays (Fractions, or the polynomial type used by the
        search engine) are already canonical except for plain ints that
        may have been produced by numpy; those are coerced.
        """
        if not isinstance(arr, np.ndarray):
            return self.scalar(arr) if isinstance(arr, (int, np.integer, Fraction)) else arr
        if self.kind == "fp":
            if arr.dtype == object:
                return _mod_obj(arr, self.p)
            return np.mod(arr, self.p)
        if arr.dtype != object:
            return np.vectorize(lambda v: Fraction(int(v)), otypes=[object])(arr)
        return arr

    def is_zero(self, arr) -> bool:
        arr = self.reduce(np.asarray(arr))
        if arr.dtype != object:
            return not arr.any()
        return all(v == 0 for v in arr.flat)

    def equal(self, a, b) -> bool:
        return self.is_zero(np.asarray(a) - np.asarray(b))

    def to_json_array(self, arr):
        arr = np.asarray(self.reduce(np.asarray(arr)))
        if arr.ndim == 0:
            return self.format_scalar(arr.item())
        return [self.to_json_array(sub) for sub in arr]

    def random_array(self, rng: np.random.Generator, shape, sparsity: float = 0.0,
                     low: int = -2, high: int = 2) -> np.ndarray:
        """Random field array; entries are zero with probability ``sparsity``.

        Over F_p entries are uniform residues; over the rationals they are
        integers in ``[low, high]``.
        """
        shape = tuple(shape)
        if self.kind == "fp":
            vals = rng.integers(0, self.p, size=shape, dtype=np.int64)
        else:
            vals = rng.integers(low, high + 1, size=shape, dtype=np.int64)
        if sparsity > 0:
            mask = rng.random(size=shape) < sparsity
            vals = np.where(mask, 0, vals)
        return self.reduce(vals) if self.kind == "fp" else self.array(vals.tolist())


def _mod_obj(arr: np.ndarray, p: int) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        if isinstance(v, (int, np.integer)):
            out[idx] = int(v) % p
        elif isinstance(v, Fraction):
            out[idx] = v.numerator * pow(v.denominator, -1, p) % p
        else:
            out[idx] = v
    return out


QQ = FieldDescriptor("rationals")


def GF(p: int) -> FieldDescriptor:
    return FieldDescriptor("fp", p)


# ---------------------------------------------------------------------------
# elimination

def _rows(field: FieldDescriptor, M) -> list[list]:
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    return [[field.scalar(int(v)) if isinstance(v, np.integer) else field.scalar(v)
             for v in row] for row in M.tolist()]


def _echelon(field: FieldDescriptor, rows: list[list]) -> tuple[list[list], list[int], int]:
    """Row reduce in place; returns (rows, pivot columns, sign of permutation)."""
    p = field.p
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    pivots: list[int] = []
    sign = 1
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        inv = field.inv(rows[r][c])
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                fac = rows[i][c] * inv
                if p:
                    fac %= p
                    rows[i] = [(a - fac * b) % p for a, b in zip(rows[i], rows[r])]
                else:
                    rows[i] = [a - fac * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return rows, pivots, sign


def solve_linear(field: FieldDescriptor, M, b) -> np.ndarray | None:
    """One exact solution of ``M x = b`` or ``None`` when inconsistent.

    Free variables are set to zero, so square nonsingular systems return
    their unique solution.
    """
    M = np.asarray(M)
    b = np.asarray(b)
    if M.ndim != 2 or b.ndim != 1 or M.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: M {M.shape}, b {b.shape}")
    nr, nc = M.shape
    rows = [r + [field.scalar(v)] for r, v in zip(_rows(field, M), b.tolist())] if nc else \
        [[field.scalar(v)] for v in b.tolist()]
    rows, pivots, _ = _echelon(field, rows)
    if nc in pivots:
        return None
    x = [field.scalar(0)] * nc
    for r, c in enumerate(pivots):
        x[c] = field.reduce(rows[r][nc] * field.inv(rows[r][c])) if field.p else \
            rows[r][nc] / rows[r][c]
    return field.array(x) if nc else field.zeros((0,))


def determinant(field: FieldDescriptor, M):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("determinant needs a square matrix")
    n = M.shape[0]
    if n == 0:
        return field.scalar(1)
    rows = _rows(field, M)
    # fraction-free style is unnecessary at these sizes; track pivots instead
    det = field.scalar(1)
    p = field.p
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return field.scalar(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = field.inv(rows[c][c])
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                fac = rows[i][c] * inv
                rows[i] = [a - fac * b for a, b in zip(rows[i], rows[c])]
                if p:
                    rows[i] = [v % p for v in rows[i]]
        if p:
            det %= p
    return field.scalar(det)


def rank(field: FieldDescriptor, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    _, pivots, _ = _echelon(field, _rows(field, M))
    return len(pivots)


def inverse(field: FieldDescriptor, M) -> np.ndarray | None:
    """Exact inverse, or ``None`` for a singular matrix."""
    M = np.asarray(M)
    n = M.shape[0]
    if M.ndim != 2 or M.shape[1] != n:
        raise ValueError("inverse needs a square matrix")
    ident = field.eye(n)
    rows = [r + list(e) for r, e in zip(_rows(field, M), ident.tolist())]
    rows, pivots, _ = _echelon(field, rows)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    out = []
    for r in range(n):
        inv = field.inv(rows[r][r])
        out.append([field.reduce(v * inv) if field.p else v * inv for v in rows[r][n:]])
    return field.array(out)


# ---------------------------------------------------------------------------
# dual-space primitives

def dualize_endo_family(field: FieldDescriptor, F) -> np.ndarray:
    """Negated transpose of every matrix of a family ``A -> End(V)``.

    Realizes ``<f*(x) u*, v> = -<u*, f(x) v>`` in the dual basis.
    """
    F = np.asarray(F)
    if F.ndim != 3 or F.shape[1] != F.shape[2]:
        raise ValueError(f"endomorphism family must have shape (n, m, m), got {F.shape}")
    return field.reduce(-np.transpose(F, (0, 2, 1)))


def tensor_flip(t) -> np.ndarray:
    """The flip x⊗y -> y⊗x on a coefficient matrix."""
    t = np.asarray(t)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ValueError("tensor_flip needs a square matrix")
    return t.T.copy()


def as_vector(field: FieldDescriptor, values: Iterable) -> np.ndarray:
    return field.array(list(values))


def block(field: FieldDescriptor, parts: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    return field.reduce(np.block([[np.asarray(p) for p in row] for row in parts]))
