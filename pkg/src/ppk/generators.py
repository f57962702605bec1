"""Deterministic instance generators for the property harnesses.

Every generator takes an :class:`InstanceSpec` and yields ``count``
instances.  All randomness flows from one ``numpy`` PCG64 stream seeded by
``spec.seed``; prime-field instances that must satisfy identities are drawn
with the seeded search engine (``solve(..., seed=s, limit=1)``), whose value
order comes from a seed drawn off that same stream.  Identical specs
therefore give identical instance streams on every platform and backend.

Over the rationals valid instances are built from the catalogue: block sums
of family members and one-dimensional pieces, moved by random unimodular
changes of basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .algebras import Algebra, IdentitySystem, identities_for, sub_adjacent
from .catalog import two_dim_family
from .expr import residual
from .extending import SHAPES, ExtendingDatum, build_unified_product, _change_basis
from .fields import FieldDescriptor, GF, inverse
from .flags import FlagDatum, flag_vector_size
from .poly import Poly, residual_polys, symbolic_array
from .products import MP_MAPS, AbelianCrossedMatrices, MatchedPair
from .representations import (MAP_NAMES, BASE_TABLES, RepKind, Representation,
                              rep_identities)
from .search import ConstraintSystem, solve

__all__ = [
    "InstanceSpec",
    "rng_for",
    "algebras",
    "representations",
    "extending_datums",
    "matched_pairs",
    "comultiplications",
    "r_matrices",
    "flag_datums",
    "abelian_crossed_matrices",
    "sample_solution",
    "GENERATORS",
]


@dataclass(frozen=True)
class InstanceSpec:
    seed: int
    field: FieldDescriptor
    dims: tuple = (2,)
    sparsity: float = 0.0
    count: int = 1

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 0.0 <= float(self.sparsity) < 1.0:
            raise ValueError("sparsity must lie in [0, 1)")
        if int(self.count) < 0:
            raise ValueError("count must be non-negative")
        dims = tuple(int(d) for d in self.dims)
        if not dims or min(dims) < 1:
            raise ValueError("dims must be positive")
        object.__setattr__(self, "dims", dims)

    def to_json(self) -> dict:
        return {"seed": int(self.seed), "field": self.field.to_json(), "dims": list(self.dims),
                "sparsity": float(self.sparsity), "count": int(self.count)}


def rng_for(spec: InstanceSpec) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(spec.seed)))


SAMPLE_BUDGET = 200_000


def _dfs_seed(rng) -> int:
    return int(rng.integers(1, 2 ** 32))


# ---------------------------------------------------------------------------
# seeded constraint sampling

def sample_solution(nvars: int, polys, p: int, rng, sparsity: float = 0.0,
                    pins: int = 0) -> np.ndarray | None:
    """One random zero of ``polys`` over F_p, or None.

    A ``sparsity`` fraction of the variables is forced to zero and up to
    ``pins`` further variables are pinned to random values first.  The pins
    steer the search away from the trivial solutions found first by a
    plain seeded descent.  Each seeded descent runs under a node budget;
    when it runs out, or the pinned system is infeasible, one pin is
    dropped.  Without pins an unseeded descent ends the search, and it
    finds the lexicographically first zero (the zero vector for the
    homogeneous systems used here).
    """
    mask = rng.random(nvars) < sparsity if sparsity > 0 else np.zeros(nvars, dtype=bool)
    zeros = [Poly.var(i, p) for i in np.flatnonzero(mask)]
    free = np.flatnonzero(~mask)
    chosen = rng.permutation(free)[:min(pins, len(free))] if pins else []
    vals = rng.integers(1, p, size=len(chosen)) if p > 1 else np.zeros(len(chosen), dtype=np.int64)
    seed = _dfs_seed(rng)
    for k in range(len(chosen), -1, -1):
        extra = [Poly.var(int(i), p) - int(v) for i, v in zip(chosen[:k], vals[:k])]
        system = ConstraintSystem(nvars, list(polys) + zeros + extra, p)
        rows = solve(system, seed=seed, limit=1, max_nodes=SAMPLE_BUDGET)
        if len(rows):
            return rows[0]
    rows = solve(ConstraintSystem(nvars, list(polys) + zeros, p), limit=1)
    return rows[0] if len(rows) else None


def _unimodular(n: int, field: FieldDescriptor, rng) -> np.ndarray:
    """Product of a random unit upper and a random unit lower triangular matrix."""
    U, L = field.eye(n), field.eye(n)
    for i in range(n):
        for j in range(n):
            v = int(rng.integers(-1, 2))
            if i < j:
                U[i, j] = field.scalar(v)
            elif i > j:
                L[i, j] = field.scalar(v)
    return field.reduce(U @ L)


# ---------------------------------------------------------------------------
# algebras

_ALG_TABLES = {
    IdentitySystem.ZINBIEL: ("zinbiel",),
    IdentitySystem.PRELIE: ("prelie",),
    IdentitySystem.PREPOISSON: ("zinbiel", "prelie"),
}


def _sample_fp_algebra(n, field, system, rng, sparsity):
    names = _ALG_TABLES[system]
    env, k = {}, 0
    for name in names:
        env[name], k = symbolic_array((n, n, n), k, field.p)
    polys = []
    for ident in identities_for(system):
        polys += residual_polys(residual(ident, env, {"A": n}, field))
    row = sample_solution(k, polys, field.p, rng, sparsity, pins=n)
    size = n ** 3
    return Algebra(n, field, {name: row[i * size:(i + 1) * size].reshape(n, n, n)
                              for i, name in enumerate(names)})


def _block_sum(field, parts) -> Algebra:
    n = sum(a.dim for a in parts)
    tables = {"zinbiel": field.zeros((n, n, n)), "prelie": field.zeros((n, n, n))}
    k = 0
    for a in parts:
        d = a.dim
        for name in tables:
            tables[name][k:k + d, k:k + d, k:k + d] = a.table(name)
        k += d
    return Algebra(n, field, tables)


def _qq_algebra(n, field, system, rng, sparsity):
    parts, left = [], n
    while left:
        if left >= 2 and rng.random() < 0.75:
            a, b, c = (int(v) for v in rng.integers(-2, 3, size=3))
            parts.append(two_dim_family(a, b, c, field))
            left -= 2
        else:
            # e∘e = λe is associative; a nonzero Zinbiel square is impossible in dim 1
            lam = int(rng.integers(-2, 3))
            t = field.zeros((1, 1, 1))
            t[0, 0, 0] = field.scalar(lam)
            parts.append(Algebra(1, field, {"zinbiel": field.zeros((1, 1, 1)), "prelie": t}))
            left -= 1
    A = _block_sum(field, parts)
    if system is IdentitySystem.ZINBIEL:
        A = Algebra(n, field, {"zinbiel": A.table("zinbiel")})
    elif system is IdentitySystem.PRELIE:
        A = Algebra(n, field, {"prelie": A.table("prelie")})
    if rng.random() >= sparsity:
        B = _unimodular(n, field, rng)
        A = Algebra(n, field, {k: _change_basis(field, t, B) for k, t in A.tables.items()})
    return A


def algebras(spec: InstanceSpec, system="prepoisson", rng=None) -> Iterator[Algebra]:
    """Valid algebras of ``system`` (zinbiel, prelie, prepoisson or poisson).

    Poisson instances are sub-adjacent algebras of pre-Poisson ones.
    """
    sys_ = IdentitySystem.parse(system) if isinstance(system, str) else system
    poisson = sys_ is IdentitySystem.POISSON
    if poisson:
        sys_ = IdentitySystem.PREPOISSON
    if sys_ not in _ALG_TABLES:
        raise ValueError(f"no generator for {system!r}")
    rng = rng if rng is not None else rng_for(spec)
    n, f = spec.dims[0], spec.field
    for _ in range(spec.count):
        A = (_sample_fp_algebra(n, f, sys_, rng, spec.sparsity) if f.p
             else _qq_algebra(n, f, sys_, rng, spec.sparsity))
        yield sub_adjacent(A) if poisson else A


# ---------------------------------------------------------------------------
# representations

_REP_SYSTEM = {
    RepKind.ZINBIEL: "zinbiel",
    RepKind.PRELIE: "prelie",
    RepKind.POISSON: "poisson",
    RepKind.PREPOISSON: "prepoisson",
}


def _trivial_rep(kind, base, m):
    f = base.field
    return Representation(kind, base, m, {k: f.zeros((base.dim, m, m)) for k in MAP_NAMES[kind]})


def _regular(kind, base):
    from .representations import regular_representation
    return regular_representation(base, kind)


def _sample_fp_rep(kind, base, m, rng, sparsity):
    f, n = base.field, base.dim
    env = {name: base.table(name) for name in BASE_TABLES[kind]}
    k = 0
    names = MAP_NAMES[kind]
    for name in names:
        env[name], k = symbolic_array((n, m, m), k, f.p)
    polys = []
    for ident in rep_identities(kind):
        polys += residual_polys(residual(ident, env, {"A": n, "V": m}, f))
    row = sample_solution(k, polys, f.p, rng, sparsity, pins=m)
    size = n * m * m
    return Representation(kind, base, m, {name: row[i * size:(i + 1) * size].reshape(n, m, m)
                                          for i, name in enumerate(names)})


def _conjugate(rep: Representation, P) -> Representation:
    f = rep.field
    Pinv = inverse(f, P)
    maps = {k: f.reduce(np.einsum("ab,xbc,cd->xad", P, F, Pinv)) for k, F in rep.maps.items()}
    return Representation(rep.kind, rep.base, rep.repdim, maps)


def _qq_rep(kind, base, m, rng):
    from .representations import direct_sum
    n = base.dim
    pieces, left = [], m
    while left:
        if left >= n and rng.random() < 0.7:
            pieces.append(_regular(kind, base))
            left -= n
        else:
            pieces.append(_trivial_rep(kind, base, 1))
            left -= 1
    rep = pieces[0]
    for r in pieces[1:]:
        rep = direct_sum(rep, r)
    return _conjugate(rep, _unimodular(m, base.field, rng))


def representations(spec: InstanceSpec, kind="prepoisson", rng=None) -> Iterator[Representation]:
    """Valid representations; ``spec.dims`` is (base dim, representation dim)."""
    kind = RepKind.parse(kind)
    rng = rng if rng is not None else rng_for(spec)
    n = spec.dims[0]
    m = spec.dims[1] if len(spec.dims) > 1 else n
    sub = InstanceSpec(spec.seed, spec.field, (n,), spec.sparsity, 1)
    for _ in range(spec.count):
        base = next(algebras(sub, _REP_SYSTEM[kind], rng=rng))
        if spec.field.p:
            yield _sample_fp_rep(kind, base, m, rng, spec.sparsity)
        else:
            yield _qq_rep(kind, base, m, rng)


# ---------------------------------------------------------------------------
# extending datums and matched pairs

def _symbolic_datum_system(A: Algebra, q: int, fixed: dict):
    f, n = A.field, A.dim
    maps, k = {}, 0
    slots = []
    for name, code in SHAPES.items():
        shape = tuple({"n": n, "q": q}[c] for c in code)
        if name in fixed:
            maps[name] = fixed[name]
        else:
            maps[name], k2 = symbolic_array(shape, k, f.p)
            slots.append((name, shape, k))
            k = k2
    E = build_unified_product(A, ExtendingDatum(n, q, f, maps))
    polys = []
    for ident in identities_for(IdentitySystem.PREPOISSON):
        polys += residual_polys(residual(ident, E.tables, {"A": n + q}, f))
    return k, polys, slots, maps


def _datum_from_row(A, q, row, slots, maps):
    f = A.field
    out = dict(maps)
    for name, shape, start in slots:
        size = int(np.prod(shape))
        out[name] = row[start:start + size].reshape(shape)
    return ExtendingDatum(A.dim, q, f, out)


def valid_datum(A: Algebra, q: int, rng, sparsity=0.0, fixed=None) -> ExtendingDatum | None:
    """A random datum making A♮V pre-Poisson (F_p only)."""
    fixed = dict(fixed or {})
    k, polys, slots, maps = _symbolic_datum_system(A, q, fixed)
    row = sample_solution(k, polys, A.field.p, rng, sparsity, pins=q + 1)
    return None if row is None else _datum_from_row(A, q, row, slots, maps)


def random_datum(A: Algebra, q: int, rng, sparsity=0.0) -> ExtendingDatum:
    f, n = A.field, A.dim
    maps = {name: f.random_array(rng, tuple({"n": n, "q": q}[c] for c in code), sparsity)
            for name, code in SHAPES.items()}
    return ExtendingDatum(n, q, f, maps)


def extending_datums(spec: InstanceSpec, mode: str = "mixed", rng=None):
    """(A, datum) pairs; ``spec.dims`` is (dim A, dim V).

    ``mode`` is ``valid`` (unified products), ``random`` (uniform entries)
    or ``mixed``: a third valid, a third valid with one map perturbed, a
    third uniform.  The perturbed ones fail in one block family, which is
    what separates faithful condition lists from faulty ones.
    """
    if mode not in ("valid", "random", "mixed"):
        raise ValueError(f"unknown datum mode {mode!r}")
    rng = rng if rng is not None else rng_for(spec)
    n = spec.dims[0]
    q = spec.dims[1] if len(spec.dims) > 1 else 1
    sub = InstanceSpec(spec.seed, spec.field, (n,), spec.sparsity, 1)
    for i in range(spec.count):
        A = next(algebras(sub, "prepoisson", rng=rng))
        kind = mode if mode != "mixed" else ("valid", "perturbed", "random")[i % 3]
        if kind == "random" or not spec.field.p:
            yield A, random_datum(A, q, rng, spec.sparsity)
            continue
        d = valid_datum(A, q, rng, spec.sparsity)
        if kind == "perturbed":
            name = sorted(SHAPES)[int(rng.integers(len(SHAPES)))]
            arr = np.array(d[name], copy=True)
            idx = tuple(int(rng.integers(s)) for s in arr.shape)
            arr[idx] = (int(arr[idx]) + int(rng.integers(1, spec.field.p))) % spec.field.p
            d = d.replace(**{name: arr})
        yield A, d


def matched_pairs(spec: InstanceSpec, kind: str = "prepoisson", rng=None) -> Iterator[MatchedPair]:
    """Valid matched pairs of pre-Poisson algebras over F_p; dims (n1, n2)."""
    if kind != "prepoisson":
        raise ValueError("only pre-Poisson matched pairs are generated")
    if not spec.field.p:
        raise ValueError("matched-pair sampling needs a prime field")
    rng = rng if rng is not None else rng_for(spec)
    n1 = spec.dims[0]
    n2 = spec.dims[1] if len(spec.dims) > 1 else n1
    f = spec.field
    for _ in range(spec.count):
        A1 = next(algebras(InstanceSpec(spec.seed, f, (n1,), spec.sparsity, 1), rng=rng))
        A2 = next(algebras(InstanceSpec(spec.seed, f, (n2,), spec.sparsity, 1), rng=rng))
        fixed = {"f": f.zeros((n2, n2, n1)), "g": f.zeros((n2, n2, n1)),
                 "star2": A2.table("zinbiel"), "circ2": A2.table("prelie")}
        d = valid_datum(A1, n2, rng, spec.sparsity, fixed)
        yield MatchedPair("prepoisson", A1, A2, {k: d[k] for k in MP_MAPS["prepoisson"]})


# ---------------------------------------------------------------------------
# plain random tensors

def comultiplications(spec: InstanceSpec, rng=None) -> Iterator[np.ndarray]:
    rng = rng if rng is not None else rng_for(spec)
    n = spec.dims[0]
    for _ in range(spec.count):
        yield spec.field.random_array(rng, (n, n, n), spec.sparsity)


def r_matrices(spec: InstanceSpec, symmetric: bool = False, rng=None) -> Iterator[np.ndarray]:
    rng = rng if rng is not None else rng_for(spec)
    n, f = spec.dims[0], spec.field
    for _ in range(spec.count):
        r = f.random_array(rng, (n, n), spec.sparsity)
        yield f.reduce(r + r.T - np.diag(np.diag(r))) if symmetric else r


def flag_datums(spec: InstanceSpec, rng=None) -> Iterator[FlagDatum]:
    rng = rng if rng is not None else rng_for(spec)
    n, f = spec.dims[0], spec.field
    for _ in range(spec.count):
        vals = f.random_array(rng, (flag_vector_size(n),), spec.sparsity)
        yield FlagDatum.from_vector(n, f, vals.tolist())


def abelian_crossed_matrices(spec: InstanceSpec, mode: str = "mixed", rng=None):
    """Six-tuples (A, B, C, D, θ₀, υ₀); ``mixed`` alternates sampled-valid and uniform."""
    rng = rng if rng is not None else rng_for(spec)
    n, f = spec.dims[0], spec.field
    for i in range(spec.count):
        if f.p and (mode == "valid" or (mode == "mixed" and i % 2 == 0)):
            fixed = {k: f.zeros(tuple({"n": n, "q": 1}[c] for c in SHAPES[k]))
                     for k in ("l1", "r1", "rho1", "mu1", "star2", "circ2")}
            d = valid_datum(Algebra.zero(n, f), 1, rng, spec.sparsity, fixed)
            yield AbelianCrossedMatrices(d["rho2"][0].T, d["mu2"][0].T, d["l2"][0].T,
                                         d["r2"][0].T, d["g"][0, 0], d["f"][0, 0])
        else:
            mats = [f.random_array(rng, (n, n), spec.sparsity) for _ in range(4)]
            vecs = [f.random_array(rng, (n,), spec.sparsity) for _ in range(2)]
            yield AbelianCrossedMatrices(*mats, *vecs)


GENERATORS = {
    "algebra": algebras,
    "representation": representations,
    "datum": extending_datums,
    "matched": matched_pairs,
    "comultiplication": comultiplications,
    "r": r_matrices,
    "flag": flag_datums,
    "abelian-matrices": abelian_crossed_matrices,
}
