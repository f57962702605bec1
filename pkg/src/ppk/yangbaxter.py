"""Tensor equations for r ∈ A⊗A and the coboundary construction.

``r`` is an ``(n, n)`` array with ``r = Σ r[u][v] e_u ⊗ e_v``.  Elements
of A⊗A⊗A are ``(n, n, n)`` arrays, one axis per leg.

All leg placements ``r_pq · r_st`` come from :func:`place`: copy one of
``r`` sits on legs ``(p, q)``, copy two on ``(s, t)``, and on the shared
leg the two components are multiplied with copy one on the left.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebras import Algebra, IdentitySystem, check_identities
from .fields import FieldDescriptor
from .poly import residual_polys, symbolic_array
from .search import BRUTE_LIMIT, ConstraintSystem, SearchBoundError, solve

__all__ = [
    "place",
    "d_obstruction",
    "s_obstruction",
    "YBEVerdict",
    "check_ppybe",
    "coboundary_comultiplications",
    "coboundary_bialgebra",
    "ca_obstructions",
    "ca_residuals",
    "search_solutions",
    "is_symmetric",
]

_LEGS = "abc"


def _rmat(alg: Algebra, r) -> np.ndarray:
    r = np.asarray(r)
    if r.shape != (alg.dim, alg.dim):
        raise ValueError(f"r has shape {r.shape}, expected {(alg.dim, alg.dim)}")
    f = alg.field
    if r.dtype == object or f.p:
        return f.reduce(r)
    return f.array(r.tolist())


def place(table, r, first, second) -> np.ndarray:
    """``r_{first} · r_{second}`` for 1-based leg pairs such as ``(1, 2)``.

    ``table[x][y][m]`` is the structure constant of the product used on
    the shared leg.
    """
    (p, q), (s, t) = first, second
    shared = ({p, q} & {s, t})
    if len(shared) != 1 or len({p, q}) != 2 or len({s, t}) != 2:
        raise ValueError(f"legs {first} and {second} must share exactly one slot")
    (m,) = shared
    out = list(_LEGS)
    out[m - 1] = "m"
    c1 = {p: "u", q: "v"}
    c2 = {s: "w", t: "z"}
    for leg in (1, 2, 3):
        if leg != m:
            out[leg - 1] = c1.get(leg) or c2[leg]
    spec = f"uv,wz,{c1[m]}{c2[m]}m->{''.join(out)}"
    return np.einsum(spec, r, r, table)


def _plumb(alg: Algebra, r):
    r = _rmat(alg, r)
    return alg.field, r


def d_obstruction(alg: Algebra, r, variant: str = "D") -> np.ndarray:
    """D(r), D₁(r) or D₂(r) in A⊗A⊗A."""
    f, r = _plumb(alg, r)
    s = alg.table("zinbiel")
    st = s + np.transpose(s, (1, 0, 2))
    if variant == "D":
        out = place(s, r, (2, 3), (1, 2)) + place(s, r, (2, 3), (1, 3)) - place(st, r, (1, 2), (1, 3))
    elif variant == "D1":
        out = place(s, r, (1, 3), (1, 2)) + place(s, r, (1, 3), (2, 3)) - place(st, r, (2, 3), (1, 2))
    elif variant == "D2":
        out = place(s, r, (1, 2), (2, 3)) + place(s, r, (1, 2), (1, 3)) - place(st, r, (1, 3), (2, 3))
    else:
        raise ValueError(f"unknown D variant {variant!r}")
    return f.reduce(out)


def s_obstruction(alg: Algebra, r) -> np.ndarray:
    """S(r) = −r₁₂∘r₁₃ + r₁₂∘r₂₃ + [r₁₃, r₂₃]."""
    f, r = _plumb(alg, r)
    o = alg.table("prelie")
    br = o - np.transpose(o, (1, 0, 2))
    return f.reduce(-place(o, r, (1, 2), (1, 3)) + place(o, r, (1, 2), (2, 3))
                    + place(br, r, (1, 3), (2, 3)))


def is_symmetric(field: FieldDescriptor, r) -> bool:
    r = np.asarray(r)
    return field.is_zero(r - r.T)


@dataclass
class YBEVerdict:
    symmetric: bool
    d_zero: bool
    s_zero: bool

    @property
    def ppybe(self) -> bool:
        return self.d_zero and self.s_zero

    def to_json(self) -> dict:
        return {"symmetric": self.symmetric, "d_zero": self.d_zero, "s_zero": self.s_zero,
                "ppybe": self.ppybe}


def check_ppybe(alg: Algebra, r) -> YBEVerdict:
    rep = check_identities(alg, IdentitySystem.PREPOISSON)
    if not rep.passed:
        raise ValueError("not a pre-Poisson algebra: " + ", ".join(rep.failed_identities))
    f = alg.field
    r = _rmat(alg, r)
    return YBEVerdict(is_symmetric(f, r), f.is_zero(d_obstruction(alg, r)),
                      f.is_zero(s_obstruction(alg, r)))


# ---------------------------------------------------------------------------
# coboundaries

def _families(alg: Algebra):
    s, o = alg.table("zinbiel"), alg.table("prelie")
    L = s
    R = np.transpose(s, (1, 0, 2))
    Lo = o
    Ro = np.transpose(o, (1, 0, 2))
    return {"L": L, "R": R, "Lst": L + R, "Lo": Lo, "Ro": Ro, "ad": Lo - Ro}


def coboundary_comultiplications(alg: Algebra, r):
    """Δ(x) = (I⊗L⋆(x) − L∗(x)⊗I)r and δ(x) = (I⊗ad(x) + L∘(x)⊗I)r."""
    f, r = _plumb(alg, r)
    F = _families(alg)
    right = lambda M: np.einsum("uv,xvk->xuk", r, M)     # (I⊗M(x)) r
    left = lambda M: np.einsum("uv,xuj->xjv", r, M)      # (M(x)⊗I) r
    D = f.reduce(right(F["Lst"]) - left(F["L"]))
    d = f.reduce(right(F["ad"]) + left(F["Lo"]))
    return D, d


def coboundary_bialgebra(alg: Algebra, r):
    from .bialgebras import BialgebraData
    D, d = coboundary_comultiplications(alg, r)
    return BialgebraData(alg, D, d)


# ---------------------------------------------------------------------------
# CA obstructions, transcribed term by term

def _op3(F, G, H, t):
    """(F⊗G⊗H) t for matrices in the row convention."""
    return np.einsum("abc,ad,be,cf->def", t, F, G, H)


def _op2(F, G, t):
    return np.einsum("ab,ac,bd->cd", t, F, G)


def _elt(fam, coeffs):
    """Operator of a linear combination Σ coeffs[m] e_m."""
    return np.einsum("m,mac->ac", coeffs, fam)


def _ca_terms(alg: Algebra, r):
    f = alg.field
    n = alg.dim
    F = _families(alg)
    s, o = alg.table("zinbiel"), alg.table("prelie")
    I = f.eye(n)
    S = s_obstruction(alg, r)
    D2 = d_obstruction(alg, r, "D2")
    rt = r - r.T
    # r ⊗ b_j with a_j = e_u, b_j = r[u][v] e_v
    tail = [[np.einsum("ab,c->abc", rt, r[u, v] * I[v]) for v in range(n)] for u in range(n)]
    mm = lambda X, Y: Y @ X    # X∘Y, apply Y first
    return f, n, F, s, o, I, S, D2, rt, tail, mm


def ca_obstructions(alg: Algebra, r, printed: bool = False) -> dict:
    """The four CA tensors at every basis input.

    With ``printed=True`` CA1 and CA2 keep their published signs; the
    default flips one summand in each (R∘(a_j)⊗L∗(x)⊗I in CA1 and
    (I⊗L∗(x)⊗I)S(r) in CA2), which makes each tensor equal to the residual
    of its partner equation for every r.

    ``CA1``/``CA2`` have shape ``(n, n, n, n)`` indexed by ``x`` then the
    three legs; ``CA3``/``CA4`` have shape ``(n, n, n, n)`` indexed by
    ``(x, y)`` then two legs.
    """
    r = _rmat(alg, r)
    f, n, F, s, o, I, S, D2, rt, tail, mm = _ca_terms(alg, r)
    ca1, ca2 = [], []
    for x in range(n):
        Lx, Lstx, Lox, adx = F["L"][x], F["Lst"][x], F["Lo"][x], F["ad"][x]
        t1 = _op3(I, Lx, I, S) - _op3(I, I, Lstx, S) + _op3(Lox, I, I, D2)
        sgn = 1 if printed else -1
        t2 = _op3(I, I, adx, D2) + _op3(Lx, I, I, S) + sgn * _op3(I, Lx, I, S)
        for u in range(n):
            x_s_a = s[x, u]              # x∗a_j as coefficients
            x_o_a = o[x, u]              # x∘a_j
            Ro_a, Lo_a, ad_a = F["Ro"][u], F["Lo"][u], F["ad"][u]
            L_a, Lst_a = F["L"][u], F["Lst"][u]
            for v in range(n):
                t = tail[u][v]
                t1 = t1 + _op3(I, Lo_a, Lstx, t) + _op3(ad_a, I, Lstx, t)
                t1 = t1 - _op3(_elt(F["ad"], x_s_a), I, I, t) - _op3(mm(Ro_a, Lstx), I, I, t)
                t1 = t1 - _op3(I, _elt(F["Lo"], x_s_a), I, t) - sgn * _op3(Ro_a, Lx, I, t)
                t2 = t2 + _op3(I, L_a, adx, t) - _op3(Lst_a, I, adx, t)
                t2 = t2 + _op3(mm(Ro_a, Lstx), I, I, t) - _op3(_elt(F["Lst"], x_o_a), I, I, t)
                # the printed R∘(a_i) in this summand is read as R∘(a_j)
                t2 = t2 + _op3(I, _elt(F["L"], x_o_a), I, t) - _op3(Ro_a, Lx, I, t)
        ca1.append(f.reduce(t1))
        ca2.append(f.reduce(t2))
    ca3, ca4 = [[None] * n for _ in range(n)], [[None] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            Lox, Loy, Lx, Ly = F["Lo"][x], F["Lo"][y], F["L"][x], F["L"][y]
            Lo_xsy = _elt(F["Lo"], s[x, y])
            L_xoy = _elt(F["L"], o[x, y])
            c4 = (_op2(I, Lo_xsy, rt) - _op2(I, mm(Lx, Loy), rt) + _op2(Lo_xsy, I, rt)
                  - _op2(mm(Lox, Ly), I, rt) + _op2(Lox, Ly, rt) - _op2(Loy, Lx, rt))
            inner = _op2(I, mm(Lox, Ly), rt) - _op2(I, L_xoy, rt)
            c3 = _op2(Lox, Ly, rt) - _op2(Ly, Lox, rt) + inner.T + inner
            ca3[x][y] = f.reduce(c3)
            ca4[x][y] = f.reduce(c4)
    return {"CA1": np.array(ca1), "CA2": np.array(ca2), "CA3": np.array(ca3), "CA4": np.array(ca4)}


CA_PARTNER = {"CA1": "Pc1.1", "CA2": "Pc1.2", "CA3": "ppba1.2", "CA4": "ppba1.3"}


def ca_residuals(alg: Algebra, r) -> dict:
    """lhs − rhs of the four equations the CA tensors are paired with,
    evaluated directly on the coboundary (Δ, δ); same shapes as
    :func:`ca_obstructions`, plus the two equations that hold for any r."""
    from . import bialgebras as bi
    D, d = coboundary_comultiplications(alg, r)
    f = alg.field
    out = {}
    for name, lhs, rhs in bi._compat_coalgebra(D, d):
        out[name] = f.reduce(lhs - rhs)
    for name, lhs, rhs in bi._prepoisson_bialgebra(alg, D, d):
        out[name] = f.reduce(lhs - rhs)
    return out


# ---------------------------------------------------------------------------
# search

_TARGETS = ("ppybe", "d", "s")


def _symbolic_r(n: int, p: int, symmetric: bool):
    if not symmetric:
        r, k = symbolic_array((n, n), 0, p)
        return r, k, [(i, j) for i in range(n) for j in range(n)]
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    flat, k = symbolic_array((len(cells),), 0, p)
    r = np.empty((n, n), dtype=object)
    for c, (i, j) in enumerate(cells):
        r[i, j] = r[j, i] = flat[c]
    return r, k, cells


def search_solutions(alg: Algebra, symmetric: bool = True, target: str = "ppybe",
                     exhaustive: bool = True, seed: int | None = None, samples: int = 0,
                     threads: int | None = None) -> list[np.ndarray]:
    """All r (or up to ``samples`` of them in seeded mode) with the chosen
    obstructions zero, in lexicographic order of their free entries.

    Exhaustive mode refuses boxes beyond ``BRUTE_LIMIT`` points; every
    returned r is re-checked numerically.
    """
    f = alg.field
    if f.kind != "fp":
        raise ValueError("solution search needs a finite field")
    if target not in _TARGETS:
        raise ValueError(f"unknown target {target!r}; expected one of {_TARGETS}")
    rep = check_identities(alg, IdentitySystem.PREPOISSON)
    if not rep.passed:
        raise ValueError("not a pre-Poisson algebra")
    n = alg.dim
    rs, k, cells = _symbolic_r(n, f.p, symmetric)
    if exhaustive:
        if f.p ** k > BRUTE_LIMIT:
            raise SearchBoundError(f"search space {f.p}^{k} exceeds {BRUTE_LIMIT}")
    elif not seed or samples <= 0:
        raise ValueError("randomized search needs a nonzero seed and a positive sample count")
    polys = []
    if target in ("ppybe", "d"):
        polys += residual_polys(d_obstruction(alg, rs))
    if target in ("ppybe", "s"):
        polys += residual_polys(s_obstruction(alg, rs))
    system = ConstraintSystem(k, polys, f.p)
    rows = solve(system, threads=threads) if exhaustive else \
        solve(system, seed=seed, limit=samples, threads=threads)
    out = []
    for row in rows:
        r = np.zeros((n, n), dtype=np.int64)
        for c, (i, j) in enumerate(cells):
            r[i, j] = row[c]
            if symmetric:
                r[j, i] = row[c]
        v = check_ppybe(alg, r)
        ok = {"ppybe": v.ppybe, "d": v.d_zero, "s": v.s_zero}[target]
        if not ok or (symmetric and not v.symmetric):
            raise AssertionError(f"search returned a non-solution {r.tolist()}")
        out.append(r)
    return out
