"""Comultiplications, co-identities and bialgebra compatibilities.

A comultiplication is an ``(n, n, n)`` array ``d`` with
``Δ(e_i) = Σ d[i][j][k] e_j ⊗ e_k``.  All conditions are evaluated on
stacked arrays: a map of one basis input becomes ``[x, j, k]``, of two
inputs ``[x, y, j, k]``, so each check is one array comparison.

Operator families (``L∗``, ``R∘``, ``ad`` ...) are ``(n, n, n)`` arrays in
the row convention used throughout the package: ``F[x][a][c]`` is the
coefficient of ``e_c`` in ``F(e_x) e_a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebras import (Algebra, CheckReport, IdentitySystem, Witness, WITNESS_CAP,
                       check_identities, form_compatibility_report, sub_adjacent)
from .fields import FieldDescriptor
from .products import ComponentError, MatchedPair, build_bicrossed, verify_matched_pair
from .representations import dual_representation, regular_representation

__all__ = [
    "BialgebraData",
    "dualize_comultiplication",
    "dual_algebra",
    "check_coalgebra",
    "check_bialgebra",
    "double_construction",
    "double_matched_pair",
    "poisson_double_matched_pair",
    "check_equivalent_characterizations",
    "Characterizations",
]


@dataclass(frozen=True)
class BialgebraData:
    algebra: Algebra
    delta_zinbiel: np.ndarray      # Δ
    delta_prelie: np.ndarray       # δ

    def __post_init__(self):
        n, f = self.algebra.dim, self.algebra.field
        for name in ("delta_zinbiel", "delta_prelie"):
            arr = np.asarray(getattr(self, name))
            if arr.shape != (n, n, n):
                raise ValueError(f"{name} has shape {arr.shape}, expected {(n, n, n)}")
            object.__setattr__(self, name, f.reduce(arr) if (arr.dtype == object or f.p)
                               else f.array(arr.tolist()))

    @property
    def field(self) -> FieldDescriptor:
        return self.algebra.field


def dualize_comultiplication(d) -> np.ndarray:
    """Table of the product Δ* on A*: ``c[j][k][i] = d[i][j][k]``."""
    return np.transpose(np.asarray(d), (1, 2, 0)).copy()


def dual_algebra(data: BialgebraData) -> Algebra:
    f = data.field
    return Algebra(data.algebra.dim, f, {"zinbiel": dualize_comultiplication(data.delta_zinbiel),
                                         "prelie": dualize_comultiplication(data.delta_prelie)})


# ---------------------------------------------------------------------------
# tensor plumbing

def _flip(t):
    """τ on the last two legs."""
    return np.swapaxes(t, -1, -2)


def _left(F, t):
    """(F(x) ⊗ I) t(y) as ``[x, y, c, k]``."""
    return np.einsum("xac,yak->xyck", F, t)


def _right(F, t):
    """(I ⊗ F(x)) t(y) as ``[x, y, j, c]``."""
    return np.einsum("xac,yja->xyjc", F, t)


def _swapxy(t):
    return np.swapaxes(t, 0, 1)


def _of(T, d):
    """d(x·y) as ``[x, y, j, k]``."""
    return np.einsum("xyc,cjk->xyjk", T, d)


def _compose(F, G):
    """Family x ↦ F(x)∘G(x) (apply G first)."""
    return np.einsum("xab,xbc->xac", G, F)


def _ops(A: Algebra):
    s, o = A.table("zinbiel"), A.table("prelie")
    L = s.copy()
    R = np.transpose(s, (1, 0, 2)).copy()
    Lo = o.copy()
    Ro = np.transpose(o, (1, 0, 2)).copy()
    return {"s": s, "o": o, "L": L, "R": R, "Lst": L + R, "Lo": Lo, "Ro": Ro, "ad": Lo - Ro,
            "star": s + np.transpose(s, (1, 0, 2)), "br": o - np.transpose(o, (1, 0, 2))}


def _report(field: FieldDescriptor, items, inputs: int, group: str | None = None) -> CheckReport:
    """``items``: (name, lhs, rhs) with the first ``inputs`` axes indexing basis inputs."""
    witnesses, failed, count = [], [], 0
    for name, lhs, rhs in items:
        res = field.reduce(np.asarray(lhs - rhs))
        hits = sorted({idx[:inputs] for idx, v in np.ndenumerate(res) if v != 0})
        if not hits:
            continue
        failed.append(name)
        count += len(hits)
        for h in hits:
            witnesses.append(Witness(name, tuple(i + 1 for i in h),
                                     tuple(np.asarray(res[h]).reshape(-1).tolist())))
    witnesses.sort(key=lambda w: (w.indices, w.identity))
    return CheckReport(not failed, witnesses[:WITNESS_CAP], count, failed)


# ---------------------------------------------------------------------------
# coalgebras

def _zinbiel_coalgebra(D):
    DD = np.einsum("ijk,jab->iabk", D, D)          # (Δ⊗I)Δ
    ID = np.einsum("ija,abc->ijbc", D, D)          # (I⊗Δ)Δ
    return [("zca", DD + np.swapaxes(DD, 1, 2), ID)]


def _prelie_coalgebra(d):
    X = np.einsum("ijk,jab->iabk", d, d) - np.einsum("ija,abc->ijbc", d, d)
    return [("pca", X, np.swapaxes(X, 1, 2))]


def _compat_coalgebra(D, d):
    ID_d = np.einsum("ija,abc->ijbc", d, D)        # (I⊗Δ)δ
    Id_D = np.einsum("ija,abc->ijbc", D, d)        # (I⊗δ)Δ
    return [
        ("Pc1.1", np.einsum("ijk,jab->iabk", D, d - _flip(d)), ID_d - np.swapaxes(Id_D, 1, 2)),
        ("Pc1.2", np.einsum("ijk,jab->iabk", d, D + _flip(D)), Id_D + np.swapaxes(Id_D, 1, 2)),
    ]


def check_coalgebra(kind: str, delta=None, delta_prelie=None, field: FieldDescriptor | None = None
                    ) -> CheckReport:
    """Co-identities of ``kind`` in {zinbiel, prelie, prepoisson}.

    ``delta`` is Δ (or δ for the pre-Lie kind); the pre-Poisson kind takes
    both.
    """
    if field is None:
        raise ValueError("check_coalgebra needs the field")
    if kind == "zinbiel":
        if delta is None:
            raise ValueError("missing Δ")
        return _report(field, _zinbiel_coalgebra(np.asarray(delta)), 1)
    if kind == "prelie":
        d = delta if delta is not None else delta_prelie
        if d is None:
            raise ValueError("missing δ")
        return _report(field, _prelie_coalgebra(np.asarray(d)), 1)
    if kind == "prepoisson":
        if delta is None or delta_prelie is None:
            raise ValueError("the pre-Poisson coalgebra check needs both Δ and δ")
        D, d = np.asarray(delta), np.asarray(delta_prelie)
        return CheckReport.merge({
            "zinbiel_coalgebra": _report(field, _zinbiel_coalgebra(D), 1),
            "prelie_coalgebra": _report(field, _prelie_coalgebra(d), 1),
            "compatibility": _report(field, _compat_coalgebra(D, d), 1),
        })
    raise ValueError(f"unknown coalgebra kind {kind!r}")


# ---------------------------------------------------------------------------
# bialgebras

def _zinbiel_bialgebra(A, D):
    m = _ops(A)
    DyZ = _of(m["s"], D)
    first = DyZ + _flip(DyZ)
    mid = _right(m["L"], D) + _flip(_left(m["L"], D))
    last = _swapxy(_right(m["R"], D)) + _left(m["L"], D) + _flip(_right(m["L"], D))
    return [
        ("zba1.1a", first, mid),
        ("zba1.1b", mid, last),
        ("zba1.2", _of(m["star"], D), _left(m["L"], D) + _swapxy(_right(m["Lst"], D))),
    ]


def _prelie_bialgebra(A, d):
    m = _ops(A)
    Lo_d, ad_d = _left(m["Lo"], d), _right(m["ad"], d)
    inner = _swapxy(_right(m["Ro"], d)) + _left(m["Lo"], d) + _right(m["Lo"], d)
    dxy = _of(m["o"], d)
    return [
        ("pba1", _of(m["br"], d), Lo_d + ad_d - _swapxy(Lo_d) - _swapxy(ad_d)),
        ("pba2", dxy - _flip(dxy), inner - _flip(inner)),
    ]


def _prepoisson_bialgebra(A, D, d, printed=False):
    m = _ops(A)
    Lo_D = _left(m["Lo"], D)
    I_Lst_d = _right(m["Lst"], d)
    dxy = _of(m["s"], d)
    Dxy = _of(m["o"], D)
    IRs_d = _swapxy(_right(m["R"], d))
    return [
        # the printed form has the Δ-terms and δ-terms with equal signs;
        # the dual of the bracket-on-product matched-pair identity negates one side
        ("ppba1.4", _of(m["star"], d),
         (Lo_D + _swapxy(Lo_D) - I_Lst_d - _swapxy(I_Lst_d)) if printed
         else (I_Lst_d + _swapxy(I_Lst_d) - Lo_D - _swapxy(Lo_D))),
        ("ppba1.1", _of(m["br"], D),
         Lo_D - _swapxy(I_Lst_d) + _swapxy(_left(m["L"], d)) + _right(m["ad"], D)),
        ("ppba1.3", dxy - _flip(dxy),
         _right(m["L"], d) - _flip(_left(m["L"], d)) - Lo_D - _flip(_right(m["Lo"], D))
         + IRs_d + _flip(_swapxy(_right(m["Ro"], D)))),
        ("ppba1.2", Dxy + _flip(Dxy),
         Lo_D + _flip(Lo_D) + _right(m["Lo"], D) + _flip(_right(m["Lo"], D))
         - IRs_d - _flip(IRs_d)),
    ]


def check_bialgebra(kind: str, data: BialgebraData, printed: bool = False) -> CheckReport:
    """Bialgebra verdict with one group per condition family.

    The pre-Poisson kind requires the algebra axioms, the three co-checks,
    the Zinbiel and pre-Lie bialgebra conditions and the four mixed ones.
    ``printed=True`` evaluates ppba1.4 with its published sign pattern,
    which is not equivalent to the other characterizations.
    """
    A, f = data.algebra, data.field
    D, d = data.delta_zinbiel, data.delta_prelie
    groups = {}
    if kind == "zinbiel":
        groups["algebra"] = check_identities(A, IdentitySystem.ZINBIEL)
        groups["coalgebra"] = check_coalgebra("zinbiel", D, field=f)
        groups["compatibility"] = _report(f, _zinbiel_bialgebra(A, D), 2)
    elif kind == "prelie":
        groups["algebra"] = check_identities(A, IdentitySystem.PRELIE)
        groups["coalgebra"] = check_coalgebra("prelie", d, field=f)
        groups["compatibility"] = _report(f, _prelie_bialgebra(A, d), 2)
    elif kind == "prepoisson":
        groups["algebra"] = check_identities(A, IdentitySystem.PREPOISSON)
        groups["coalgebra"] = check_coalgebra("prepoisson", D, d, field=f)
        groups["zinbiel_bialgebra"] = _report(f, _zinbiel_bialgebra(A, D), 2)
        groups["prelie_bialgebra"] = _report(f, _prelie_bialgebra(A, d), 2)
        groups["mixed"] = _report(f, _prepoisson_bialgebra(A, D, d, printed), 2)
    else:
        raise ValueError(f"unknown bialgebra kind {kind!r}")
    return CheckReport.merge(groups)


# ---------------------------------------------------------------------------
# the double A ⊕ A*

def _require_dual(data: BialgebraData) -> Algebra:
    B = dual_algebra(data)
    rep = check_identities(B, IdentitySystem.PREPOISSON)
    if not rep.passed:
        raise ComponentError("Δ*, δ* do not make A* a pre-Poisson algebra: "
                             + ", ".join(rep.failed_identities))
    return B


def double_matched_pair(data: BialgebraData) -> MatchedPair:
    """(A, A*) with the dual regular representations on both sides."""
    A = data.algebra
    B = _require_dual(data)
    d1 = dual_representation(regular_representation(A)).maps
    d2 = dual_representation(regular_representation(B)).maps
    maps = {f"{k}1": v for k, v in d1.items()}
    maps.update({f"{k}2": v for k, v in d2.items()})
    return MatchedPair("prepoisson", A, B, maps)


def poisson_double_matched_pair(data: BialgebraData) -> MatchedPair:
    """(A, A*, −L∗₁*, L∘₁*, −L∗₂*, L∘₂*) read as ``(mu1, rho1, mu2, rho2)``."""
    A, f = data.algebra, data.field
    B = _require_dual(data)
    neg_t = lambda F: f.reduce(-np.transpose(F, (0, 2, 1)))   # F ↦ F*
    m = {"mu1": f.reduce(-neg_t(A.table("zinbiel"))), "rho1": neg_t(A.table("prelie")),
         "mu2": f.reduce(-neg_t(B.table("zinbiel"))), "rho2": neg_t(B.table("prelie"))}
    return MatchedPair("poisson", sub_adjacent(A), sub_adjacent(B), m)


def _omega(f: FieldDescriptor, n: int) -> np.ndarray:
    """ω(x + a, y + b) = <x, b> − <a, y> in the basis (e_i, e^i)."""
    w = f.zeros((2 * n, 2 * n))
    one = f.scalar(1)
    for i in range(n):
        w[i, n + i] = one
        w[n + i, i] = f.reduce(-one)
    return w


def _subalgebra_blocks(C: Algebra, n: int) -> bool:
    ok = True
    for name in ("zinbiel", "prelie"):
        T = C.table(name)
        ok &= C.field.is_zero(T[:n, :n, n:]) and C.field.is_zero(T[n:, n:, :n])
    return bool(ok)


def double_construction(data: BialgebraData, require_bialgebra: bool = True):
    """(A ⋈ A*, ω) together with the quadratic-structure report."""
    if require_bialgebra:
        rep = check_bialgebra("prepoisson", data)
        if not rep.passed:
            raise ValueError("input fails the pre-Poisson bialgebra check: "
                             + ", ".join(rep.failed_identities))
    C = build_bicrossed(double_matched_pair(data))
    w = _omega(data.field, data.algebra.dim)
    return C, w


def _quadratic_report(C: Algebra, w, n: int) -> CheckReport:
    rep = CheckReport.merge({
        "prepoisson": check_identities(C, IdentitySystem.PREPOISSON),
        "form": form_compatibility_report(C, w),
    })
    if not _subalgebra_blocks(C, n):
        rep.passed = False
        rep.groups["subalgebras"] = False
        rep.failed_identities.append("subalgebras")
    return rep


@dataclass
class Characterizations:
    quadratic_double: bool
    poisson_matched_pair: bool
    prepoisson_matched_pair: bool
    bialgebra: bool
    dual_is_prepoisson: bool

    @property
    def agreement(self) -> bool:
        v = (self.quadratic_double, self.poisson_matched_pair,
             self.prepoisson_matched_pair, self.bialgebra)
        return all(v) or not any(v)

    def as_tuple(self):
        return (self.quadratic_double, self.poisson_matched_pair,
                self.prepoisson_matched_pair, self.bialgebra)

    def to_json(self) -> dict:
        return {"quadratic_double": self.quadratic_double,
                "poisson_matched_pair": self.poisson_matched_pair,
                "prepoisson_matched_pair": self.prepoisson_matched_pair,
                "bialgebra": self.bialgebra, "dual_is_prepoisson": self.dual_is_prepoisson,
                "agreement": self.agreement}


def check_equivalent_characterizations(data: BialgebraData) -> Characterizations:
    """Four independent evaluations of the equivalence theorem.

    (1) axioms and form identities on the double; (2) the itemized Poisson
    matched-pair list; (3) the itemized pre-Poisson matched-pair list;
    (4) the bialgebra tensor conditions on Δ, δ themselves.  When A* is
    not pre-Poisson the first three have nothing to evaluate and are false.
    """
    A = data.algebra
    if not check_identities(A, IdentitySystem.PREPOISSON).passed:
        raise ValueError("A is not a pre-Poisson algebra")
    bialg = check_bialgebra("prepoisson", data).passed
    try:
        mp = double_matched_pair(data)
    except ComponentError:
        return Characterizations(False, False, False, bialg, False)
    C = build_bicrossed(mp)
    quad = _quadratic_report(C, _omega(data.field, A.dim), A.dim).passed
    pmp = verify_matched_pair(poisson_double_matched_pair(data), "itemized").passed
    ppmp = verify_matched_pair(mp, "itemized").passed
    return Characterizations(quad, pmp, ppmp, bialg, True)
