"""Representations of Zinbiel, pre-Lie, Poisson and pre-Poisson algebras.

Action maps are stored as endomorphism families ``F[i]`` (one matrix per
basis vector of the base algebra) in the row convention: ``F[i][j][k]`` is
the coefficient of ``v_k`` in ``F(e_i) v_j``.  With this convention a family
is literally the bilinear table of ``(x, v) -> F(x) v``, and the operator
product ``F(x) G(y)`` has matrix ``G[y] @ F[x]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from typing import Mapping

import numpy as np

from .algebras import Algebra, CheckReport, check_identity_list, sub_adjacent
from .expr import Var, identity, op
from .fields import dualize_endo_family

__all__ = [
    "RepKind",
    "Representation",
    "MAP_NAMES",
    "rep_identities",
    "check_representation",
    "dual_representation",
    "regular_representation",
    "induced_poisson_reps",
]


class RepKind(enum.Enum):
    ZINBIEL = "zinbiel"
    PRELIE = "prelie"
    POISSON = "poisson"
    PREPOISSON = "prepoisson"

    @classmethod
    def parse(cls, s) -> "RepKind":
        if isinstance(s, RepKind):
            return s
        return cls(str(s).strip().lower().replace("-", ""))


MAP_NAMES = {
    RepKind.ZINBIEL: ("l", "r"),
    RepKind.PRELIE: ("rho", "mu"),
    RepKind.POISSON: ("f", "g"),
    RepKind.PREPOISSON: ("l", "r", "rho", "mu"),
}

BASE_TABLES = {
    RepKind.ZINBIEL: ("zinbiel",),
    RepKind.PRELIE: ("prelie",),
    RepKind.POISSON: ("commassoc", "lie"),
    RepKind.PREPOISSON: ("zinbiel", "prelie"),
}


@dataclass(frozen=True)
class Representation:
    kind: RepKind
    base: Algebra
    repdim: int
    maps: Mapping[str, np.ndarray] = dc_field(default_factory=dict)

    def __post_init__(self):
        kind = RepKind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        n, m = self.base.dim, self.repdim
        f = self.base.field
        clean = {}
        for name in MAP_NAMES[kind]:
            if name not in self.maps:
                raise ValueError(f"{kind.value} representation needs map {name!r}")
            F = np.asarray(self.maps[name])
            if F.shape != (n, m, m):
                raise ValueError(f"map {name!r} has shape {F.shape}, expected {(n, m, m)}")
            clean[name] = f.reduce(F) if (F.dtype == object or f.p) else f.array(F.tolist())
        extra = set(self.maps) - set(MAP_NAMES[kind])
        if extra:
            raise ValueError(f"unexpected maps for {kind.value}: {sorted(extra)}")
        object.__setattr__(self, "maps", clean)

    @property
    def field(self):
        return self.base.field

    def map(self, name: str) -> np.ndarray:
        return self.maps[name]


def _zinbiel_rep(l, r, s, x, y, v, prefix="zrep"):
    return [
        identity(f"{prefix}_ll", l(x, l(y, v)), l(s(x, y), v) + l(s(y, x), v)),
        identity(f"{prefix}_ll_sym", l(s(x, y), v) + l(s(y, x), v), l(y, l(x, v))),
        identity(f"{prefix}_lr", l(x, r(y, v)), r(y, r(x, v)) + r(y, l(x, v))),
        identity(f"{prefix}_rr", r(s(x, y), v), r(y, r(x, v)) + r(y, l(x, v))),
    ]


def _prelie_rep(rho, mu, o, x, y, v, prefix="prep"):
    return [
        identity(f"{prefix}_rhorho", rho(x, rho(y, v)) - rho(o(x, y), v),
                 rho(y, rho(x, v)) - rho(o(y, x), v)),
        identity(f"{prefix}_rhomu", rho(x, mu(y, v)) - mu(y, rho(x, v)),
                 mu(o(x, y), v) - mu(y, mu(x, v))),
    ]


def rep_identities(kind: RepKind | str) -> list:
    kind = RepKind.parse(kind)
    x, y, v = Var("x", "A"), Var("y", "A"), Var("v", "V")
    s, o = op("zinbiel"), op("prelie")
    st, br = op("commassoc"), op("lie")
    if kind is RepKind.ZINBIEL:
        return _zinbiel_rep(op("l"), op("r"), s, x, y, v)
    if kind is RepKind.PRELIE:
        return _prelie_rep(op("rho"), op("mu"), o, x, y, v)
    if kind is RepKind.POISSON:
        f, g = op("f"), op("g")
        return [
            identity("poisson_f_hom", f(st(x, y), v), f(x, f(y, v))),
            identity("poisson_g_lie", g(br(x, y), v), g(x, g(y, v)) - g(y, g(x, v))),
            identity("poisson_g_star", g(st(x, y), v), f(y, g(x, v)) + f(x, g(y, v))),
            identity("poisson_f_bracket", f(br(x, y), v), g(x, f(y, v)) - f(y, g(x, v))),
        ]
    l, r, rho, mu = op("l"), op("r"), op("rho"), op("mu")
    return (
        _zinbiel_rep(l, r, s, x, y, v)
        + _prelie_rep(rho, mu, o, x, y, v)
        + [
            identity("mixed_l_bracket", l(o(x, y) - o(y, x), v), rho(x, l(y, v)) - l(y, rho(x, v))),
            identity("mixed_rho_star", rho(s(x, y) + s(y, x), v), l(x, rho(y, v)) + l(y, rho(x, v))),
            identity("mixed_r_mu", r(x, rho(y, v) - mu(y, v)), l(y, mu(x, v)) - mu(s(y, x), v)),
            identity("mixed_mu_star", mu(x, l(y, v) + r(y, v)), r(o(y, x), v) + l(y, mu(x, v))),
            identity("mixed_r_rho", r(x, rho(y, v) - mu(y, v)), rho(y, r(x, v)) - r(o(y, x), v)),
            identity("derived_rho_star", rho(s(x, y) + s(y, x), v), rho(y, l(x, v)) + rho(x, l(y, v)),
                     derived=True),
            identity("derived_r_mu", r(o(y, x), v) - mu(s(y, x), v), rho(y, r(x, v)) - l(y, mu(x, v)),
                     derived=True),
        ]
    )


def check_representation(rep: Representation) -> CheckReport:
    """Check every representation identity on all basis pairs of the base."""
    env = {name: rep.base.table(name) for name in BASE_TABLES[rep.kind]}
    env.update(rep.maps)
    return check_identity_list(rep_identities(rep.kind), env,
                               {"A": rep.base.dim, "V": rep.repdim}, rep.field)


def dual_representation(rep: Representation) -> Representation:
    """Dual representation on V* (maps realized by negated transposes)."""
    f = rep.field
    d = {k: dualize_endo_family(f, F) for k, F in rep.maps.items()}
    if rep.kind is RepKind.ZINBIEL:
        maps = {"l": f.reduce(-d["l"] - d["r"]), "r": d["r"]}
    elif rep.kind is RepKind.PRELIE:
        maps = {"rho": f.reduce(d["rho"] - d["mu"]), "mu": f.reduce(-d["mu"])}
    elif rep.kind is RepKind.POISSON:
        maps = {"f": f.reduce(-d["f"]), "g": d["g"]}
    else:
        maps = {"l": f.reduce(-d["l"] - d["r"]), "r": d["r"],
                "rho": f.reduce(d["rho"] - d["mu"]), "mu": f.reduce(-d["mu"])}
    return Representation(rep.kind, rep.base, rep.repdim, maps)


def left_mult(t: np.ndarray) -> np.ndarray:
    """L(e_i)_{jk} = t[i][j][k]."""
    return np.array(t, copy=True)


def right_mult(t: np.ndarray) -> np.ndarray:
    """R(e_i)_{jk} = t[j][i][k]."""
    return np.transpose(t, (1, 0, 2)).copy()


def regular_representation(alg: Algebra, kind: RepKind | str = RepKind.PREPOISSON) -> Representation:
    kind = RepKind.parse(kind)
    maps = {}
    if kind in (RepKind.ZINBIEL, RepKind.PREPOISSON):
        t = alg.table("zinbiel")
        maps.update(l=left_mult(t), r=right_mult(t))
    if kind in (RepKind.PRELIE, RepKind.PREPOISSON):
        t = alg.table("prelie")
        maps.update(rho=left_mult(t), mu=right_mult(t))
    if kind is RepKind.POISSON:
        maps.update(f=left_mult(alg.table("commassoc")), g=left_mult(alg.table("lie")))
    return Representation(kind, alg, alg.dim, maps)


def induced_poisson_reps(rep: Representation) -> tuple[Representation, Representation]:
    """(l+r, ρ−μ) and (l, ρ) as representations of the sub-adjacent Poisson algebra."""
    if rep.kind is not RepKind.PREPOISSON:
        raise ValueError("induced Poisson representations need a pre-Poisson representation")
    f = rep.field
    base = sub_adjacent(rep.base)
    m = rep.maps
    first = Representation(RepKind.POISSON, base, rep.repdim,
                           {"f": f.reduce(m["l"] + m["r"]), "g": f.reduce(m["rho"] - m["mu"])})
    second = Representation(RepKind.POISSON, base, rep.repdim,
                            {"f": m["l"].copy(), "g": m["rho"].copy()})
    return first, second


def direct_sum(r1: Representation, r2: Representation) -> Representation:
    """Block-diagonal sum of two representations of the same base."""
    if r1.kind is not r2.kind or r1.base.dim != r2.base.dim:
        raise ValueError("direct sum needs representations of the same kind and base")
    f = r1.field
    n, m1, m2 = r1.base.dim, r1.repdim, r2.repdim
    maps = {}
    for name in MAP_NAMES[r1.kind]:
        F = f.zeros((n, m1 + m2, m1 + m2))
        F[:, :m1, :m1] = r1.maps[name]
        F[:, m1:, m1:] = r2.maps[name]
        maps[name] = F
    return Representation(r1.kind, r1.base, m1 + m2, maps)
