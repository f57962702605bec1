"""Algebra containers, the identity registry, and bilinear-form tools."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping

import numpy as np

from .expr import Identity, Var, identity, nonzero_indices, op, residual
from .fields import FieldDescriptor, determinant, solve_linear

__all__ = [
    "Algebra",
    "IdentitySystem",
    "CheckReport",
    "Witness",
    "MissingTable",
    "FormError",
    "check_identities",
    "check_identity_list",
    "identities_for",
    "sub_adjacent",
    "zinbiel_to_dendriform",
    "validate_form",
    "check_connes_cocycle",
    "check_symplectic",
    "compatible_from_form",
    "TABLE_NAMES",
]

TABLE_NAMES = ("zinbiel", "prelie", "dendriform_succ", "dendriform_prec", "commassoc", "lie")
WITNESS_CAP = 16


class MissingTable(KeyError):
    pass


class FormError(ValueError):
    pass


@dataclass(frozen=True)
class Algebra:
    dim: int
    field: FieldDescriptor
    tables: Mapping[str, np.ndarray] = dc_field(default_factory=dict)

    def __post_init__(self):
        n = self.dim
        clean = {}
        for name, t in self.tables.items():
            t = np.asarray(t)
            if t.shape != (n, n, n):
                raise ValueError(f"table {name!r} has shape {t.shape}, expected {(n, n, n)}")
            clean[name] = self.field.reduce(t if t.dtype == object or self.field.p else
                                            self.field.array(t.tolist()))
        object.__setattr__(self, "tables", clean)

    def table(self, name: str) -> np.ndarray:
        try:
            return self.tables[name]
        except KeyError:
            raise MissingTable(f"algebra has no {name!r} table") from None

    def with_tables(self, **tables) -> "Algebra":
        merged = dict(self.tables)
        merged.update(tables)
        return Algebra(self.dim, self.field, merged)

    def scaled(self, lam) -> "Algebra":
        lam = self.field.scalar(lam)
        return Algebra(self.dim, self.field,
                       {k: self.field.reduce(v * lam) for k, v in self.tables.items()})

    def equal(self, other: "Algebra", names: Iterable[str] | None = None) -> bool:
        names = list(names) if names is not None else sorted(set(self.tables) | set(other.tables))
        if self.dim != other.dim:
            return False
        return all(self.field.equal(self.table(k), other.table(k)) for k in names)

    @classmethod
    def zero(cls, dim: int, field: FieldDescriptor, names=("zinbiel", "prelie")) -> "Algebra":
        return cls(dim, field, {k: field.zeros((dim, dim, dim)) for k in names})


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class Witness:
    identity: str
    indices: tuple          # 1-based basis indices
    residual: tuple         # output coefficients

    def to_json(self, field: FieldDescriptor) -> dict:
        return {"identity": self.identity, "indices": list(self.indices),
                "residual": [field.format_scalar(v) for v in self.residual]}


@dataclass
class CheckReport:
    passed: bool
    witnesses: list = dc_field(default_factory=list)
    failures: int = 0
    failed_identities: list = dc_field(default_factory=list)
    derived_failures: list = dc_field(default_factory=list)
    groups: dict = dc_field(default_factory=dict)
    warnings: list = dc_field(default_factory=list)
    notes: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def to_json(self, field: FieldDescriptor) -> dict:
        out = {
            "passed": self.passed,
            "failures": self.failures,
            "failed_identities": list(self.failed_identities),
            "witnesses": [w.to_json(field) for w in self.witnesses],
        }
        if self.derived_failures:
            out["derived_failures"] = list(self.derived_failures)
        if self.groups:
            out["groups"] = {k: v for k, v in sorted(self.groups.items())}
        if self.warnings:
            out["warnings"] = list(self.warnings)
        if self.notes:
            out["notes"] = self.notes
        return out

    @staticmethod
    def merge(reports: Mapping[str, "CheckReport"], extra_warnings=()) -> "CheckReport":
        """Combine group reports; the result passes iff every group passes."""
        wit, failed, derived, warns = [], [], [], list(extra_warnings)
        count = 0
        groups = {}
        for name, r in reports.items():
            groups[name] = r.passed
            wit.extend(r.witnesses)
            failed.extend(r.failed_identities)
            derived.extend(r.derived_failures)
            warns.extend(r.warnings)
            count += r.failures
        wit.sort(key=lambda w: (w.indices, w.identity))
        return CheckReport(all(groups.values()), wit[:WITNESS_CAP], count, failed, derived,
                           groups, warns)


def check_identity_list(idents: Iterable[Identity], env, dims, field: FieldDescriptor,
                        offset: int = 1) -> CheckReport:
    """Evaluate identities; primary failures become witnesses, derived ones are listed."""
    witnesses: list[Witness] = []
    failed: list[str] = []
    derived: list[str] = []
    count = 0
    for ident in idents:
        res = residual(ident, env, dims, field)
        hits = nonzero_indices(field, res)
        if not hits:
            continue
        if ident.derived:
            derived.append(ident.name)
            continue
        failed.append(ident.name)
        count += len(hits)
        for h in hits:
            witnesses.append(Witness(ident.name, tuple(i + offset for i in h),
                                     tuple(res[h].tolist())))
    witnesses.sort(key=lambda w: (w.indices, w.identity))
    return CheckReport(not failed, witnesses[:WITNESS_CAP], count, failed, derived)


# ---------------------------------------------------------------------------
# identity registry

class IdentitySystem(enum.Enum):
    ZINBIEL = "zinbiel"
    DENDRIFORM = "dendriform"
    PRELIE = "prelie"
    COMM_ASSOC = "commassoc"
    LIE = "lie"
    LEIBNIZ_RULE = "leibniz"
    PREPOISSON_COMPAT = "prepoisson_compat"
    PREPOISSON = "prepoisson"
    POISSON = "poisson"

    @classmethod
    def parse(cls, s: str) -> "IdentitySystem":
        key = s.strip().lower().replace("-", "_")
        for m in cls:
            if m.value == key or m.name.lower() == key:
                return m
        raise ValueError(f"unknown identity system {s!r}")


COMPOSITES = {
    IdentitySystem.PREPOISSON: (IdentitySystem.ZINBIEL, IdentitySystem.PRELIE,
                                IdentitySystem.PREPOISSON_COMPAT),
    IdentitySystem.POISSON: (IdentitySystem.COMM_ASSOC, IdentitySystem.LIE,
                             IdentitySystem.LEIBNIZ_RULE),
}

REQUIRED = {
    IdentitySystem.ZINBIEL: ("zinbiel",),
    IdentitySystem.DENDRIFORM: ("dendriform_succ", "dendriform_prec"),
    IdentitySystem.PRELIE: ("prelie",),
    IdentitySystem.COMM_ASSOC: ("commassoc",),
    IdentitySystem.LIE: ("lie",),
    IdentitySystem.LEIBNIZ_RULE: ("commassoc", "lie"),
    IdentitySystem.PREPOISSON_COMPAT: ("zinbiel", "prelie"),
}


def _build_registry() -> dict:
    x, y, z = Var("x", "A"), Var("y", "A"), Var("z", "A")
    s, o = op("zinbiel"), op("prelie")
    up, down = op("dendriform_succ"), op("dendriform_prec")
    st, br = op("commassoc"), op("lie")
    reg = {
        IdentitySystem.ZINBIEL: [
            identity("zinbiel", s(x, s(y, z)), s(s(y, x), z) + s(s(x, y), z)),
        ],
        IdentitySystem.DENDRIFORM: [
            identity("dendriform_prec_prec", down(down(x, y), z), down(x, down(y, z) + up(y, z))),
            identity("dendriform_middle", down(up(x, y), z), up(x, down(y, z))),
            identity("dendriform_succ_succ", up(x, up(y, z)), up(down(x, y) + up(x, y), z)),
        ],
        IdentitySystem.PRELIE: [
            identity("prelie", o(o(x, y), z) - o(x, o(y, z)), o(o(y, x), z) - o(y, o(x, z))),
        ],
        IdentitySystem.COMM_ASSOC: [
            identity("commutative", st(x, y), st(y, x)),
            identity("associative", st(st(x, y), z), st(x, st(y, z))),
        ],
        IdentitySystem.LIE: [
            identity("antisymmetric", br(x, y), -br(y, x)),
            identity("jacobi", br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y)), 0 * br(x, br(y, z))),
        ],
        IdentitySystem.LEIBNIZ_RULE: [
            identity("leibniz", br(z, st(x, y)), st(br(z, x), y) + st(x, br(z, y)),
                     varorder=("x", "y", "z")),
        ],
        IdentitySystem.PREPOISSON_COMPAT: [
            identity("compat_bracket_star", s(o(x, y) - o(y, x), z), o(x, s(y, z)) - s(y, o(x, z))),
            identity("compat_star_circ", o(s(x, y) + s(y, x), z), s(x, o(y, z)) + s(y, o(x, z))),
        ],
    }
    return reg


_REGISTRY = _build_registry()


def identities_for(sys: IdentitySystem) -> list[Identity]:
    if sys in COMPOSITES:
        out: list[Identity] = []
        for part in COMPOSITES[sys]:
            out.extend(_REGISTRY[part])
        return out
    return list(_REGISTRY[sys])


def _alternating_report(alg: Algebra) -> CheckReport:
    # [x, x] = 0 is not multilinear; check the diagonal directly (matters in char 2)
    t = alg.table("lie")
    wit = []
    for i in range(alg.dim):
        if not alg.field.is_zero(t[i, i]):
            wit.append(Witness("alternating", (i + 1, i + 1), tuple(t[i, i].tolist())))
    return CheckReport(not wit, wit, len(wit), ["alternating"] if wit else [])


def check_identities(alg: Algebra, sys: IdentitySystem | str) -> CheckReport:
    """Check an identity system on all basis tuples of ``alg``."""
    if isinstance(sys, str):
        sys = IdentitySystem.parse(sys)
    parts = COMPOSITES.get(sys, (sys,))
    reports = {}
    for part in parts:
        for name in REQUIRED[part]:
            alg.table(name)
        rep = check_identity_list(_REGISTRY[part], alg.tables, {"A": alg.dim}, alg.field)
        if part is IdentitySystem.LIE:
            rep = CheckReport.merge({"lie": rep, "alt": _alternating_report(alg)})
            rep.groups = {}
        reports[part.value] = rep
    if len(reports) == 1:
        return next(iter(reports.values()))
    return CheckReport.merge(reports)


# ---------------------------------------------------------------------------
# sub-adjacent constructions

def symmetrize(field: FieldDescriptor, t: np.ndarray) -> np.ndarray:
    return field.reduce(t + np.transpose(t, (1, 0, 2)))


def antisymmetrize(field: FieldDescriptor, t: np.ndarray) -> np.ndarray:
    return field.reduce(t - np.transpose(t, (1, 0, 2)))


def sub_adjacent(alg: Algebra) -> Algebra:
    """x⋆y = x∗y + y∗x and [x, y] = x∘y − y∘x."""
    f = alg.field
    return Algebra(alg.dim, f, {"commassoc": symmetrize(f, alg.table("zinbiel")),
                                "lie": antisymmetrize(f, alg.table("prelie"))})


def zinbiel_to_dendriform(alg: Algebra) -> Algebra:
    """x≻y = x∗y and x≺y = y∗x."""
    t = alg.table("zinbiel")
    return Algebra(alg.dim, alg.field, {"dendriform_succ": t.copy(),
                                        "dendriform_prec": np.transpose(t, (1, 0, 2)).copy()})


# ---------------------------------------------------------------------------
# bilinear forms

def validate_form(field: FieldDescriptor, omega, require_antisymmetric: bool = True) -> np.ndarray:
    w = np.asarray(omega)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise FormError(f"form must be a square matrix, got shape {w.shape}")
    w = field.array(w.tolist())
    if require_antisymmetric and not field.is_zero(w + w.T):
        raise FormError("form is not antisymmetric")
    if require_antisymmetric:
        diag = np.array([w[i, i] for i in range(w.shape[0])], dtype=object)
        if not field.is_zero(diag):
            raise FormError("form is not alternating")
    if determinant(field, w) == 0:
        raise FormError("form is degenerate")
    return w


def _form_env(field, w):
    n = w.shape[0]
    T = field.zeros((n, n, 1))
    T[:, :, 0] = w
    return T


def _cyclic_report(table: np.ndarray, field: FieldDescriptor, omega, name: str) -> CheckReport:
    w = validate_form(field, omega)
    n = w.shape[0]
    if table.shape != (n, n, n):
        raise ValueError("form and table dimensions differ")
    x, y, z = Var("x", "A"), Var("y", "A"), Var("z", "A")
    m, om = op("m"), op("omega")
    ident = identity(name, om(m(x, y), z) + om(m(y, z), x) + om(m(z, x), y), 0 * om(m(x, y), z))
    return check_identity_list([ident], {"m": table, "omega": _form_env(field, w)},
                               {"A": n}, field)


def check_connes_cocycle(star: np.ndarray, omega, field: FieldDescriptor) -> CheckReport:
    """ω(x⋆y,z) + ω(y⋆z,x) + ω(z⋆x,y) = 0."""
    return _cyclic_report(np.asarray(star), field, omega, "connes_cocycle")


def check_symplectic(lie: np.ndarray, omega, field: FieldDescriptor) -> CheckReport:
    """ω([x,y],z) + ω([y,z],x) + ω([z,x],y) = 0."""
    return _cyclic_report(np.asarray(lie), field, omega, "symplectic")


def compatible_from_form(star: np.ndarray, lie: np.ndarray, omega,
                         field: FieldDescriptor) -> tuple[np.ndarray, np.ndarray]:
    """Solve ω(x∗y,z) = ω(y,x⋆z) and ω(x∘y,z) = −ω(y,[x,z]) for ∗ and ∘."""
    w = validate_form(field, omega)
    star, lie = np.asarray(star), np.asarray(lie)
    for name, rep in (("Connes cocycle", check_connes_cocycle(star, w, field)),
                      ("symplectic form", check_symplectic(lie, w, field))):
        if not rep.passed:
            raise FormError(f"form is not a {name} for the given product")
    n = w.shape[0]
    zin, pre = field.zeros((n, n, n)), field.zeros((n, n, n))
    wt = w.T.copy()
    for i in range(n):
        for j in range(n):
            # sum_k c[i,j,k] w[k,z] = rhs[z]  <=>  w^T c[i,j,:] = rhs
            rhs_s = field.reduce(np.array([sum(star[i, zz, m] * w[j, m] for m in range(n))
                                           for zz in range(n)], dtype=object))
            rhs_l = field.reduce(np.array([-sum(lie[i, zz, m] * w[j, m] for m in range(n))
                                           for zz in range(n)], dtype=object))
            zin[i, j] = solve_linear(field, wt, rhs_s)
            pre[i, j] = solve_linear(field, wt, rhs_l)
    return zin, pre


def form_compatibility_report(alg: Algebra, omega) -> CheckReport:
    """Quadratic conditions: ω(x∗y,z) = ω(y,x⋆z) and ω(x∘y,z) = −ω(y,[x,z])."""
    f = alg.field
    w = validate_form(f, omega)
    adj = sub_adjacent(alg)
    x, y, z = Var("x", "A"), Var("y", "A"), Var("z", "A")
    s, o, st, br, om = op("zinbiel"), op("prelie"), op("commassoc"), op("lie"), op("omega")
    env = dict(alg.tables)
    env.update(adj.tables)
    env["omega"] = _form_env(f, w)
    idents = [identity("invariant_star", om(s(x, y), z), om(y, st(x, z))),
              identity("invariant_circ", om(o(x, y), z), -om(y, br(x, z)))]
    return check_identity_list(idents, env, {"A": alg.dim}, f)
