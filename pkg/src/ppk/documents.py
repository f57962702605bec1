"""JSON documents: parsing with path-naming diagnostics, and serialization.

Scalars are JSON strings ("3", "-3/7") or integers; tensors are nested
row-major arrays.  Every parse error names the offending location in the
document, e.g. ``tables.zinbiel[0][1]``.  Document kinds are told apart by
an optional ``"type"`` member or, failing that, by their keys.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebras import Algebra
from .bialgebras import BialgebraData
from .extending import SHAPES, ExtendingDatum, MorphismPair
from .fields import FieldDescriptor, FieldError
from .flags import ORDER as FLAG_ORDER, FlagDatum
from .products import MP_MAPS, AbelianCrossedMatrices, MatchedPair
from .representations import MAP_NAMES, RepKind, Representation

__all__ = [
    "DocumentError",
    "RMatrix",
    "DatumDocument",
    "FlagDocument",
    "EquivalenceDocument",
    "parse_document",
    "load",
    "digest",
    "dumps",
    "algebra_to_json",
    "representation_to_json",
    "datum_to_json",
    "bialgebra_to_json",
    "r_to_json",
    "matched_pair_to_json",
    "flag_to_json",
    "abelian_matrices_to_json",
    "TABLE_NAMES",
]

TABLE_NAMES = ("zinbiel", "prelie", "dendriform_succ", "dendriform_prec", "commassoc", "lie")


class DocumentError(ValueError):
    """Malformed or invalid input; ``path`` locates the problem."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class RMatrix:
    """A 2-tensor r = Σ r[i][j] e_i⊗e_j; ``field`` is None when the document omits it."""

    dim: int
    field: FieldDescriptor | None
    raw: tuple

    def array(self, field: FieldDescriptor | None = None) -> np.ndarray:
        f = field or self.field
        if f is None:
            raise DocumentError("field", "the r document has no field and none was supplied")
        if self.field is not None and field is not None and field != self.field:
            raise DocumentError("field", f"r is over {self.field}, the algebra over {field}")
        return _tensor(f, [list(row) for row in self.raw], (self.dim, self.dim), "r")


@dataclass(frozen=True)
class DatumDocument:
    algebra: Algebra
    datum: ExtendingDatum
    kind: str = "prepoisson"


@dataclass(frozen=True)
class FlagDocument:
    algebra: Algebra
    flag: FlagDatum
    kind: str = "prepoisson"


@dataclass(frozen=True)
class EquivalenceDocument:
    algebra: Algebra
    first: ExtendingDatum
    second: ExtendingDatum
    pair: MorphismPair


# ---------------------------------------------------------------------------
# low-level readers

def _join(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


def _get(doc, key, path, kinds=None):
    if not isinstance(doc, dict):
        raise DocumentError(path, "expected an object")
    if key not in doc:
        raise DocumentError(_join(path, key), "missing")
    val = doc[key]
    if kinds is not None and not isinstance(val, kinds):
        raise DocumentError(_join(path, key), f"expected {_kind_name(kinds)}")
    return val


def _kind_name(kinds):
    names = {int: "an integer", str: "a string", dict: "an object", list: "an array",
             bool: "a boolean"}
    kinds = kinds if isinstance(kinds, tuple) else (kinds,)
    return " or ".join(names.get(k, k.__name__) for k in kinds)


def _int(doc, key, path, low=1):
    val = _get(doc, key, path)
    if isinstance(val, bool) or not isinstance(val, int):
        raise DocumentError(_join(path, key), "expected an integer")
    if val < low:
        raise DocumentError(_join(path, key), f"must be at least {low}")
    return val


def _scalar(field: FieldDescriptor, v, path):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise DocumentError(path, f"expected a scalar string or integer, got {json.dumps(v)}")
    try:
        return field.scalar(v)
    except (FieldError, ValueError, ZeroDivisionError) as exc:
        raise DocumentError(path, str(exc)) from None


def _tensor(field: FieldDescriptor, value, shape, path) -> np.ndarray:
    """Validate the nesting of ``value`` against ``shape`` and read it into the field."""
    out = field.zeros(shape)

    def walk(v, depth, idx, p):
        if depth == len(shape):
            out[idx] = _scalar(field, v, p)
            return
        if not isinstance(v, list):
            raise DocumentError(p, f"expected an array of length {shape[depth]}")
        if len(v) != shape[depth]:
            raise DocumentError(p, f"expected {shape[depth]} entries, got {len(v)}")
        for i, sub in enumerate(v):
            walk(sub, depth + 1, idx + (i,), _join(p, i))

    walk(value, 0, (), path)
    return out


def _field(doc, path) -> FieldDescriptor:
    val = _get(doc, "field", path)
    p = _join(path, "field")
    if isinstance(val, str):
        try:
            return FieldDescriptor.parse(val)
        except FieldError as exc:
            raise DocumentError(p, str(exc)) from None
    if not isinstance(val, dict):
        raise DocumentError(p, "expected an object such as {\"kind\": \"fp\", \"p\": 3}")
    modulus = val.get("p", val.get("modulus"))
    if modulus is not None and (isinstance(modulus, bool) or not isinstance(modulus, int)):
        raise DocumentError(_join(p, "p"), "modulus must be an integer")
    try:
        return FieldDescriptor.from_json(val)
    except FieldError as exc:
        raise DocumentError(p, str(exc)) from None


def _maps(doc, key, path, field, allowed, shapes, required=()):
    maps = _get(doc, key, path, dict)
    p = _join(path, key)
    extra = sorted(set(maps) - set(allowed))
    if extra:
        raise DocumentError(_join(p, extra[0]), f"unknown map (expected one of {sorted(allowed)})")
    for name in required:
        if name not in maps:
            raise DocumentError(_join(p, name), "missing")
    return {name: _tensor(field, maps[name], shapes[name], _join(p, name)) for name in maps}


# ---------------------------------------------------------------------------
# typed readers

def _algebra(doc, path="") -> Algebra:
    if not isinstance(doc, dict):
        raise DocumentError(path, "expected an algebra object")
    n = _int(doc, "dim", path)
    f = _field(doc, path)
    tables = _get(doc, "tables", path, dict)
    tp = _join(path, "tables")
    out = {}
    for name in sorted(tables):
        if name not in TABLE_NAMES:
            raise DocumentError(_join(tp, name), f"unknown table (expected one of {list(TABLE_NAMES)})")
        out[name] = _tensor(f, tables[name], (n, n, n), _join(tp, name))
    return Algebra(n, f, out)


def _representation(doc, path="") -> Representation:
    p = _join(path, "kind")
    try:
        kind = RepKind.parse(_get(doc, "kind", path, str))
    except ValueError:
        raise DocumentError(p, f"unknown representation kind {doc['kind']!r}") from None
    base = _algebra(_get(doc, "base", path, dict), _join(path, "base"))
    m = _int(doc, "repdim", path)
    names = MAP_NAMES[kind]
    shapes = {k: (base.dim, m, m) for k in names}
    maps = _maps(doc, "maps", path, base.field, names, shapes, required=names)
    return Representation(kind, base, m, maps)


def _datum_maps(doc, key, path, A, q):
    shapes = {k: tuple({"n": A.dim, "q": q}[c] for c in code) for k, code in SHAPES.items()}
    return ExtendingDatum(A.dim, q, A.field, _maps(doc, key, path, A.field, SHAPES, shapes))


def _datum(doc, path="") -> DatumDocument:
    A = _algebra(_get(doc, "algebra", path, dict), _join(path, "algebra"))
    q = _int(doc, "q", path)
    kind = doc.get("kind", "prepoisson")
    if kind not in ("zinbiel", "prelie", "prepoisson"):
        raise DocumentError(_join(path, "kind"), f"unknown datum kind {kind!r}")
    return DatumDocument(A, _datum_maps(doc, "maps", path, A, q), kind)


def _equivalence(doc, path="") -> EquivalenceDocument:
    A = _algebra(_get(doc, "algebra", path, dict), _join(path, "algebra"))
    q = _int(doc, "q", path)
    d1 = _datum_maps(doc, "first", path, A, q)
    d2 = _datum_maps(doc, "second", path, A, q)
    zeta = _tensor(A.field, _get(doc, "zeta", path), (q, A.dim), _join(path, "zeta"))
    eta = _tensor(A.field, _get(doc, "eta", path), (q, q), _join(path, "eta"))
    return EquivalenceDocument(A, d1, d2, MorphismPair(zeta, eta))


def _bialgebra(doc, path="") -> BialgebraData:
    A = _algebra(doc, path)
    n = A.dim
    D = _tensor(A.field, _get(doc, "delta_zinbiel", path), (n, n, n), _join(path, "delta_zinbiel"))
    d = _tensor(A.field, _get(doc, "delta_prelie", path), (n, n, n), _join(path, "delta_prelie"))
    return BialgebraData(A, D, d)


def _rmatrix(doc, path="") -> RMatrix:
    r = _get(doc, "r", path, list)
    n = doc.get("dim", len(r))
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DocumentError(_join(path, "dim"), "expected a positive integer")
    f = _field(doc, path) if "field" in doc else None
    # validate shape and scalar syntax now, over the rationals when no field is given
    from .fields import QQ
    _tensor(f or QQ, r, (n, n), _join(path, "r"))
    return RMatrix(n, f, tuple(tuple(row) for row in r))


def _matched(doc, path="") -> MatchedPair:
    kind = _get(doc, "kind", path, str)
    if kind not in MP_MAPS:
        raise DocumentError(_join(path, "kind"), f"unknown matched-pair kind {kind!r}")
    A1 = _algebra(_get(doc, "A1", path, dict), _join(path, "A1"))
    A2 = _algebra(_get(doc, "A2", path, dict), _join(path, "A2"))
    if A1.field != A2.field:
        raise DocumentError(_join(path, "A2.field"), "components live over different fields")
    n1, n2 = A1.dim, A2.dim
    shapes = {k: (n1, n2, n2) if k.endswith("1") else (n2, n1, n1) for k in MP_MAPS[kind]}
    return MatchedPair(kind, A1, A2, _maps(doc, "maps", path, A1.field, MP_MAPS[kind], shapes))


def _flag(doc, path="") -> FlagDocument:
    A = _algebra(_get(doc, "algebra", path, dict), _join(path, "algebra"))
    kind = doc.get("kind", "prepoisson")
    if kind not in ("zinbiel", "prelie", "prepoisson"):
        raise DocumentError(_join(path, "kind"), f"unknown flag kind {kind!r}")
    fl = _get(doc, "flag", path, dict)
    p = _join(path, "flag")
    n, f = A.dim, A.field
    kw = {}
    for name in FLAG_ORDER:
        if name not in fl:
            raise DocumentError(_join(p, name), "missing")
        if name in ("k1", "k2"):
            kw[name] = _scalar(f, fl[name], _join(p, name))
        else:
            kw[name] = _tensor(f, fl[name], (n, n) if name in "PQST" else (n,), _join(p, name))
    extra = sorted(set(fl) - set(FLAG_ORDER))
    if extra:
        raise DocumentError(_join(p, extra[0]), "unknown flag component")
    return FlagDocument(A, FlagDatum(f, **kw), kind)


def _abelian(doc, path="") -> tuple[FieldDescriptor, AbelianCrossedMatrices]:
    f = _field(doc, path)
    A = _get(doc, "A", path, list)
    n = len(A)
    if n < 1:
        raise DocumentError(_join(path, "A"), "expected a nonempty matrix")
    mats = [_tensor(f, _get(doc, k, path), (n, n), _join(path, k)) for k in "ABCD"]
    vecs = [_tensor(f, _get(doc, k, path), (n,), _join(path, k)) for k in ("theta0", "upsilon0")]
    return f, AbelianCrossedMatrices(*mats, *vecs)


_READERS = {
    "algebra": _algebra,
    "representation": _representation,
    "datum": _datum,
    "crossed_system": _datum,
    "equivalence": _equivalence,
    "bialgebra": _bialgebra,
    "r": _rmatrix,
    "matched_pair": _matched,
    "flag": _flag,
    "abelian_matrices": _abelian,
}


def _infer(doc) -> str:
    if "type" in doc:
        t = doc["type"]
        if t not in _READERS:
            raise DocumentError("type", f"unknown document type {t!r}")
        return t
    keys = set(doc)
    if "delta_zinbiel" in keys or "delta_prelie" in keys:
        return "bialgebra"
    if "repdim" in keys or "base" in keys:
        return "representation"
    if "first" in keys and "second" in keys:
        return "equivalence"
    if "flag" in keys:
        return "flag"
    if "A1" in keys:
        return "matched_pair"
    if "theta0" in keys:
        return "abelian_matrices"
    if "r" in keys and "tables" not in keys:
        return "r"
    if "algebra" in keys and "maps" in keys:
        return "datum"
    return "algebra"


def parse_document(source, expect: str | None = None):
    """Read a document from a path, bytes or an already-decoded object.

    Returns the typed value; ``expect`` names the required document type.
    Raises :class:`DocumentError` with the offending path.
    """
    doc = _decode(source)
    if not isinstance(doc, dict):
        raise DocumentError("", "the document must be a JSON object")
    kind = _infer(doc)
    if expect is not None and kind != expect and not (expect == "datum" and kind == "crossed_system"):
        raise DocumentError("", f"expected a document of type {expect!r}, got {kind!r}")
    try:
        return _READERS[kind](doc, "")
    except DocumentError:
        raise
    except (ValueError, FieldError) as exc:
        raise DocumentError("", str(exc)) from None


def _decode(source):
    if isinstance(source, (dict, list)):
        return source
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    else:
        try:
            data = Path(source).read_bytes()
        except OSError as exc:
            raise DocumentError("", f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DocumentError("", f"malformed JSON: {exc}") from None


def load(path):
    """Shorthand for :func:`parse_document` on a file."""
    return parse_document(Path(path))


def digest(path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# writers

def algebra_to_json(A: Algebra) -> dict:
    f = A.field
    return {"dim": A.dim, "field": f.to_json(),
            "tables": {k: f.to_json_array(v) for k, v in sorted(A.tables.items())}}


def representation_to_json(rep: Representation) -> dict:
    f = rep.field
    return {"type": "representation", "kind": rep.kind.value, "base": algebra_to_json(rep.base),
            "repdim": rep.repdim,
            "maps": {k: f.to_json_array(v) for k, v in sorted(rep.maps.items())}}


def datum_to_json(A: Algebra, d: ExtendingDatum, kind: str = "prepoisson") -> dict:
    f = d.field
    return {"type": "datum", "kind": kind, "algebra": algebra_to_json(A), "q": d.q,
            "maps": {k: f.to_json_array(v) for k, v in sorted(d.maps.items())}}


def bialgebra_to_json(data: BialgebraData) -> dict:
    out = algebra_to_json(data.algebra)
    out["type"] = "bialgebra"
    out["delta_zinbiel"] = data.field.to_json_array(data.delta_zinbiel)
    out["delta_prelie"] = data.field.to_json_array(data.delta_prelie)
    return out


def r_to_json(field: FieldDescriptor, r) -> dict:
    r = np.asarray(r)
    return {"type": "r", "dim": int(r.shape[0]), "field": field.to_json(),
            "r": field.to_json_array(r)}


def matched_pair_to_json(mp: MatchedPair) -> dict:
    f = mp.field
    return {"type": "matched_pair", "kind": mp.kind, "A1": algebra_to_json(mp.A1),
            "A2": algebra_to_json(mp.A2),
            "maps": {k: f.to_json_array(v) for k, v in sorted(mp.maps.items())}}


def flag_to_json(A: Algebra, fd: FlagDatum, kind: str = "prepoisson") -> dict:
    return {"type": "flag", "kind": kind, "algebra": algebra_to_json(A), "flag": fd.to_json()}


def abelian_matrices_to_json(field: FieldDescriptor, m: AbelianCrossedMatrices) -> dict:
    out = {"type": "abelian_matrices", "field": field.to_json()}
    for k in ("A", "B", "C", "D", "theta0", "upsilon0"):
        out[k] = field.to_json_array(np.asarray(getattr(m, k)))
    return out
