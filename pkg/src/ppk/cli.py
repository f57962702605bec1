"""The ``ppk`` command line.

Every command assembles one run report and prints it once.  JSON is the
contract: keys are sorted, witnesses come in a fixed order and nothing
time-dependent is included, so identical argv and files give identical
bytes.  Exit status 0 means every normative check passed, 1 means a check
failed and 2 means the input could not be used.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebras import CheckReport, IdentitySystem, MissingTable, check_identities, sub_adjacent
from .bialgebras import (BialgebraData, check_bialgebra, check_coalgebra,
                         check_equivalent_characterizations, double_construction)
from .documents import (DocumentError, DatumDocument, EquivalenceDocument, FlagDocument, RMatrix,
                        abelian_matrices_to_json, algebra_to_json, bialgebra_to_json,
                        datum_to_json, digest, dumps, flag_to_json, matched_pair_to_json,
                        parse_document, r_to_json, representation_to_json)
from .extending import (SplitError, check_morphism_pair, extract_datum,
                        verify_extending_structure)
from .fields import FieldDescriptor, FieldError
from .flags import enumerate_flag_datums, verify_flag_datum
from .products import (ComponentError, MatchedPair, build_bicrossed, build_crossed_product,
                       verify_abelian_crossed_matrices, verify_crossed_system, verify_matched_pair)
from .representations import Representation, check_representation
from .search import SearchBoundError
from .yangbaxter import check_ppybe, coboundary_bialgebra, search_solutions

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Raised for unusable input; becomes exit status 2."""


class Run:
    """Accumulates the pieces of one run report."""

    def __init__(self, argv):
        self.argv = list(argv)
        self.inputs = {}
        self.checks = {}
        self.fields = {}
        self.results = {}
        self.warnings = []
        self.failed = False

    def read(self, path, expect=None, field: FieldDescriptor | None = None):
        p = Path(path)
        try:
            raw = json.loads(p.read_bytes().decode("utf-8"))
        except OSError as exc:
            raise InputError(f"{path}: cannot read ({exc.strerror})") from None
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise InputError(f"{path}: malformed JSON: {exc}") from None
        self.inputs[str(path)] = digest(p)
        if field is not None:
            raw = _override_field(raw, field)
        try:
            return parse_document(raw, expect)
        except DocumentError as exc:
            raise InputError(f"{path}: {exc}") from None

    def check(self, name, report: CheckReport, field, normative=True):
        self.checks[name] = report.to_json(field)
        self.warnings.extend(report.warnings)
        if normative and not report.passed:
            self.failed = True
        return report

    def verdict(self, name, ok: bool, normative=True):
        self.results[name] = bool(ok)
        if normative and not ok:
            self.failed = True

    def body(self, status, error=None) -> dict:
        out = {"command": self.argv, "inputs": self.inputs, "checks": self.checks,
               "results": self.results, "warnings": self.warnings, "exit_status": status}
        if error is not None:
            out["error"] = error
        return out


def _override_field(raw, field: FieldDescriptor):
    """Reinterpret every embedded algebra (and r) over ``field``."""
    if isinstance(raw, dict):
        out = {k: _override_field(v, field) for k, v in raw.items()}
        if "field" in out:
            out["field"] = field.to_json()
        return out
    if isinstance(raw, list):
        return [_override_field(v, field) for v in raw]
    return raw


def _system(kind: str) -> IdentitySystem:
    try:
        return IdentitySystem.parse(kind)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _emit(path, obj, run: Run):
    if path:
        Path(path).write_text(dumps(obj))
        run.results["emitted"] = str(path)


# ---------------------------------------------------------------------------
# commands

def cmd_check(args, run: Run):
    doc = run.read(args.file)
    mode = args.as_
    if mode == "auto":
        mode = {Representation: "representation", BialgebraData: "bialgebra"}.get(type(doc), "algebra")
    if mode == "representation":
        if not isinstance(doc, Representation):
            raise InputError("expected a representation document")
        if args.kind and args.kind.replace("-", "") != doc.kind.value:
            raise InputError(f"document holds a {doc.kind.value} representation, not {args.kind}")
        run.check("representation", check_representation(doc), doc.field)
        return
    if not args.kind:
        raise InputError("--kind is required")
    if mode in ("bialgebra", "coalgebra"):
        if not isinstance(doc, BialgebraData):
            raise InputError("expected a bialgebra document with delta_zinbiel and delta_prelie")
        if args.kind not in ("zinbiel", "prelie", "prepoisson"):
            raise InputError(f"no {mode} check for kind {args.kind!r}")
        if mode == "coalgebra":
            rep = check_coalgebra(args.kind, doc.delta_zinbiel if args.kind != "prelie" else
                                  doc.delta_prelie, doc.delta_prelie, field=doc.field)
        else:
            rep = check_bialgebra(args.kind, doc, printed=args.printed)
        run.check(mode, rep, doc.field)
        return
    A = doc.algebra if isinstance(doc, BialgebraData) else doc
    if not hasattr(A, "tables"):
        raise InputError("expected an algebra document")
    if args.sub_adjacent:
        A = sub_adjacent(A)
    run.check(_system(args.kind).value, check_identities(A, _system(args.kind)), A.field)


def cmd_extending(args, run: Run):
    if args.action == "verify":
        doc = run.read(args.file, "datum")
        rep = verify_extending_structure(doc.algebra, doc.datum, args.strategy, doc.kind,
                                         printed=args.printed)
        run.check("extending", rep, doc.algebra.field)
    elif args.action == "extract":
        E = run.read(args.file, "algebra")
        if not args.a_part:
            raise InputError("--a-part is required")
        a_part = _indices(args.a_part, E.dim)
        A, d = extract_datum(E, a_part)
        run.results["datum"] = datum_to_json(A, d)
        _emit(args.emit, run.results["datum"], run)
    else:
        doc = run.read(args.file, "equivalence")
        v = check_morphism_pair(doc.algebra, doc.first, doc.second, doc.pair)
        run.results["morphism"] = v.to_json()
        run.verdict("equivalent", v.equivalent)
        if not v.agreement:
            run.warnings.append("WARN equation verdict differs from the direct product check")


def _indices(text, n):
    try:
        out = [int(t) - 1 for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"cannot parse basis indices {text!r}") from None
    if any(not 0 <= i < n for i in out):
        raise InputError(f"basis indices must lie in 1..{n}")
    return out


def cmd_crossed(args, run: Run):
    doc = run.read(args.file)
    if isinstance(doc, tuple):   # abelian matrix six-tuple
        field, m = doc
        if args.action == "build":
            from .products import abelian_matrices_datum
            from .algebras import Algebra
            d = abelian_matrices_datum(field, m)
            E = build_crossed_product(Algebra.zero(m.n, field), d)
            run.results["product"] = algebra_to_json(E)
            _emit(args.emit, run.results["product"], run)
            return
        rep = verify_abelian_crossed_matrices(field, m)
        run.check("matrices", rep, field)
        return
    if not isinstance(doc, DatumDocument):
        raise InputError("expected a crossed-system datum or an abelian matrix document")
    if args.action == "build":
        E = build_crossed_product(doc.algebra, doc.datum)
        run.results["product"] = algebra_to_json(E)
        _emit(args.emit, run.results["product"], run)
        return
    run.check("crossed", verify_crossed_system(doc.algebra, doc.datum, args.strategy),
              doc.algebra.field)


def cmd_matched(args, run: Run):
    mp = run.read(args.file, "matched_pair")
    if args.action == "build":
        C = build_bicrossed(mp)
        run.results["product"] = algebra_to_json(C)
        _emit(args.emit, run.results["product"], run)
        return
    run.check("matched_pair", verify_matched_pair(mp, args.strategy), mp.field)


def cmd_flag(args, run: Run):
    field = FieldDescriptor.parse(args.field) if args.field else None
    if args.action == "verify":
        doc = run.read(args.file, "flag", field)
        rep = verify_flag_datum(args.kind or doc.kind, doc.algebra, doc.flag, printed=args.printed)
        run.check("flag", rep, doc.algebra.field)
        return
    path = args.algebra or args.file
    if not path:
        raise InputError("flag enumerate needs --algebra")
    if not args.kind:
        raise InputError("--kind is required")
    A = run.read(path, None, field)
    if isinstance(A, FlagDocument):
        A = A.algebra
    if not hasattr(A, "tables"):
        raise InputError(f"{path}: expected an algebra or flag document")
    datums = enumerate_flag_datums(A, args.kind, mode=args.mode, source=args.source)
    run.results["count"] = len(datums)
    if not args.count_only:
        run.results["datums"] = [fd.to_json() for fd in datums]


def cmd_ybe(args, run: Run):
    field = FieldDescriptor.parse(args.field) if args.field else None
    if not args.algebra:
        raise InputError("--algebra is required")
    A = run.read(args.algebra, "algebra", field)
    if args.action == "search":
        sols = search_solutions(A, symmetric=args.symmetric, target=args.target,
                                exhaustive=args.samples == 0,
                                seed=args.seed if args.samples else None,
                                samples=args.samples)
        run.results["count"] = len(sols)
        run.results["solutions"] = [A.field.to_json_array(r) for r in sols]
        return
    if not args.r:
        raise InputError("--r is required")
    rdoc = run.read(args.r, "r", field)
    r = rdoc.array(A.field)
    if args.action == "check":
        v = check_ppybe(A, r)
        run.results["ybe"] = v.to_json()
        run.verdict("ppybe", v.ppybe)
        return
    data = coboundary_bialgebra(A, r)
    run.results["bialgebra"] = bialgebra_to_json(data)
    run.results["ybe"] = check_ppybe(A, r).to_json()
    run.check("bialgebra", check_bialgebra("prepoisson", data), A.field)
    _emit(args.emit, run.results["bialgebra"], run)


def cmd_double(args, run: Run):
    data = run.read(args.file, "bialgebra")
    try:
        C, w = double_construction(data)
    except ValueError as exc:
        run.check("bialgebra", check_bialgebra("prepoisson", data), data.field)
        run.results["error"] = str(exc)
        return
    f = data.field
    run.results["double"] = algebra_to_json(C)
    run.results["form"] = f.to_json_array(w)
    ch = check_equivalent_characterizations(data)
    run.results["characterizations"] = ch.to_json()
    _emit(args.emit, {"algebra": run.results["double"], "form": run.results["form"]}, run)


def cmd_bialgebra(args, run: Run):
    data = run.read(args.file, "bialgebra")
    rep = check_bialgebra(args.kind, data, printed=args.printed)
    run.check("bialgebra", rep, data.field)
    if args.explain:
        if args.kind != "prepoisson":
            raise InputError("--explain compares the pre-Poisson characterizations")
        if not check_identities(data.algebra, IdentitySystem.PREPOISSON).passed:
            run.results["explain"] = "A is not pre-Poisson; the characterizations do not apply"
            return
        ch = check_equivalent_characterizations(data)
        run.results["characterizations"] = ch.to_json()
        if not ch.agreement:
            run.warnings.append("WARN the four characterizations disagree")


def cmd_gen(args, run: Run):
    from .generators import GENERATORS, InstanceSpec
    from .products import AbelianCrossedMatrices
    from .flags import FlagDatum
    if args.what not in GENERATORS:
        raise InputError(f"unknown generator {args.what!r}; expected one of {sorted(GENERATORS)}")
    field = FieldDescriptor.parse(args.field or "f3")
    spec = InstanceSpec(args.seed, field, tuple(_ints(args.dims)), args.sparsity, args.count)
    kw = {}
    if args.kind and args.what in ("algebra", "representation"):
        kw = {"system" if args.what == "algebra" else "kind": args.kind}
    out = []
    for inst in GENERATORS[args.what](spec, **kw):
        if isinstance(inst, Representation):
            out.append(representation_to_json(inst))
        elif isinstance(inst, MatchedPair):
            out.append(matched_pair_to_json(inst))
        elif isinstance(inst, AbelianCrossedMatrices):
            out.append(abelian_matrices_to_json(field, inst))
        elif isinstance(inst, FlagDatum):
            out.append(inst.to_json())
        elif isinstance(inst, tuple):
            out.append(datum_to_json(*inst))
        elif isinstance(inst, np.ndarray):
            out.append(field.to_json_array(inst))
        else:
            out.append(algebra_to_json(inst))
    run.results["spec"] = spec.to_json()
    run.results["instances"] = out


def _ints(text):
    try:
        return [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise InputError(f"cannot parse dims {text!r}") from None


# ---------------------------------------------------------------------------
# parser

def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--strategy", choices=("axiomatic", "itemized", "both"),
                   default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="ppk", parents=[common],
                                 description="Pre-Poisson algebra workbench over exact fields.")
    ap.add_argument("--version", action="version", version=f"ppk {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("check", parents=[common], help="check an algebra, representation, "
                       "coalgebra or bialgebra document")
    p.add_argument("file")
    p.add_argument("--kind")
    p.add_argument("--as", dest="as_", default="auto",
                   choices=("auto", "algebra", "representation", "bialgebra", "coalgebra"))
    p.add_argument("--sub-adjacent", action="store_true",
                   help="check the sub-adjacent algebra instead")
    p.add_argument("--printed", action="store_true", help="use the as-printed mixed conditions")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("extending", parents=[common], help="extending datums")
    p.add_argument("action", choices=("verify", "extract", "equiv"))
    p.add_argument("file")
    p.add_argument("--printed", action="store_true")
    p.add_argument("--a-part", help="1-based basis indices spanning A, e.g. 1,2")
    p.add_argument("--emit")
    p.set_defaults(func=cmd_extending)

    p = sub.add_parser("crossed", parents=[common], help="crossed systems and products")
    p.add_argument("action", choices=("verify", "build"))
    p.add_argument("file")
    p.add_argument("--emit")
    p.set_defaults(func=cmd_crossed)

    p = sub.add_parser("matched", parents=[common], help="matched pairs and bicrossed products")
    p.add_argument("action", choices=("verify", "build"))
    p.add_argument("file")
    p.add_argument("--emit")
    p.set_defaults(func=cmd_matched)

    p = sub.add_parser("flag", parents=[common], help="flag datums of dim-1 extensions")
    p.add_argument("action", choices=("verify", "enumerate"))
    p.add_argument("file", nargs="?")
    p.add_argument("--kind", choices=("zinbiel", "prelie", "prepoisson"))
    p.add_argument("--algebra")
    p.add_argument("--field")
    p.add_argument("--mode", choices=("pruned", "brute"), default="pruned")
    p.add_argument("--source", choices=("flag", "axiomatic"), default="flag")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--printed", action="store_true")
    p.set_defaults(func=cmd_flag)

    p = sub.add_parser("ybe", parents=[common], help="the pre-Poisson Yang-Baxter equation")
    p.add_argument("action", choices=("check", "search", "coboundary"))
    p.add_argument("--algebra")
    p.add_argument("--r")
    p.add_argument("--field")
    p.add_argument("--symmetric", action="store_true", default=False)
    p.add_argument("--exhaustive", action="store_true", default=True,
                   help="enumerate every solution (the default unless --samples is given)")
    p.add_argument("--samples", type=int, default=0, help="seeded random solutions instead")
    p.add_argument("--target", choices=("ppybe", "d", "s"), default="ppybe")
    p.add_argument("--emit")
    p.set_defaults(func=cmd_ybe)

    p = sub.add_parser("double", parents=[common], help="the quadratic double A ⋈ A*")
    p.add_argument("action", choices=("build",))
    p.add_argument("file")
    p.add_argument("--emit")
    p.set_defaults(func=cmd_double)

    p = sub.add_parser("bialgebra", parents=[common], help="bialgebra checks")
    p.add_argument("action", choices=("check",))
    p.add_argument("file")
    p.add_argument("--kind", default="prepoisson", choices=("zinbiel", "prelie", "prepoisson"))
    p.add_argument("--explain", action="store_true",
                   help="also evaluate the four equivalent characterizations")
    p.add_argument("--printed", action="store_true")
    p.set_defaults(func=cmd_bialgebra)

    p = sub.add_parser("gen", parents=[common], help="deterministic instance generators")
    p.add_argument("what")
    p.add_argument("--field")
    p.add_argument("--dims", default="2")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--sparsity", type=float, default=0.0)
    p.add_argument("--kind")
    p.set_defaults(func=cmd_gen)
    return ap


def _text(body: dict) -> str:
    status = {0: "PASS", 1: "FAIL", 2: "ERROR"}[body["exit_status"]]
    lines = [f"{status} ppk {' '.join(body['command'])}"]
    if "error" in body:
        lines.append(f"  error: {body['error']}")
    for name, rep in body["checks"].items():
        lines.append(f"  {name}: {'pass' if rep['passed'] else 'fail'}")
        for g, ok in rep.get("groups", {}).items():
            lines.append(f"    {g}: {'pass' if ok else 'fail'}")
        for w in rep["witnesses"]:
            idx = ",".join(str(i) for i in w["indices"])
            lines.append(f"    witness {w['identity']} at ({idx}): [{' '.join(w['residual'])}]")
    for key, val in body["results"].items():
        if isinstance(val, (bool, int, str)):
            lines.append(f"  {key}: {val}")
        elif isinstance(val, dict) and all(isinstance(v, (bool, int, str)) for v in val.values()):
            lines.append(f"  {key}: " + ", ".join(f"{k}={v}" for k, v in val.items()))
        else:
            lines.append(f"  {key}: (see --format json)")
    lines.extend(f"  {w}" for w in body["warnings"])
    return "\n".join(lines) + "\n"


def run_command(argv) -> tuple[int, dict]:
    """Parse and execute; returns (exit status, report body)."""
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_INPUT
        if code == 0:   # --help / --version
            raise
        run = Run(argv)
        return EXIT_INPUT, run.body(EXIT_INPUT, "invalid command line")
    for name, default in (("format", "json"), ("seed", 0), ("strategy", "axiomatic")):
        if not hasattr(args, name):
            setattr(args, name, default)
    run = Run(argv)
    try:
        args.func(args, run)
    except (InputError, DocumentError, FieldError, SplitError, ComponentError, MissingTable,
            SearchBoundError, ValueError) as exc:
        return EXIT_INPUT, run.body(EXIT_INPUT, str(exc))
    status = EXIT_FAIL if run.failed else EXIT_PASS
    return status, run.body(status)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    status, body = run_command(argv)
    fmt = "json"
    if "--format" in argv:
        i = list(argv).index("--format")
        if i + 1 < len(argv) and argv[i + 1] in ("json", "text"):
            fmt = argv[i + 1]
    out = dumps(body) if fmt == "json" else _text(body)
    sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
