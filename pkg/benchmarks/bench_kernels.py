"""Compiled vs pure-Python search kernel on identical constraint systems.

    python benchmarks/bench_kernels.py [--repeat 3] [--json]

Each workload is solved with both kernels; the script fails if the solution
sets differ.  Timings are wall-clock medians.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

from ppk import _pykernels, search
from ppk.algebras import IdentitySystem, identities_for
from ppk.catalog import two_dim_family
from ppk.expr import residual
from ppk.fields import GF
from ppk.flags import flag_constraints
from ppk.poly import residual_polys, symbolic_array
from ppk.search import ConstraintSystem, solve
from ppk.yangbaxter import d_obstruction, s_obstruction, _symbolic_r


def ybe_system(p: int, n: int = 2):
    A = two_dim_family(0, 1, 0, GF(p))
    if n == 3:
        from ppk.generators import InstanceSpec, algebras
        A = next(algebras(InstanceSpec(1, GF(p), (3,), 0.0, 1)))
    rs, k, _ = _symbolic_r(n, p, symmetric=False)
    polys = residual_polys(d_obstruction(A, rs)) + residual_polys(s_obstruction(A, rs))
    return ConstraintSystem(k, polys, p)


def algebra_system(p: int, n: int):
    """Every pre-Poisson structure on an n-dimensional space."""
    f = GF(p)
    s, k = symbolic_array((n, n, n), 0, p)
    o, k = symbolic_array((n, n, n), k, p)
    polys = []
    for ident in identities_for(IdentitySystem.PREPOISSON):
        polys += residual_polys(residual(ident, {"zinbiel": s, "prelie": o}, {"A": n}, f))
    return ConstraintSystem(k, polys, p)


def flag_system(p: int, abc=(0, 0, 0)):
    return flag_constraints(two_dim_family(*abc, GF(p)), "prepoisson")


WORKLOADS = {
    "ybe F7 dim-2 (all r)": lambda: ybe_system(7),
    "ybe F3 dim-3 (all r)": lambda: ybe_system(3, 3),
    "pre-Poisson tables F3 dim-2": lambda: algebra_system(3, 2),
    "pre-Poisson tables F5 dim-2": lambda: algebra_system(5, 2),
    "flag datums F2 dim-2": lambda: flag_system(2),
    "flag datums F3 family(0,1,0)": lambda: flag_system(3, (0, 1, 0)),
}


def _time(fn, repeat):
    out = []
    result = None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        out.append(time.perf_counter() - t)
    return statistics.median(out), result


def run(repeat: int):
    if search.backend() != "cython":
        raise SystemExit("the compiled kernel is not built; run `pip install -e .` with a compiler")
    compiled = search._KERNEL
    rows = []
    for name, make in WORKLOADS.items():
        system = make()
        tc, rc = _time(lambda: solve(system, threads=1, kernel=compiled), repeat)
        tp, rp = _time(lambda: solve(system, threads=1, kernel=_pykernels), repeat)
        if rc.shape != rp.shape or (rc != rp).any():
            raise SystemExit(f"{name}: kernels disagree")
        rows.append({"workload": name, "variables": system.nvars, "solutions": len(rc),
                     "compiled_s": round(tc, 4), "python_s": round(tp, 4),
                     "speedup": round(tp / tc, 1) if tc > 0 else None})
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rows = run(args.repeat)
    if args.json:
        json.dump(rows, sys.stdout, indent=2)
        print()
        return
    print(f"{'workload':28} {'vars':>5} {'sols':>7} {'compiled':>10} {'python':>10} {'speedup':>8}")
    for r in rows:
        print(f"{r['workload']:28} {r['variables']:>5} {r['solutions']:>7} "
              f"{r['compiled_s']:>9.4f}s {r['python_s']:>9.4f}s {r['speedup']:>7}x")


if __name__ == "__main__":
    main()
