"""Exhaustive and randomized search for zeros of polynomial systems over small domains.

A system is a list of :class:`~ppk.poly.Poly` constraints in ``nvars``
unknowns; a solution assigns each unknown a value from a finite domain
(the residues of F_p, or a small integer box for exact rational work).

Two engines: ``pruned`` runs a depth-first search that checks each
constraint as soon as its variables are assigned (complete, so still an
exhaustive enumeration), and ``brute`` evaluates every point of the box,
which is only allowed up to ``BRUTE_LIMIT`` points.  The DFS runs in a
compiled kernel when one was built; ``PPK_PURE_PYTHON=1`` forces the
Python twin.  ``PPK_THREADS`` caps the thread pool used to split the
search over its leading variables.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from . import _pykernels
from .poly import Poly

BRUTE_LIMIT = 10 ** 7
MAX_DEGREE = 4

__all__ = ["BRUTE_LIMIT", "SearchBoundError", "ConstraintSystem", "backend", "solve",
           "satisfied_rows"]


def _load():
    if os.environ.get("PPK_PURE_PYTHON", "").strip() not in ("", "0"):
        return _pykernels, "python"
    try:
        from . import _kernels
    except ImportError:
        return _pykernels, "python"
    return _kernels, "cython"


_KERNEL, BACKEND = _load()


def backend() -> str:
    """``"cython"`` or ``"python"``."""
    return BACKEND


class SearchBoundError(ValueError):
    pass


@dataclass
class ConstraintSystem:
    nvars: int
    constraints: list
    p: int = 0  # 0: exact integer arithmetic

    def __post_init__(self):
        clean = []
        for c in self.constraints:
            if not isinstance(c, Poly):
                c = Poly.const(c, self.p)
            if self.p:
                c = c % self.p
            if not c.is_zero():
                clean.append(c)
        self.constraints = _dedupe(clean)

    def satisfied(self, values) -> bool:
        return all((c.evaluate(values) % self.p if self.p else c.evaluate(values)) == 0
                   for c in self.constraints)


def _dedupe(polys):
    seen, out = set(), []
    for c in polys:
        key = frozenset(c.normalized().terms.items())
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


def _greedy_order(nvars, constraints):
    """Variable order that completes many constraints early.

    Each step picks the variable that finishes the most constraints, then
    the one with the largest sum of 1/(variables left) over its
    constraints.  Scores are updated incrementally; the sums are kept as
    integers scaled by lcm(1..max size) so ties are exact.
    """
    remaining = [set(c.variables()) for c in constraints]
    longest = max((len(r) for r in remaining), default=1)
    scale = 1
    for k in range(2, longest + 1):
        scale = scale * k // math.gcd(scale, k)
    unit = [0] + [scale // k for k in range(1, longest + 1)]
    index = [[] for _ in range(nvars)]
    freq = [0] * nvars
    done = [0] * nvars
    near = [0] * nvars
    for cid, r in enumerate(remaining):
        for v in r:
            index[v].append(cid)
            freq[v] += 1
            near[v] += unit[len(r)]
            if len(r) == 1:
                done[v] += 1
    order, placed = [], [False] * nvars
    for _ in range(nvars):
        best, best_key = -1, None
        for v in range(nvars):
            if not placed[v]:
                key = (done[v], near[v], freq[v], -v)
                if best_key is None or key > best_key:
                    best, best_key = v, key
        order.append(best)
        placed[best] = True
        for cid in index[best]:
            r = remaining[cid]
            size = len(r)
            delta = unit[size - 1] - unit[size]
            r.discard(best)
            for u in r:
                near[u] += delta
                if size == 2:
                    done[u] += 1
    return order


def _compile(system: ConstraintSystem, order):
    pos = {v: i for i, v in enumerate(order)}
    levels = [[] for _ in range(system.nvars)]
    for c in system.constraints:
        vs = c.variables()
        if not vs:
            return None  # nonzero constant: infeasible
        if c.degree() > MAX_DEGREE:
            raise ValueError(f"constraint degree {c.degree()} exceeds {MAX_DEGREE}")
        levels[max(pos[v] for v in vs)].append(c)
    cons_ptr, term_ptr, coef, tvars = [0], [0], [], []
    for lvl in levels:
        for c in lvl:
            for cf, mono in c.integer_terms():
                coef.append(cf % system.p if system.p else cf)
                row = [pos[v] for v in mono] + [-1] * (MAX_DEGREE - len(mono))
                tvars.append(row)
            term_ptr.append(len(coef))
        cons_ptr.append(len(term_ptr) - 1)
    tv = np.array(tvars, dtype=np.intc).reshape(len(tvars), MAX_DEGREE)
    return (np.array(cons_ptr, dtype=np.intc), np.array(term_ptr, dtype=np.intc),
            np.array(coef, dtype=np.int64), tv)


def _strides(m):
    return [s for s in range(1, max(2, m)) if math.gcd(s, m) == 1] or [1]


def _threads():
    try:
        return max(1, int(os.environ.get("PPK_THREADS", "") or os.cpu_count() or 1))
    except ValueError:
        return 1


def solve(system: ConstraintSystem, domain: Sequence[int] | None = None, mode: str = "pruned",
          limit: int = 0, seed: int = 0, order=None, threads: int | None = None,
          kernel=None, max_nodes: int = 0) -> np.ndarray:
    """Solutions as rows of values indexed by the original variables.

    Exhaustive runs (``seed == 0``, no ``limit``) return rows sorted
    lexicographically, so the output does not depend on the backend, the
    variable order or the thread count.  With a seed the value order at
    each node is permuted, which turns ``limit=1`` into a sampler.
    ``max_nodes`` bounds the walk for such sampling runs; a budgeted run
    may miss solutions, so it is refused for exhaustive ones.
    """
    if max_nodes and not (seed or limit):
        raise ValueError("a node budget only makes sense for sampling runs")
    if domain is None:
        if not system.p:
            raise ValueError("exact search needs an explicit domain")
        domain = list(range(system.p))
    domain = [int(v) for v in domain]
    n = system.nvars
    if mode == "brute":
        return _brute(system, domain, limit)
    if mode != "pruned":
        raise ValueError(f"unknown search mode {mode!r}")
    order = list(order) if order is not None else _greedy_order(n, system.constraints)
    compiled = _compile(system, order)
    if compiled is None:
        return np.zeros((0, n), dtype=np.int64)
    cons_ptr, term_ptr, coef, tv = compiled
    kern = kernel or _KERNEL
    strides = np.array(_strides(len(domain)), dtype=np.int64)
    nthreads = threads or _threads()
    if seed or limit or nthreads == 1 or n < 2 or kern is _pykernels:
        rows, _ = kern.dfs(system.p, np.array(domain, dtype=np.int64), n, cons_ptr, term_ptr,
                           coef, tv, np.zeros(0, dtype=np.intc), strides, seed, limit,
                           int(max_nodes))
    else:
        # split on leading positions; each task pins a prefix of domain indices
        m = len(domain)
        depth = 1
        while m ** depth < 4 * nthreads and depth < n - 1:
            depth += 1
        prefixes = [np.array(t, dtype=np.intc) for t in product(range(m), repeat=depth)]

        def task(pre):
            return kern.dfs(system.p, np.array(domain, dtype=np.int64), n, cons_ptr, term_ptr,
                            coef, tv, pre, strides, 0, 0)[0]

        with ThreadPoolExecutor(max_workers=nthreads) as ex:
            parts = list(ex.map(task, prefixes))
        rows = np.concatenate(parts) if parts else np.zeros((0, n), dtype=np.int64)
    inv = np.empty(n, dtype=np.int64)
    inv[np.array(order, dtype=np.int64)] = np.arange(n)
    rows = rows[:, inv] if n else rows
    if not seed and not limit and len(rows) > 1:
        rows = rows[np.lexsort(rows.T[::-1])]
    return rows


def _brute(system, domain, limit):
    n = system.nvars
    m = len(domain)
    if m ** n > BRUTE_LIMIT:
        raise SearchBoundError(f"search space {m}^{n} exceeds {BRUTE_LIMIT}")
    dom = np.array(domain, dtype=np.int64)
    out = []
    chunk = max(1, min(m ** n, 1 << 16))
    total = m ** n
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        vals = np.empty((len(idx), n), dtype=np.int64)
        rest = idx.copy()
        for j in range(n - 1, -1, -1):
            vals[:, j] = dom[rest % m]
            rest //= m
        mask = satisfied_rows(system, vals)
        out.append(vals[mask])
        if limit and sum(len(o) for o in out) >= limit:
            break
    rows = np.concatenate(out) if out else np.zeros((0, n), dtype=np.int64)
    return rows[:limit] if limit else rows


def satisfied_rows(system: ConstraintSystem, rows) -> np.ndarray:
    """Boolean mask of the rows (one assignment each) that zero every constraint."""
    vals = np.asarray(rows, dtype=np.int64).reshape(-1, system.nvars)
    mask = np.ones(len(vals), dtype=bool)
    for c in system.constraints:
        s = np.zeros(len(vals), dtype=np.int64)
        for cf, mono in c.integer_terms():
            t = np.full(len(vals), cf, dtype=np.int64)
            for v in mono:
                t = t * vals[:, v]
                if system.p:
                    t %= system.p
            s += t
        mask &= (s % system.p == 0) if system.p else (s == 0)
        if not mask.any():
            break
    return mask
