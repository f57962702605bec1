"""Pure-Python depth-first constraint search; mirrors ``_kernels.pyx`` exactly."""

from __future__ import annotations

import numpy as np

MASK = (1 << 64) - 1


def _xorshift(s: int) -> int:
    s ^= (s << 13) & MASK
    s ^= s >> 7
    s ^= (s << 17) & MASK
    return s & MASK


def dfs(p, domain, npos, cons_ptr, term_ptr, coef, tvars, prefix, strides, seed, limit, max_nodes=0):
    """All assignments (as value rows) satisfying every constraint.

    Constraint ``c`` is checked at level ``cons_ptr``-bucket ``d`` once the
    first ``d + 1`` positions are set.  ``prefix`` pins leading positions to
    domain indices.  A nonzero ``seed`` permutes each node's value order.
    """
    domain = [int(v) for v in domain]
    m = len(domain)
    coef = [int(c) for c in coef]
    tv = [[int(v) for v in row if v >= 0] for row in np.asarray(tvars).tolist()]
    cons_ptr = [int(c) for c in cons_ptr]
    term_ptr = [int(t) for t in term_ptr]
    prefix = [int(v) for v in prefix]
    strides = [int(s) for s in strides]
    plen = len(prefix)
    out = []
    nodes = 0
    if npos == 0:
        return np.zeros((1, 0), dtype=np.int64), 1

    vals = [0] * npos
    k = [0] * npos
    off = [0] * npos
    stp = [1] * npos
    state = seed & MASK

    def init(d):
        nonlocal state
        if seed and d >= plen:
            state = _xorshift(state)
            off[d] = state % m
            stp[d] = strides[(state >> 32) % len(strides)]
        else:
            off[d] = 0
            stp[d] = 1
        k[d] = 0

    def ok(d):
        for c in range(cons_ptr[d], cons_ptr[d + 1]):
            s = 0
            for t in range(term_ptr[c], term_ptr[c + 1]):
                v = coef[t]
                for idx in tv[t]:
                    v *= vals[idx]
                s += v
            if (s % p if p else s) != 0:
                return False
        return True

    d = 0
    init(0)
    while d >= 0:
        size = 1 if d < plen else m
        if k[d] >= size:
            d -= 1
            if d >= 0:
                k[d] += 1
            continue
        idx = prefix[d] if d < plen else (off[d] + k[d] * stp[d]) % m
        vals[d] = domain[idx]
        nodes += 1
        if max_nodes and nodes > max_nodes:
            break
        if ok(d):
            if d == npos - 1:
                out.append(list(vals))
                if limit and len(out) >= limit:
                    break
                k[d] += 1
            else:
                d += 1
                init(d)
        else:
            k[d] += 1
    arr = np.array(out, dtype=np.int64).reshape(len(out), npos)
    return arr, nodes
