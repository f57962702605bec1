# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled depth-first constraint search (same semantics as ``_pykernels``)."""

from libc.stdlib cimport malloc, realloc, free
from libc.stdint cimport int64_t, uint64_t

import numpy as np


cdef inline uint64_t _xorshift(uint64_t s) nogil:
    s ^= s << 13
    s ^= s >> 7
    s ^= s << 17
    return s


cdef inline int64_t _pmod(int64_t s, int64_t p) nogil:
    cdef int64_t r
    if p == 0:
        return s
    r = s % p
    if r < 0:
        r += p
    return r


def dfs(long p, domain, int npos, cons_ptr, term_ptr, coef, tvars, prefix, strides,
        unsigned long long seed, long limit, long long max_nodes=0):
    cdef int64_t[::1] dom = np.ascontiguousarray(domain, dtype=np.int64)
    cdef int[::1] cptr = np.ascontiguousarray(cons_ptr, dtype=np.intc)
    cdef int[::1] tptr = np.ascontiguousarray(term_ptr, dtype=np.intc)
    cdef int64_t[::1] cf = np.ascontiguousarray(coef, dtype=np.int64)
    tv_arr = np.ascontiguousarray(tvars, dtype=np.intc)
    if tv_arr.ndim != 2 or tv_arr.shape[0] == 0:
        tv_arr = np.full((max(1, len(coef)), 1), -1, dtype=np.intc)
    cdef int[:, ::1] tv = tv_arr
    cdef int[::1] pre = np.ascontiguousarray(prefix, dtype=np.intc) if len(prefix) else np.zeros(1, dtype=np.intc)
    cdef int64_t[::1] stv = np.ascontiguousarray(strides, dtype=np.int64)
    cdef int plen = len(prefix)
    cdef int m = dom.shape[0]
    cdef int nst = stv.shape[0]
    cdef int width = tv.shape[1]
    if npos == 0:
        return np.zeros((1, 0), dtype=np.int64), 1

    cdef int64_t *vals = <int64_t *> malloc(npos * sizeof(int64_t))
    cdef int *k = <int *> malloc(npos * sizeof(int))
    cdef int *off = <int *> malloc(npos * sizeof(int))
    cdef int *stp = <int *> malloc(npos * sizeof(int))
    cdef Py_ssize_t cap = 1024
    cdef Py_ssize_t nsol = 0
    cdef int64_t *buf = <int64_t *> malloc(cap * npos * sizeof(int64_t))
    cdef uint64_t state = seed
    cdef long long nodes = 0
    cdef int d, c, t, j, idx, size, good
    cdef int64_t s, v
    cdef int64_t *nb

    if vals == NULL or k == NULL or off == NULL or stp == NULL or buf == NULL:
        free(vals); free(k); free(off); free(stp); free(buf)
        raise MemoryError()

    with nogil:
        d = 0
        k[0] = 0
        if seed != 0 and 0 >= plen:
            state = _xorshift(state)
            off[0] = <int> (state % m)
            stp[0] = <int> stv[(state >> 32) % nst]
        else:
            off[0] = 0
            stp[0] = 1
        while d >= 0:
            size = 1 if d < plen else m
            if k[d] >= size:
                d -= 1
                if d >= 0:
                    k[d] += 1
                continue
            if d < plen:
                idx = pre[d]
            else:
                idx = (off[d] + k[d] * stp[d]) % m
            vals[d] = dom[idx]
            nodes += 1
            if max_nodes != 0 and nodes > max_nodes:
                break
            good = 1
            for c in range(cptr[d], cptr[d + 1]):
                s = 0
                for t in range(tptr[c], tptr[c + 1]):
                    v = cf[t]
                    for j in range(width):
                        if tv[t, j] < 0:
                            break
                        v = v * vals[tv[t, j]]
                        if p != 0:
                            v = v % p
                    s += v
                if _pmod(s, p) != 0:
                    good = 0
                    break
            if good:
                if d == npos - 1:
                    if nsol == cap:
                        cap *= 2
                        nb = <int64_t *> realloc(buf, cap * npos * sizeof(int64_t))
                        if nb == NULL:
                            break
                        buf = nb
                    for j in range(npos):
                        buf[nsol * npos + j] = vals[j]
                    nsol += 1
                    if limit != 0 and nsol >= limit:
                        break
                    k[d] += 1
                else:
                    d += 1
                    k[d] = 0
                    if seed != 0 and d >= plen:
                        state = _xorshift(state)
                        off[d] = <int> (state % m)
                        stp[d] = <int> stv[(state >> 32) % nst]
                    else:
                        off[d] = 0
                        stp[d] = 1
            else:
                k[d] += 1

    out = np.empty((nsol, npos), dtype=np.int64)
    cdef int64_t[:, ::1] ov = out
    cdef Py_ssize_t i
    for i in range(nsol):
        for j in range(npos):
            ov[i, j] = buf[i * npos + j]
    free(vals); free(k); free(off); free(stp); free(buf)
    return out, nodes
