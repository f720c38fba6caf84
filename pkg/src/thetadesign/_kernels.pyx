# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.  ``_fallback.py`` mirrors every function here."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint64_t, uint8_t
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline uint64_t _next(uint64_t* s) nogil:
    cdef uint64_t x = s[0]
    x ^= x >> 12
    x ^= x << 25
    x ^= x >> 27
    s[0] = x
    return x * <uint64_t>2685821657736338717ULL


cdef inline int64_t _below(uint64_t* s, int64_t n) nogil:
    return <int64_t>((_next(s) >> 33) % <uint64_t>n)


cdef inline int64_t _pair(int64_t u, int64_t v) nogil:
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def cover_scan(idx, int64_t npairs, int64_t cap):
    cdef int64_t[::1] ix = np.ascontiguousarray(idx, dtype=np.int64)
    counts_arr = np.zeros(npairs, dtype=np.int32)
    cdef int32_t[::1] counts = counts_arr
    dup = []
    cdef Py_ssize_t k
    cdef int64_t x
    cdef int64_t ndup = 0
    for k in range(ix.shape[0]):
        x = ix[k]
        counts[x] += 1
        if counts[x] == 2 and ndup < cap:
            dup.append(k)
            ndup += 1
    return counts_arr, np.asarray(dup, dtype=np.int64)


def local_search(int32_t[:, ::1] blocks, int n_dev, int32_t[:, ::1] powers, uint8_t[::1] target,
                 int32_t[::1] tmpl_i, int32_t[::1] tmpl_j, int32_t[::1] inc_ptr, int32_t[::1] inc_edge,
                 uint64_t seed, int64_t max_steps, int64_t stall_limit):
    """Min-conflicts vertex moves on base blocks of a developed decomposition.

    ``blocks`` is modified in place.  Returns ``(cost, steps)``; cost 0 means
    every host edge is covered exactly once and no non-edge is covered.
    """
    cdef int nb = blocks.shape[0]
    cdef int v = blocks.shape[1] if nb else 0
    cdef int t = powers.shape[0]
    cdef int npts = powers.shape[1] if t else 0
    cdef int ne = tmpl_i.shape[0]
    cdef int64_t npairs = target.shape[0]
    cdef uint64_t state = seed if seed != 0 else <uint64_t>0x9E3779B97F4A7C15ULL

    cov_arr = np.zeros(npairs, dtype=np.int32)
    cdef int32_t[::1] cov = cov_arr
    cdef int b, i, j, k, q, nimg, o, cand, m
    cdef int64_t x, cost = 0, steps = 0, last_improve = 0
    cdef int64_t d_rem, d_add, best, nbest, delta
    cdef int old, chosen, new, nbad, nothers, in_row
    cdef int* bad = <int*>malloc(sizeof(int) * (v + 1))
    cdef int* others = <int*>malloc(sizeof(int) * (ne + 1))
    try:
        for b in range(nb):
            nimg = t if b < n_dev else 1
            for i in range(nimg):
                for k in range(ne):
                    cov[_pair(powers[i, blocks[b, tmpl_i[k]]], powers[i, blocks[b, tmpl_j[k]]])] += 1
        for x in range(npairs):
            cost += abs(cov[x] - <int32_t>target[x])

        with nogil:
            while cost > 0 and steps < max_steps:
                if steps - last_improve > stall_limit:
                    break
                steps += 1
                b = <int>_below(&state, nb)
                nimg = t if b < n_dev else 1
                nbad = 0
                for j in range(v):
                    for q in range(inc_ptr[j], inc_ptr[j + 1]):
                        k = inc_edge[q]
                        x = _pair(blocks[b, tmpl_i[k]], blocks[b, tmpl_j[k]])
                        if cov[x] > target[x]:
                            bad[nbad] = j
                            nbad += 1
                            break
                if nbad > 0 and _below(&state, 8) != 0:
                    j = bad[_below(&state, nbad)]
                else:
                    j = <int>_below(&state, v)
                old = blocks[b, j]
                nothers = 0
                for q in range(inc_ptr[j], inc_ptr[j + 1]):
                    k = inc_edge[q]
                    if tmpl_i[k] == j:
                        others[nothers] = blocks[b, tmpl_j[k]]
                    else:
                        others[nothers] = blocks[b, tmpl_i[k]]
                    nothers += 1

                d_rem = 0
                for i in range(nimg):
                    for o in range(nothers):
                        x = _pair(powers[i, old], powers[i, others[o]])
                        if cov[x] > target[x]:
                            d_rem -= 1
                        else:
                            d_rem += 1
                        cov[x] -= 1

                best = 1 << 30
                nbest = 0
                chosen = old
                for cand in range(npts):
                    if cand == old:
                        continue
                    in_row = 0
                    for m in range(v):
                        if blocks[b, m] == cand:
                            in_row = 1
                            break
                    if in_row:
                        continue
                    d_add = 0
                    for i in range(nimg):
                        for o in range(nothers):
                            x = _pair(powers[i, cand], powers[i, others[o]])
                            if cov[x] < target[x]:
                                d_add -= 1
                            else:
                                d_add += 1
                            cov[x] += 1
                    for i in range(nimg):
                        for o in range(nothers):
                            cov[_pair(powers[i, cand], powers[i, others[o]])] -= 1
                    if d_add < best:
                        best = d_add
                        chosen = cand
                        nbest = 1
                    elif d_add == best:
                        nbest += 1
                        if _below(&state, nbest) == 0:
                            chosen = cand

                if nbest > 0 and d_rem + best <= 0:
                    new = chosen
                else:
                    new = old
                for i in range(nimg):
                    for o in range(nothers):
                        cov[_pair(powers[i, new], powers[i, others[o]])] += 1
                blocks[b, j] = new
                if new != old:
                    delta = d_rem + best
                    cost += delta
                    if delta < 0:
                        last_improve = steps
    finally:
        free(bad)
        free(others)
    return cost, steps
