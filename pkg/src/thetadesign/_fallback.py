"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``.

Both implementations consume the random stream identically, so for equal
inputs they return equal results; the test suite checks this.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_MULT = 2685821657736338717


class XorShift:
    """xorshift64* generator; the same recurrence is used by the compiled kernel."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = (seed & MASK64) or 0x9E3779B97F4A7C15

    def next(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * _MULT) & MASK64

    def below(self, n: int) -> int:
        return (self.next() >> 33) % n


def cover_scan(idx: np.ndarray, npairs: int, cap: int):
    """Count how often each pair index occurs.

    Returns ``(counts, dup_positions)`` where ``dup_positions`` lists, in scan
    order, the positions in ``idx`` at which a pair reached multiplicity 2
    (at most ``cap`` of them).
    """
    idx = np.asarray(idx, dtype=np.int64)
    counts = np.bincount(idx, minlength=npairs).astype(np.int32) if len(idx) else np.zeros(npairs, np.int32)
    if cap <= 0 or not (counts > 1).any():
        return counts, np.zeros(0, dtype=np.int64)
    order = np.argsort(idx, kind="stable")
    s = idx[order]
    same = s[1:] == s[:-1]
    run_start = np.r_[True, ~same]
    # second element of each run of equal indices
    second = np.flatnonzero(run_start[:-1] & same) + 1
    pos = np.sort(order[second])
    return counts, pos[:cap].astype(np.int64)


def _pair(u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def local_search(blocks, n_dev, powers, target, tmpl_i, tmpl_j, inc_ptr, inc_edge,
                 seed, max_steps, stall_limit):
    """Conflict-minimising vertex moves on base blocks; see ``_kernels.local_search``."""
    blk = [list(map(int, row)) for row in blocks]
    pw = [list(map(int, row)) for row in powers]
    tgt = list(map(int, target))
    ti = list(map(int, tmpl_i))
    tj = list(map(int, tmpl_j))
    iptr = list(map(int, inc_ptr))
    iedge = list(map(int, inc_edge))
    nb = len(blk)
    v = len(blk[0]) if nb else 0
    t = len(pw)
    npts = len(pw[0]) if t else 0
    ne = len(ti)
    rng = XorShift(seed)

    cov = [0] * len(tgt)
    for b in range(nb):
        nimg = t if b < n_dev else 1
        row = blk[b]
        for i in range(nimg):
            p = pw[i]
            for k in range(ne):
                cov[_pair(p[row[ti[k]]], p[row[tj[k]]])] += 1
    cost = sum(abs(c - g) for c, g in zip(cov, tgt))

    steps = 0
    last_improve = 0
    bad = [0] * max(v, 1)
    while cost > 0 and steps < max_steps:
        if steps - last_improve > stall_limit:
            break
        steps += 1
        b = rng.below(nb)
        row = blk[b]
        nimg = t if b < n_dev else 1
        nbad = 0
        for j in range(v):
            for q in range(iptr[j], iptr[j + 1]):
                k = iedge[q]
                x = _pair(row[ti[k]], row[tj[k]])
                if cov[x] > tgt[x]:
                    bad[nbad] = j
                    nbad += 1
                    break
        if nbad > 0 and rng.below(8) != 0:
            j = bad[rng.below(nbad)]
        else:
            j = rng.below(v)
        old = row[j]
        others = [row[tj[iedge[q]]] if ti[iedge[q]] == j else row[ti[iedge[q]]]
                  for q in range(iptr[j], iptr[j + 1])]

        d_rem = 0
        for i in range(nimg):
            p = pw[i]
            for o in others:
                x = _pair(p[old], p[o])
                d_rem += -1 if cov[x] > tgt[x] else 1
                cov[x] -= 1

        best = 1 << 30
        nbest = 0
        chosen = old
        for cand in range(npts):
            if cand == old or cand in row:
                continue
            d_add = 0
            touched = []
            for i in range(nimg):
                p = pw[i]
                for o in others:
                    x = _pair(p[cand], p[o])
                    d_add += -1 if cov[x] < tgt[x] else 1
                    cov[x] += 1
                    touched.append(x)
            for x in touched:
                cov[x] -= 1
            if d_add < best:
                best = d_add
                chosen = cand
                nbest = 1
            elif d_add == best:
                nbest += 1
                if rng.below(nbest) == 0:
                    chosen = cand

        new = chosen if (nbest > 0 and d_rem + best <= 0) else old
        for i in range(nimg):
            p = pw[i]
            for o in others:
                cov[_pair(p[new], p[o])] += 1
        row[j] = new
        if new != old:
            delta = d_rem + best
            cost += delta
            if delta < 0:
                last_improve = steps

    out = np.asarray(blk, dtype=np.int32).reshape(np.shape(blocks))
    blocks[...] = out
    return cost, steps
