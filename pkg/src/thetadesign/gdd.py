"""Group divisible designs needed by the recursive constructions.

Designs come from a small set of direct constructions and randomized
searches.  Nothing is trusted on provenance: every design is checked with
``verify_gdd_certificate`` before it is returned or cached, and cached files
are re-checked when read.

Families handled:

* one block on ``k`` singleton groups (the trivial ``k``-GDD of type ``1^k``);
* ``3``-RGDD of type ``3^(2t+1)`` from a 1-rotational Kirkman triple system;
* ``4``-RGDD of type ``4^(3t+1)`` from a 1-rotational resolvable (12t+4, 4, 1) design;
* ``{3,4,5}``-GDD of type ``1^t`` (a pairwise balanced design);
* small ``3``-GDDs by hill-climbing and other small GDDs by exact-cover search.
"""
from __future__ import annotations

import hashlib
import itertools
import math
import os
import random
import re
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import TooManyNewPoints, Unprovidable

__all__ = [
    "GDD",
    "ResolvableGDD",
    "GDDBounds",
    "BOUNDS",
    "provide_gdd",
    "provide_rgdd",
    "extend_with_group",
    "parse_type",
    "type_label",
    "serialize_gdd",
    "parse_gdd",
]

TypeVector = tuple[tuple[int, int], ...]


@dataclass
class GDDBounds:
    rgdd_max_t: int = 30
    pbd_max_points: int = 400
    pbd_max_t: int = 50
    search_restarts: int = 200


BOUNDS = GDDBounds()


def parse_type(spec: str | Iterable) -> TypeVector:
    """Canonical type vector: ``"3^4 5^1"`` -> ``((3, 4), (5, 1))``, sorted by group size."""
    if isinstance(spec, str):
        counts: dict[int, int] = {}
        for tok in spec.replace(",", " ").split():
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", tok)
            if not m:
                raise ValueError(f"bad GDD type token {tok!r}")
            g, c = int(m.group(1)), int(m.group(2) or 1)
            counts[g] = counts.get(g, 0) + c
    else:
        counts = {}
        for g, c in spec:
            counts[int(g)] = counts.get(int(g), 0) + int(c)
    return tuple(sorted((g, c) for g, c in counts.items() if c > 0))


def type_label(tv: TypeVector) -> str:
    return " ".join(f"{g}^{c}" for g, c in tv)


def _sizes(tv: TypeVector) -> list[int]:
    return [g for g, c in tv for _ in range(c)]


@dataclass(frozen=True)
class GDD:
    point_count: int
    groups: tuple[tuple[int, ...], ...]
    blocks: tuple[tuple[int, ...], ...]
    K: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(tuple(sorted(g)) for g in self.groups))
        object.__setattr__(self, "blocks", tuple(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "K", frozenset(self.K))

    @property
    def type_vector(self) -> TypeVector:
        return parse_type((len(g), 1) for g in self.groups)

    def type_label(self) -> str:
        return type_label(self.type_vector)

    def group_of(self) -> list[int]:
        out = [-1] * self.point_count
        for i, g in enumerate(self.groups):
            for x in g:
                out[x] = i
        return out


@dataclass(frozen=True)
class ResolvableGDD:
    gdd: GDD
    classes: tuple[tuple[int, ...], ...]  # block indices per parallel class

    def class_blocks(self, i: int) -> list[tuple[int, ...]]:
        return [self.gdd.blocks[j] for j in self.classes[i]]

    def is_resolved(self) -> bool:
        n = self.gdd.point_count
        seen = [0] * len(self.gdd.blocks)
        for cls in self.classes:
            pts = sorted(x for j in cls for x in self.gdd.blocks[j])
            if pts != list(range(n)):
                return False
            for j in cls:
                seen[j] += 1
        return all(s == 1 for s in seen)


def extend_with_group(r: ResolvableGDD, new_points: Sequence[int] | int,
                      assignment: Sequence[int] | None = None) -> GDD:
    """Adjoin a new group; new point i joins every block of class ``assignment[i]``.

    ``new_points`` is a count or a list (only its length matters: the new
    points are numbered after the old ones).  Default assignment is classes
    0, 1, 2, ... in order.
    """
    w = new_points if isinstance(new_points, int) else len(new_points)
    ncls = len(r.classes)
    if w > ncls:
        raise TooManyNewPoints(f"{w} new points but only {ncls} parallel classes")
    if assignment is None:
        assignment = list(range(w))
    assignment = list(assignment)
    if len(assignment) != w or len(set(assignment)) != w or any(not 0 <= a < ncls for a in assignment):
        raise TooManyNewPoints("assignment must map new points injectively to classes")
    g = r.gdd
    if w == 0:
        return g
    n = g.point_count
    blocks = [list(b) for b in g.blocks]
    for i, cls in enumerate(assignment):
        for j in r.classes[cls]:
            blocks[j].append(n + i)
    return GDD(n + w, g.groups + (tuple(range(n, n + w)),), tuple(tuple(b) for b in blocks),
               frozenset(len(b) for b in blocks))


# ---------------------------------------------------------------------------
# searches

def _seed(*parts) -> int:
    h = hashlib.sha256(repr(parts).encode()).digest()
    return int.from_bytes(h[:8], "little")


def _rotational_kts(t: int, rng: random.Random, node_limit: int) -> list[tuple[int, int, int]] | None:
    """Base triples of a 1-rotational KTS(6t+3) over Z_(6t+2) plus infinity."""
    m, h = 6 * t + 2, 3 * t + 1
    used_res = [False] * h
    used_res[0] = True
    used_d = [False] * (h + 1)
    used_d[0] = used_d[h] = True
    chosen: list[tuple[int, int, int]] = []
    nodes = 0
    order_a = list(range(m))

    def delta(x, y):
        d = (x - y) % m
        return min(d, m - d)

    def rec() -> bool:
        nonlocal nodes
        if len(chosen) == t:
            return True
        nodes += 1
        if nodes > node_limit:
            return False
        d = max(i for i in range(1, h) if not used_d[i])
        rng.shuffle(order_a)
        for a in order_a:
            ra = a % h
            if used_res[ra]:
                continue
            b = (a + d) % m
            rb = b % h
            if used_res[rb]:
                continue
            used_res[ra] = used_res[rb] = True
            used_d[d] = True
            cs = list(range(m))
            rng.shuffle(cs)
            for c in cs:
                rc = c % h
                if used_res[rc]:
                    continue
                d1, d2 = delta(a, c), delta(b, c)
                if d1 == d2 or used_d[d1] or used_d[d2]:
                    continue
                used_d[d1] = used_d[d2] = True
                used_res[rc] = True
                chosen.append((a, b, c))
                if rec():
                    return True
                chosen.pop()
                used_d[d1] = used_d[d2] = False
                used_res[rc] = False
                if nodes > node_limit:
                    break
            used_res[ra] = used_res[rb] = False
            used_d[d] = False
            if nodes > node_limit:
                return False
        return False

    return list(chosen) if rec() else None


def _rotational_rbibd4(t: int, rng: random.Random, node_limit: int) -> list[tuple[int, ...]] | None:
    """Base blocks of a 1-rotational resolvable (12t+4, 4, 1) design over Z_(12t+3) plus infinity."""
    m, h = 12 * t + 3, 4 * t + 1
    half = (m - 1) // 2
    used_res = [False] * h
    used_res[0] = True
    used_d = [False] * (half + 1)
    used_d[0] = used_d[h] = True
    chosen: list[tuple[int, ...]] = []
    nodes = 0

    def delta(x, y):
        d = (x - y) % m
        return min(d, m - d)

    def rec() -> bool:
        nonlocal nodes
        if len(chosen) == t:
            return True
        nodes += 1
        if nodes > node_limit:
            return False
        d = max(i for i in range(1, half + 1) if not used_d[i])
        starts = list(range(m))
        rng.shuffle(starts)
        for a in starts:
            b = (a + d) % m
            if used_res[a % h] or used_res[b % h]:
                continue
            used_res[a % h] = used_res[b % h] = True
            used_d[d] = True
            pool = [c for c in range(m) if not used_res[c % h]]
            rng.shuffle(pool)
            for i, c in enumerate(pool):
                dc = (delta(a, c), delta(b, c))
                if dc[0] == dc[1] or used_d[dc[0]] or used_d[dc[1]]:
                    continue
                for x in dc:
                    used_d[x] = True
                used_res[c % h] = True
                for c2 in pool[i + 1:]:
                    if used_res[c2 % h]:
                        continue
                    dd = (delta(a, c2), delta(b, c2), delta(c, c2))
                    if len(set(dd)) < 3 or any(used_d[x] for x in dd):
                        continue
                    for x in dd:
                        used_d[x] = True
                    used_res[c2 % h] = True
                    chosen.append((a, b, c, c2))
                    if rec():
                        return True
                    chosen.pop()
                    for x in dd:
                        used_d[x] = False
                    used_res[c2 % h] = False
                    if nodes > node_limit:
                        break
                for x in dc:
                    used_d[x] = False
                used_res[c % h] = False
                if nodes > node_limit:
                    break
            used_res[a % h] = used_res[b % h] = False
            used_d[d] = False
            if nodes > node_limit:
                return False
        return False

    return list(chosen) if rec() else None


def _develop_rotational(base: list[tuple[int, ...]], m: int, k: int) -> ResolvableGDD:
    """Develop 1-rotational base blocks into a resolvable design on m+1 points.

    Point ``m`` is infinity.  Returns the full design (every class,
    singleton groups).
    """
    s = m // (k - 1)  # number of classes; the base class is fixed by +s
    blocks: list[tuple[int, ...]] = []
    classes: list[list[int]] = [[] for _ in range(s)]
    inf_block = (m,) + tuple(i * s for i in range(k - 1))
    for j in range(s):
        classes[j].append(len(blocks))
        blocks.append(tuple(sorted(m if x == m else (x + j) % m for x in inf_block)))
    for b in base:
        for j in range(m):
            classes[j % s].append(len(blocks))
            blocks.append(tuple(sorted((x + j) % m for x in b)))
    g = GDD(m + 1, tuple((x,) for x in range(m + 1)), tuple(blocks), frozenset({k}))
    return ResolvableGDD(g, tuple(tuple(c) for c in classes))


def _resolvable_from_design(full: ResolvableGDD, group_class: int) -> ResolvableGDD:
    """Use one parallel class of a resolvable design as the groups of an RGDD."""
    g = full.gdd
    groups = tuple(g.blocks[j] for j in full.classes[group_class])
    keep = [j for j in range(len(g.blocks)) if j not in set(full.classes[group_class])]
    remap = {j: i for i, j in enumerate(keep)}
    blocks = tuple(g.blocks[j] for j in keep)
    classes = tuple(tuple(remap[j] for j in c) for i, c in enumerate(full.classes) if i != group_class)
    return ResolvableGDD(GDD(g.point_count, groups, blocks, g.K), classes)



def _exact_cover(items: Sequence, options: Sequence[tuple], rng: random.Random,
                 node_limit: int) -> list[int] | None:
    """Algorithm X with dict-of-sets columns and a fewest-candidates column rule.

    Returns indices of the chosen options, or None when the node budget runs out
    or no cover exists.
    """
    cols: dict = {i: set() for i in items}
    ids = list(range(len(options)))
    rng.shuffle(ids)
    for oid in ids:
        for i in options[oid]:
            cols[i].add(oid)
    sol: list[int] = []
    nodes = 0

    def select(r):
        removed = []
        for j in options[r]:
            for i in cols[j]:
                for k in options[i]:
                    if k != j:
                        cols[k].remove(i)
            removed.append(cols.pop(j))
        return removed

    def deselect(r, removed):
        for j in reversed(options[r]):
            cols[j] = removed.pop()
            for i in cols[j]:
                for k in options[i]:
                    if k != j:
                        cols[k].add(i)

    def solve() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            return False
        if not cols:
            return True
        c = min(cols, key=lambda c: len(cols[c]))
        rows = list(cols[c])
        rng.shuffle(rows)
        for r in rows:
            sol.append(r)
            removed = select(r)
            if solve():
                return True
            deselect(r, removed)
            sol.pop()
            if nodes > node_limit:
                return False
        return False

    return list(sol) if solve() else None


def _frame_problem(k: int, u: int):
    """Exact-cover formulation of a k-RGDD k^u with a cyclic Z_u action.

    Points are pairs (x, lev) with x in Z_u and lev in Z_k, numbered
    ``lev*u + x``; groups are {x} x Z_k.  A base class Q covers every point
    once, and the pure differences within each level and the mixed
    differences between levels are each covered once, either by Q or by a
    transversal class {(x + o_lev, lev)}.
    """
    half = (u - 1) // 2

    def diff(p, q):
        i, x = divmod(p, u)
        j, y = divmod(q, u)
        if i == j:
            d = (y - x) % u
            return ("p", i, min(d, u - d))
        if i > j:
            i, j, x, y = j, i, y, x
        return ("m", i, j, (y - x) % u)

    options: list[tuple] = []
    payload: list[tuple] = []
    for blk in itertools.combinations(range(k * u), k):
        ds = [diff(a, b) for a, b in itertools.combinations(blk, 2)]
        if any(d[0] == "m" and d[3] == 0 for d in ds) or len(set(ds)) < len(ds):
            continue
        options.append(tuple(("pt", p) for p in blk) + tuple(ds))
        payload.append(("block", blk))
    for off in itertools.product(range(1, u), repeat=k - 1):
        o = (0,) + off
        ds = [("m", i, j, (o[j] - o[i]) % u) for i, j in itertools.combinations(range(k), 2)]
        if any(d[3] == 0 for d in ds):
            continue
        options.append(tuple(ds))
        payload.append(("transversal", o))
    items = [("pt", p) for p in range(k * u)]
    items += [("p", i, d) for i in range(k) for d in range(1, half + 1)]
    items += [("m", i, j, v) for i, j in itertools.combinations(range(k), 2) for v in range(1, u)]
    return items, options, payload


def _frame_to_rgdd(k: int, u: int, base: list[tuple[int, ...]], offsets: list[tuple[int, ...]]) -> ResolvableGDD:
    def shift(p, s):
        lev, x = divmod(p, u)
        return lev * u + (x + s) % u

    blocks: list[tuple[int, ...]] = []
    classes: list[list[int]] = []
    for s in range(u):
        classes.append([])
        for b in base:
            classes[-1].append(len(blocks))
            blocks.append(tuple(sorted(shift(p, s) for p in b)))
    for o in offsets:
        classes.append([])
        for x in range(u):
            classes[-1].append(len(blocks))
            blocks.append(tuple(sorted(lev * u + (x + o[lev]) % u for lev in range(k))))
    groups = tuple(tuple(lev * u + x for lev in range(k)) for x in range(u))
    return ResolvableGDD(GDD(k * u, groups, tuple(blocks), frozenset({k})), tuple(tuple(c) for c in classes))


def _frame_rgdd(k: int, u: int, rng: random.Random, restarts: int, node_limit: int) -> ResolvableGDD | None:
    items, options, payload = _frame_problem(k, u)
    fixed: list[int | None] = [None]
    if k == 4 and _is_prime(u):
        # multiplying by a unit preserves the frame, so one transversal may be
        # assumed to have offset 1 on level 1
        fixed = [i for i, p in enumerate(payload) if p[0] == "transversal" and p[1][1] == 1]
    for _ in range(restarts):
        for f in fixed:
            if f is None:
                its, opts, idx = items, options, list(range(len(options)))
            else:
                taken = set(options[f])
                its = [i for i in items if i not in taken]
                idx = [i for i, o in enumerate(options) if i != f and not taken.intersection(o)]
                opts = [options[i] for i in idx]
            sol = _exact_cover(its, opts, rng, node_limit)
            if sol is None:
                continue
            chosen = [payload[idx[i]] for i in sol] + ([payload[f]] if f is not None else [])
            base = [p[1] for p in chosen if p[0] == "block"]
            offsets = [p[1] for p in chosen if p[0] == "transversal"]
            return _frame_to_rgdd(k, u, base, offsets)
    return None


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


def _biorbit_kts(t: int, rng: random.Random, node_limit: int) -> ResolvableGDD | None:
    """KTS(6t+3), t even, from a base class over Z_w x {0, 1} plus infinity, w = 3t+1.

    The base class is {inf, (0,0), (b,1)} together with triples Q; its
    translates by Z_w are the parallel classes.
    """
    w = 3 * t + 1
    half = (w - 1) // 2
    npts = 2 * w
    used = [False] * (2 * half + w)

    def diff(p, q):
        i, x = divmod(p, w)
        j, y = divmod(q, w)
        if i == j:
            d = (y - x) % w
            return i * half + min(d, w - d) - 1
        if i > j:
            x, y = y, x
        return 2 * half + (y - x) % w

    covered = [False] * npts
    b = rng.randrange(w)
    covered[0] = covered[w + b] = True
    used[2 * half + b] = True
    order = list(range(npts))
    rng.shuffle(order)
    Q: list[tuple[int, int, int]] = []
    nodes = 0

    def rec() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            return False
        p = next((x for x in order if not covered[x]), None)
        if p is None:
            return all(used)
        covered[p] = True
        cand = [q for q in order if not covered[q] and not used[diff(p, q)]]
        for a, q in enumerate(cand):
            dpq = diff(p, q)
            used[dpq] = covered[q] = True
            for r in cand[a + 1:]:
                if covered[r]:
                    continue
                d1, d2 = diff(p, r), diff(q, r)
                if used[d1] or used[d2] or d1 == d2:
                    continue
                used[d1] = used[d2] = covered[r] = True
                Q.append((p, q, r))
                if rec():
                    return True
                Q.pop()
                used[d1] = used[d2] = covered[r] = False
                if nodes > node_limit:
                    break
            used[dpq] = covered[q] = False
            if nodes > node_limit:
                break
        covered[p] = False
        return False

    if not rec():
        return None
    inf = npts
    base = [(inf, 0, w + b)] + Q

    def shift(p, s):
        if p == inf:
            return p
        lev, x = divmod(p, w)
        return lev * w + (x + s) % w

    blocks, classes = [], []
    for s in range(w):
        classes.append(tuple(range(len(blocks), len(blocks) + len(base))))
        blocks += [tuple(sorted(shift(p, s) for p in blk)) for blk in base]
    g = GDD(npts + 1, tuple((x,) for x in range(npts + 1)), tuple(blocks), frozenset({3}))
    return ResolvableGDD(g, tuple(classes))


def _anneal_rotational(k: int, t: int, rng: random.Random, max_steps: int) -> list[tuple[int, ...]] | None:
    """Simulated annealing for the base blocks of a 1-rotational KTS / resolvable (v,4,1) design.

    The nonzero residues mod h are partitioned into t blocks of size k and
    each residue is lifted to one of the k-1 cosets; the cost counts repeated
    differences.
    """
    if k == 3:
        m, h = 6 * t + 2, 3 * t + 1
    else:
        m, h = 12 * t + 3, 4 * t + 1
    nl = k - 1
    half = m // 2
    res = list(range(1, h))
    rng.shuffle(res)
    blocks = [res[i * k:(i + 1) * k] for i in range(t)]
    lift = {r: rng.randrange(nl) for r in range(1, h)}
    cnt = [0] * (half + 1)
    cnt[h] = 1

    def pt(r):
        return r + lift[r] * h

    def bdiffs(b):
        out = []
        for i in range(len(b)):
            for j in range(i + 1, len(b)):
                d = (pt(b[i]) - pt(b[j])) % m
                out.append(min(d, m - d))
        return out

    for b in blocks:
        for d in bdiffs(b):
            cnt[d] += 1
    cur = sum(c - 1 for c in cnt if c > 1)
    temp = 1.0
    for _ in range(max_steps):
        if cur == 0:
            return [tuple(pt(r) for r in b) for b in blocks]
        if rng.random() < 0.5:
            bi, bj = rng.randrange(t), rng.randrange(t)
            if bi == bj:
                continue
            i, j = rng.randrange(k), rng.randrange(k)
            aff = (bi, bj)

            def do(bi=bi, bj=bj, i=i, j=j):
                blocks[bi][i], blocks[bj][j] = blocks[bj][j], blocks[bi][i]
            undo = do
        else:
            bi, i = rng.randrange(t), rng.randrange(k)
            r = blocks[bi][i]
            old_l = lift[r]
            new_l = (old_l + 1 + rng.randrange(nl - 1)) % nl if nl > 1 else old_l
            aff = (bi,)

            def do(r=r, v=new_l):
                lift[r] = v

            def undo(r=r, v=old_l):
                lift[r] = v
        old = [bdiffs(blocks[x]) for x in aff]
        delta = 0
        for ds in old:
            for d in ds:
                cnt[d] -= 1
                if cnt[d] >= 1:
                    delta -= 1
        do()
        new = [bdiffs(blocks[x]) for x in aff]
        for ds in new:
            for d in ds:
                if cnt[d] >= 1:
                    delta += 1
                cnt[d] += 1
        if delta <= 0 or rng.random() < math.exp(-delta / temp):
            cur += delta
        else:
            for ds in new:
                for d in ds:
                    cnt[d] -= 1
            undo()
            for ds in old:
                for d in ds:
                    cnt[d] += 1
        temp = max(0.05, temp * 0.99999)
    return None


def _hill_climb_3gdd(sizes: Sequence[int], rng: random.Random, max_steps: int) -> GDD | None:
    """Stinson-style hill-climbing for a 3-GDD with the given group sizes."""
    n = sum(sizes)
    group_of = [i for i, g in enumerate(sizes) for _ in range(g)]
    live = [set(y for y in range(n) if group_of[y] != group_of[x]) for x in range(n)]
    total = sum(len(s) for s in live) // 2
    if total % 3:
        return None
    target = total // 3
    third: dict[tuple[int, int], int] = {}
    count = 0
    for _ in range(max_steps):
        if count == target:
            break
        x = rng.randrange(n)
        if not live[x]:
            continue
        lx = list(live[x])
        y = lx[rng.randrange(len(lx))]
        zs = [z for z in lx if z != y and group_of[z] != group_of[y]]
        if not zs:
            continue
        z = zs[rng.randrange(len(zs))]
        if z in live[y]:
            live[y].discard(z)
            live[z].discard(y)
            count += 1
        else:
            yz = (y, z) if y < z else (z, y)
            w = third.pop(yz)
            for p, q in ((y, w), (z, w)):
                live[p].add(q)
                live[q].add(p)
                third.pop((p, q) if p < q else (q, p))
        live[x].discard(y)
        live[y].discard(x)
        live[x].discard(z)
        live[z].discard(x)
        for p, q, r in ((x, y, z), (x, z, y), (y, z, x)):
            third[(p, q) if p < q else (q, p)] = r
    if count != target:
        return None
    blocks = {tuple(sorted((p, q, r))) for (p, q), r in third.items()}
    groups, start = [], 0
    for g in sizes:
        groups.append(tuple(range(start, start + g)))
        start += g
    return GDD(n, tuple(groups), tuple(sorted(blocks)), frozenset({3}))


def _dfs_gdd(sizes: Sequence[int], K: frozenset[int], rng: random.Random, node_limit: int) -> GDD | None:
    """Randomized exact cover of cross-group pairs by blocks with sizes in K."""
    n = sum(sizes)
    group_of = [i for i, g in enumerate(sizes) for _ in range(g)]
    need = [set(y for y in range(n) if group_of[y] != group_of[x]) for x in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    ks = sorted(K)
    blocks: list[tuple[int, ...]] = []
    nodes = 0

    def cliques(base: list[int], cand: list[int], k: int):
        if len(base) == k:
            yield list(base)
            return
        for i, c in enumerate(cand):
            if all(c in need[b] for b in base):
                base.append(c)
                yield from cliques(base, cand[i + 1:], k)
                base.pop()

    def rec() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            return False
        x = next((p for p in perm if need[p]), None)
        if x is None:
            return True
        # the pair with the fewest completions is tried first
        y = min(need[x], key=lambda q: (len(need[x] & need[q]), perm.index(q)))
        cand = list(need[x] & need[y])
        rng.shuffle(cand)
        order_k = ks[:]
        rng.shuffle(order_k)
        for k in order_k:
            if k == 2:
                opts = [[x, y]]
            else:
                opts = (c for c in cliques([x, y], cand, k))
            for blk in opts:
                for i in range(len(blk)):
                    for j in range(i + 1, len(blk)):
                        need[blk[i]].discard(blk[j])
                        need[blk[j]].discard(blk[i])
                blocks.append(tuple(sorted(blk)))
                if rec():
                    return True
                blocks.pop()
                for i in range(len(blk)):
                    for j in range(i + 1, len(blk)):
                        need[blk[i]].add(blk[j])
                        need[blk[j]].add(blk[i])
                if nodes > node_limit:
                    return False
        return False

    if not rec():
        return None
    groups, start = [], 0
    for g in sizes:
        groups.append(tuple(range(start, start + g)))
        start += g
    return GDD(n, tuple(groups), tuple(sorted(blocks)), K)


# ---------------------------------------------------------------------------
# cache

def _cache_root() -> Path:
    root = os.environ.get("THETA_CACHE_DIR")
    base = Path(root) if root else Path.home() / ".cache" / "thetadesign"
    return base / "gdd"


def _cache_key(kind: str, K: Iterable[int], tv: TypeVector) -> str:
    ks = "-".join(str(k) for k in sorted(K))
    ts = "_".join(f"{g}x{c}" for g, c in tv)
    return f"{kind}_k{ks}_{ts}"


def serialize_gdd(g: GDD | ResolvableGDD) -> str:
    r = g if isinstance(g, ResolvableGDD) else None
    d = r.gdd if r else g
    lines = ["# thetadesign gdd v1",
             f"gdd K={','.join(map(str, sorted(d.K)))} type={type_label(d.type_vector)}",
             f"points: {d.point_count}"]
    lines += ["group: " + " ".join(map(str, grp)) for grp in d.groups]
    lines += ["block: " + " ".join(map(str, b)) for b in d.blocks]
    if r:
        lines += ["class: " + " ".join(map(str, c)) for c in r.classes]
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_gdd(text: str) -> GDD | ResolvableGDD:
    K: frozenset[int] | None = None
    n = None
    groups, blocks, classes = [], [], []
    done = False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gdd "):
            m = re.match(r"gdd K=([\d,]+) type=(.*)$", line)
            if not m:
                raise ValueError(f"bad gdd header {line!r}")
            K = frozenset(int(x) for x in m.group(1).split(","))
        elif line == "end":
            done = True
        else:
            key, _, rest = line.partition(":")
            vals = tuple(int(x) for x in rest.split())
            if key == "points":
                n = vals[0]
            elif key == "group":
                groups.append(vals)
            elif key == "block":
                blocks.append(vals)
            elif key == "class":
                classes.append(vals)
            else:
                raise ValueError(f"unknown gdd statement {key!r}")
    if K is None or n is None or not done:
        raise ValueError("truncated gdd file")
    g = GDD(n, tuple(groups), tuple(blocks), K)
    return ResolvableGDD(g, tuple(classes)) if classes else g


# designs shipped with the package; they are re-verified like cache files
_SEED_DIR = Path(__file__).parent / "data" / "gdd"
USE_SEEDS = True
_lock = threading.RLock()
_memo: dict[str, GDD | ResolvableGDD] = {}


def _check(obj: GDD | ResolvableGDD) -> bool:
    from .verify import verify_gdd_certificate

    g = obj.gdd if isinstance(obj, ResolvableGDD) else obj
    if not verify_gdd_certificate(g).accepted:
        return False
    if isinstance(obj, ResolvableGDD) and not obj.is_resolved():
        return False
    return True


def _cached(key: str, build):
    with _lock:
        hit = _memo.get(key)
        if hit is not None:
            return hit
        path = _cache_root() / f"{key}.gdd"
        obj = None
        sources = ((_SEED_DIR / f"{key}.gdd",) if USE_SEEDS else ()) + (path,)
        for candidate in sources:
            if obj is None and candidate.exists():
                try:
                    obj = parse_gdd(candidate.read_text())
                    if not _check(obj):
                        obj = None
                except (OSError, ValueError):
                    obj = None
        if obj is None:
            obj = build()
            if not _check(obj):
                raise Unprovidable(f"{key}: constructed design failed verification")
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                tmp = path.with_suffix(".tmp")
                tmp.write_text(serialize_gdd(obj))
                tmp.replace(path)
            except OSError:
                pass
        _memo[key] = obj
        return obj


def clear_memory_cache() -> None:
    with _lock:
        _memo.clear()


# ---------------------------------------------------------------------------
# providers

def _kts(v: int) -> ResolvableGDD:
    """A Kirkman triple system of order v (v = 3 mod 6) with singleton groups."""
    u = v // 3
    if u == 1:
        g = GDD(3, ((0,), (1,), (2,)), ((0, 1, 2),), frozenset({3}))
        return ResolvableGDD(g, ((0,),))
    r = provide_rgdd(3, ((3, u),))
    # the groups of a 3-RGDD 3^u form one more parallel class
    blocks = r.gdd.blocks + r.gdd.groups
    nb = len(r.gdd.blocks)
    classes = r.classes + (tuple(range(nb, nb + u)),)
    g = GDD(v, tuple((x,) for x in range(v)), blocks, frozenset({3}))
    return ResolvableGDD(g, classes)


def _budget(k: int, t: int) -> tuple[int, int]:
    """(restarts, nodes per restart) for the randomized searches at size t."""
    return BOUNDS.search_restarts, 2000 * (t + 1) * k


def _search_rgdd(k: int, u: int) -> ResolvableGDD:
    t = (u - 1) // 2 if k == 3 else (u - 1) // 3
    rng = random.Random(_seed("rgdd", k, u))
    restarts, nodes = _budget(k, t)
    if k == 3:
        if t == 1 or t % 4 in (0, 1):
            for _ in range(restarts):
                base = _rotational_kts(t, rng, nodes)
                if base is not None:
                    return _resolvable_from_design(_develop_rotational(base, 6 * t + 2, 3), 0)
        if t % 2 == 0:
            for _ in range(restarts):
                full = _biorbit_kts(t, rng, nodes)
                if full is not None:
                    return _resolvable_from_design(full, 0)
        if t >= 3:
            r = _frame_rgdd(3, u, rng, max(1, restarts // 4), 20000)
            if r is not None:
                return r
    else:
        if t == 1:
            for _ in range(restarts):
                base = _rotational_rbibd4(t, rng, nodes)
                if base is not None:
                    return _resolvable_from_design(_develop_rotational(base, 12 * t + 3, 4), 0)
        if t == 2:
            r = _frame_rgdd(4, u, rng, max(1, restarts // 50), 200000)
            if r is not None:
                return r
        for _ in range(max(1, restarts // 10)):
            base = _anneal_rotational(4, t, rng, 200000)
            if base is not None:
                return _resolvable_from_design(_develop_rotational(base, 12 * t + 3, 4), 0)
        if u % 2 == 1 and t != 2:
            r = _frame_rgdd(4, u, rng, max(1, restarts // 50), 200000)
            if r is not None:
                return r
    raise Unprovidable(f"{k}-RGDD of type {k}^{u} not found within the search budget")


def provide_rgdd(k: int, type_spec) -> ResolvableGDD:
    """A k-RGDD of type 3^(2t+1) (k = 3) or 4^(3t+1) (k = 4), t >= 1."""
    tv = parse_type(type_spec)
    if len(tv) != 1 or tv[0][0] != k or k not in (3, 4):
        raise Unprovidable(f"{k}-RGDD of type {type_label(tv)} is not a supported family")
    u = tv[0][1]
    if k == 3:
        if u < 3 or u % 2 == 0:
            raise Unprovidable(f"3-RGDD needs type 3^(2t+1) with t >= 1, got {type_label(tv)}")
        t = (u - 1) // 2
    else:
        if u < 4 or (u - 1) % 3:
            raise Unprovidable(f"4-RGDD needs type 4^(3t+1) with t >= 1, got {type_label(tv)}")
        t = (u - 1) // 3
    if t > BOUNDS.rgdd_max_t:
        raise Unprovidable(f"{k}-RGDD {type_label(tv)} exceeds bound t <= {BOUNDS.rgdd_max_t}")
    return _cached(_cache_key("rgdd", {k}, tv), lambda: _search_rgdd(k, u))


def _regroup_singletons(g: GDD, K: frozenset[int]) -> GDD:
    """Turn every non-singleton group into a block, giving a design of type 1^n."""
    blocks = list(g.blocks) + [grp for grp in g.groups if len(grp) > 1]
    return GDD(g.point_count, tuple((x,) for x in range(g.point_count)), tuple(blocks), K)


def _pbd345(t: int) -> GDD:
    K = frozenset({3, 4, 5})
    if t in (3, 4, 5):
        return GDD(t, tuple((x,) for x in range(t)), (tuple(range(t)),), K)
    if t % 6 in (1, 3):
        sts = provide_gdd({3}, ((1, t),))
        return GDD(t, sts.groups, sts.blocks, K)
    if t % 6 == 5:
        # triples around one block of size 5
        hole = provide_gdd({3}, ((1, t - 5), (5, 1)))
        return _regroup_singletons(hole, K)
    for w in (1, 3, 4, 5):
        v = t - w
        if v >= 9 and v % 6 == 3 and w <= (v - 1) // 2:
            kts = _kts(v)
            ext = extend_with_group(kts, w)
            return _regroup_singletons(ext, K)
    return _search_gdd(K, ((1, t),))


def _search_gdd(K: frozenset[int], tv: TypeVector) -> GDD:
    sizes = _sizes(tv)
    rng = random.Random(_seed("gdd", sorted(K), tv))
    limit = 5000
    for _ in range(BOUNDS.search_restarts):
        if K == frozenset({3}):
            g = _hill_climb_3gdd(sizes, rng, 200 * sum(sizes) ** 2)
        else:
            g = _dfs_gdd(sizes, K, rng, limit)
            limit = int(limit * 1.1)
        if g is not None:
            return g
    raise Unprovidable(f"{sorted(K)}-GDD of type {type_label(tv)} not found within the search budget")


def _feasible(K: frozenset[int], tv: TypeVector) -> bool:
    """Counting conditions for a single-block-size GDD; always true for mixed K."""
    if len(K) != 1:
        return True
    (k,) = K
    sizes = _sizes(tv)
    if len(sizes) < k:
        return False
    n = sum(sizes)
    cross = (n * n - sum(g * g for g in sizes)) // 2
    if cross % (k * (k - 1) // 2):
        return False
    return all((n - g) % (k - 1) == 0 for g in sizes)


def provide_gdd(K, type_spec) -> GDD:
    """A verified K-GDD of the given type, or Unprovidable."""
    K = frozenset(int(k) for k in (K if not isinstance(K, int) else (K,)))
    tv = parse_type(type_spec)
    sizes = _sizes(tv)
    n = sum(sizes)
    if not sizes or min(K) < 2:
        raise Unprovidable(f"{sorted(K)}-GDD of type {type_label(tv)} is degenerate")
    if all(g == 1 for g in sizes) and n in K:
        return GDD(n, tuple((x,) for x in range(n)), (tuple(range(n)),), K)
    if len(tv) == 1 and len(K) == 1:
        (k,) = K
        g, u = tv[0]
        if (k == 3 and g == 3 and u % 2 == 1 and u >= 3) or (k == 4 and g == 4 and u % 3 == 1 and u >= 4):
            return provide_rgdd(k, tv).gdd
    if K == frozenset({3, 4, 5}) and tv and tv[0][0] == 1 and len(tv) == 1:
        t = tv[0][1]
        if t < 3 or t in (6, 8):
            raise Unprovidable(f"no {{3,4,5}}-GDD of type 1^{t} exists")
        if t > BOUNDS.pbd_max_t or t > BOUNDS.pbd_max_points:
            raise Unprovidable(f"{{3,4,5}}-GDD of type 1^{t} exceeds bound t <= {BOUNDS.pbd_max_t}")
        return _cached(_cache_key("gdd", K, tv), lambda: _pbd345(t))
    if not _feasible(K, tv):
        raise Unprovidable(f"{sorted(K)}-GDD of type {type_label(tv)} fails the counting conditions")
    if n > BOUNDS.pbd_max_points:
        raise Unprovidable(f"{sorted(K)}-GDD of type {type_label(tv)} exceeds {BOUNDS.pbd_max_points} points")
    return _cached(_cache_key("gdd", K, tv), lambda: _search_gdd(K, tv))
