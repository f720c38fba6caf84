"""Recursive constructions of theta designs of every admissible order.

Every internal step is one application of Wilson's construction: take a GDD,
give each point a weight, turn each block into a complete multipartite
ingredient taken from the catalogue and overlay a smaller design on every
inflated group (all groups share one extra point when ``inf`` is 1).  The
families below only differ in which GDD and weights they use:

* ``BipartiteTower``: bipartite thetas of 10, 11, 12, 13, 14 edges (complete
  bipartite 2-GDDs with two weights);
* ``BipartiteAlt``: bipartite thetas of 15 edges (K_{t+1} with one heavy point);
* ``PrimeTripartite``: non-bipartite thetas of 11 or 13 edges ({3,4,5}-PBDs);
* ``TwoPrimeTripartite``: non-bipartite thetas of 10 or 14 edges (4-RGDDs);
* ``Theta12Tower`` / ``Theta15Tower``: non-bipartite thetas of 12 / 15 edges
  (3-RGDDs with an extra group);
* ``PatchCase``: the finitely many orders the towers do not reach.

Leaves are shipped catalogue designs of K_n, cyclic designs of order 2e+1
(found by search and cached), and the empty designs of order 0 and 1.
"""
from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .action import Decomposition
from .catalogue import builtin_catalogue, lookup
from .errors import (
    BudgetExhausted,
    IngredientMissing,
    NotFound,
    NotInSpectrum,
    PlanningFailure,
    Unprovidable,
    VerificationFailure,
)
from .gdd import GDD, extend_with_group, provide_gdd, provide_rgdd
from .theta import HostGraph, ThetaGraph, necessary_conditions, spectrum_membership, spectrum_residues
from .verify import verify_decomposition

__all__ = [
    "GDDRequest",
    "PlanStep",
    "ConstructionPlan",
    "Inflation",
    "inflate",
    "plan",
    "execute",
    "construct",
    "spectrum_table",
    "refusal_reason",
    "coverage_law",
    "TWO_PRIME_ROWS",
    "THETA12_ROWS",
    "THETA15_ROWS",
]


# ---------------------------------------------------------------------------
# GDD requests and inflation

@dataclass(frozen=True)
class GDDRequest:
    """Which GDD a step inflates.

    kind is one of ``complete`` (K_m as a 2-GDD 1^m), ``bipartite`` (K_{a,b}
    as a 2-GDD a^1 b^1), ``rgdd`` (k-RGDD k^u, optionally extended by
    ``extra`` new points), ``gdd`` (provide_gdd(K, type)).
    """

    kind: str
    K: tuple[int, ...] = ()
    type: str = ""
    sizes: tuple[int, ...] = ()
    extra: int = 0

    def label(self) -> str:
        if self.kind == "complete":
            return f"K{self.sizes[0]} as 2-GDD 1^{self.sizes[0]}"
        if self.kind == "bipartite":
            a, b = self.sizes
            return f"K({a},{b}) as 2-GDD {a}^1 {b}^1"
        ks = ",".join(map(str, self.K))
        k = f"{{{ks}}}" if len(self.K) > 1 else ks
        if self.kind == "rgdd":
            tail = f" + {self.extra} new points" if self.extra else ""
            return f"{k}-RGDD {self.type}{tail}"
        return f"{k}-GDD {self.type}"

    def provide(self) -> GDD:
        if self.kind == "complete":
            (m,) = self.sizes
            blocks = tuple((i, j) for j in range(m) for i in range(j))
            return GDD(m, tuple((x,) for x in range(m)), blocks, frozenset({2}))
        if self.kind == "bipartite":
            a, b = self.sizes
            blocks = tuple((i, a + j) for i in range(a) for j in range(b))
            return GDD(a + b, (tuple(range(a)), tuple(range(a, a + b))), blocks, frozenset({2}))
        if self.kind == "rgdd":
            r = provide_rgdd(self.K[0], self.type)
            return extend_with_group(r, self.extra) if self.extra else r.gdd
        return provide_gdd(set(self.K), self.type)


@dataclass
class Inflation:
    """Labels of an inflated GDD and the ingredient goals it produces."""

    order: int
    ranges: list[range]  # labels of each GDD point
    infinity: int | None  # label of the shared extra point
    blocks: list[tuple[int, ...]]  # GDD blocks
    groups: list[tuple[int, ...]]  # GDD groups
    weights: tuple[int, ...]

    def block_goals(self) -> list[tuple[int, ...]]:
        """Sorted part sizes of the multipartite graph each block becomes."""
        return [tuple(sorted(self.weights[x] for x in b)) for b in self.blocks]

    def overlay_goals(self) -> list[int]:
        """Order of the design overlaid on each inflated group."""
        extra = 0 if self.infinity is None else 1
        return [sum(self.weights[x] for x in g) + extra for g in self.groups]


def inflate(g: GDD, weights: Sequence[int] | int, inf: int = 0) -> Inflation:
    """Replace GDD point x by ``weights[x]`` new points, labelled consecutively.

    With ``inf`` = 1 the extra point gets the last label and joins every
    group overlay.
    """
    if isinstance(weights, int):
        weights = [weights] * g.point_count
    weights = tuple(int(w) for w in weights)
    if len(weights) != g.point_count or min(weights, default=1) <= 0:
        raise ValueError("need one positive weight per GDD point")
    ranges, start = [], 0
    for w in weights:
        ranges.append(range(start, start + w))
        start += w
    infinity = start if inf else None
    return Inflation(start + (1 if inf else 0), ranges, infinity, list(g.blocks), list(g.groups), weights)


# ---------------------------------------------------------------------------
# plans

@dataclass
class PlanStep:
    kind: str
    theta: ThetaGraph
    n: int
    params: tuple[tuple[str, object], ...] = ()
    gdd: GDDRequest | None = None
    weights: tuple[int, ...] = ()
    inf: int = 0
    children: dict[int, "PlanStep"] = field(default_factory=dict)
    ingredients: tuple[tuple[int, ...], ...] = ()

    @property
    def is_leaf(self) -> bool:
        return self.gdd is None

    def head(self) -> str:
        ps = " ".join(f"{k}={v}" for k, v in self.params)
        return f"K{self.n}: {self.kind}" + (f" {ps}" if ps else "")

    def walk(self) -> Iterator["PlanStep"]:
        yield self
        for c in self.children.values():
            yield from c.walk()


@dataclass
class ConstructionPlan:
    theta: ThetaGraph
    n: int
    root: PlanStep

    @property
    def host(self) -> HostGraph:
        return HostGraph.complete(self.n)

    def steps(self) -> Iterator[PlanStep]:
        return self.root.walk()

    def explain(self) -> str:
        lines: list[str] = [f"{self.theta} design of order {self.n}"]
        seen: set[int] = set()

        def emit(step: PlanStep, depth: int):
            pad = "  " * depth
            again = step.n in seen and not step.is_leaf
            lines.append(pad + step.head() + ("  (see above)" if again else ""))
            if again:
                return
            seen.add(step.n)
            if step.gdd is not None:
                w = _weights_label(step.weights)
                lines.append(f"{pad}  gdd: {step.gdd.label()}, weights {w}" + (", plus infinity" if step.inf else ""))
                hosts = ", ".join("K(" + ",".join(map(str, h)) + ")" for h in step.ingredients)
                lines.append(f"{pad}  blocks: {hosts}")
            for c in step.children.values():
                emit(c, depth + 1)

        emit(self.root, 0)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        def conv(step: PlanStep) -> dict:
            d = {"kind": step.kind, "n": step.n, "params": {k: v for k, v in step.params}}
            if step.gdd is not None:
                d["gdd"] = step.gdd.label()
                d["infinity"] = bool(step.inf)
                d["ingredients"] = [list(h) for h in step.ingredients]
                d["overlays"] = [conv(c) for c in step.children.values()]
            return d

        return {"theta": [self.theta.a, self.theta.b, self.theta.c], "n": self.n, "root": conv(self.root)}


def _weights_label(ws: Sequence[int]) -> str:
    out, i = [], 0
    while i < len(ws):
        j = i
        while j < len(ws) and ws[j] == ws[i]:
            j += 1
        out.append(f"{ws[i]}x{j - i}")
        i = j
    return " ".join(out)


# ---------------------------------------------------------------------------
# parameter tables

# (x, y, z, e) per row; n = 12pt + 4p + px + 3py + 4pz + e with e in {0, 1, f, f'}
TWO_PRIME_ROWS = (
    (0, 0, 0, "0"), (0, 0, 1, "0"), (0, 0, 2, "0"),
    (0, 0, 0, "1"), (0, 0, 1, "1"), (0, 0, 2, "1"),
    (1, 0, 1, "f"), (1, 0, 2, "f"), (1, 0, 3, "f"),
    (0, 1, 0, "f'"), (0, 1, 1, "f'"), (0, 1, 2, "f'"),
)

# (x, y, e); n = 48t + 24 + 8x + 24y + e
THETA12_ROWS = ((0, 0, 0), (0, 1, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1), (1, 2, 1), (2, 0, 0), (2, 1, 0))

# (w, e, minimum t); n = 30t + 15 + 5w + e
THETA15_ROWS = ((0, 0, 1), (3, 0, 1), (0, 1, 1), (3, 1, 1), (4, 1, 2), (7, 1, 3), (5, 0, 2), (8, 0, 3))

_TOWER = {10: (5, 2, 1, 2, (0, 3, 5)), 12: (4, 3, 2, 1, (0, 2, 4)), 14: (7, 2, 1, 2, (0, 3, 5))}
_ALT = ((15, 15, 0), (15, 15, 1), (15, 20, 1), (15, 25, 0))
_TWO_PRIME = {10: (5, 0), 14: (7, 1)}


def _two_prime_hypotheses(p: int, f: int) -> tuple[int, ...]:
    g = 1 - f
    return (3 * p + g, 4 * p, 4 * p + 1, 5 * p + f, 7 * p + g, 8 * p, 8 * p + 1, 9 * p + f, 11 * p + g, 13 * p + f)


_THETA12_HYP = (16, 24, 25, 33, 40, 49, 57, 81)
_THETA15_HYP = (15, 16, 21, 25, 30, 31, 36, 40, 51, 55, 66, 70)


@dataclass(frozen=True)
class _Candidate:
    """One way to build K_n as a Wilson step, before the overlays are planned."""

    rank: tuple
    kind: str
    params: tuple[tuple[str, object], ...]
    gdd: GDDRequest
    weights: tuple[int, ...]
    inf: int


def _rgdd(k: int, u: int, extra: int = 0) -> GDDRequest:
    return GDDRequest("rgdd", (k,), f"{k}^{u}", (), extra)


def _tower_candidates(e: int, n: int) -> list[_Candidate]:
    if e in _TOWER:
        d, r, s, f, gs = _TOWER[e]
    else:
        d, r, s, f, gs = e, 1, 1, 1, (0,)
    F, D = f * d * r * s, d * s
    out = []
    for gi, g in enumerate(gs):
        for inf in (0, 1):
            rem = n - g * D - inf
            if rem < 0 or rem % F:
                continue
            t = rem // F
            params = (("d", d), ("r", r), ("s", s), ("f", f), ("g", g), ("t", t), ("e", inf))
            if g == 0 and t >= 2:
                a, b = (t - 1) * f * s, f * r
            elif g > 0 and t >= 1:
                a, b = t * f * s, g
            else:
                continue
            req = GDDRequest("bipartite", (2,), "", (a, b))
            out.append(_Candidate((t, gi, inf), "BipartiteTower", params, req,
                                  (d * r,) * a + (d * s,) * b, inf))
    return out


def _alt_candidates(n: int) -> list[_Candidate]:
    out = []
    for i, (r, s, inf) in enumerate(_ALT):
        rem = n - s - inf
        if rem < 15 or rem % 15:
            continue
        t = rem // 15
        req = GDDRequest("complete", (2,), "", (t + 1,))
        out.append(_Candidate((t, i), "BipartiteAlt", (("r", r), ("s", s), ("e", inf), ("t", t)),
                              req, (r,) * t + (s,), inf))
    return out


def _prime_candidates(p: int, n: int) -> list[_Candidate]:
    out = []
    for inf in (0, 1):
        if (n - inf) % p or n - inf < 3 * p:
            continue
        t = (n - inf) // p
        params = (("p", p), ("t", t), ("e", inf))
        if t == 6:
            req = GDDRequest("gdd", (3,), "2^3")
        elif t == 8:
            req = GDDRequest("gdd", (3,), "2^4")
        else:
            req = GDDRequest("gdd", (3, 4, 5), f"1^{t}")
        out.append(_Candidate((t, inf), "PrimeTripartite", params, req, (p,) * t, inf))
    return out


def _two_prime_candidates(e: int, n: int) -> list[_Candidate]:
    p, f = _TWO_PRIME[e]
    fp = 1 - f
    evals = {"0": 0, "1": 1, "f": f, "f'": fp}
    out = []
    for i, (x, y, z, es) in enumerate(TWO_PRIME_ROWS):
        inf = evals[es]
        rem = n - 4 * p - p * x - 3 * p * y - 4 * p * z - inf
        if rem < 12 * p or rem % (12 * p):
            continue
        t = rem // (12 * p)
        w = x + y + z
        if w > 4 * t:
            continue
        u = 3 * t + 1
        params = (("p", p), ("f", f), ("x", x), ("y", y), ("z", z), ("w", w), ("t", t), ("e", inf))
        weights = (p,) * (4 * u) + (p,) * x + (3 * p,) * y + (4 * p,) * z
        out.append(_Candidate((0, t, i), "TwoPrimeTripartite", params, _rgdd(4, u, w), weights, inf))
    for inf in (0, 1):
        if n == 12 * p + inf:
            out.append(_Candidate((1, 0), "PatchCase", (("name", "12p+e"), ("p", p), ("e", inf)),
                                  GDDRequest("gdd", (3,), "2^3"), (2 * p,) * 6, inf))
    if n == 15 * p + fp:
        out.append(_Candidate((1, 1), "PatchCase", (("name", "15p+f'"), ("p", p), ("e", fp)),
                              GDDRequest("gdd", (4,), "3^5"), (p,) * 15, fp))
    if n == 17 * p + f:
        out.append(_Candidate((1, 2), "PatchCase", (("name", "17p+f"), ("p", p), ("e", f)),
                              GDDRequest("gdd", (4,), "1^4"), (4 * p, 4 * p, 4 * p, 5 * p), f))
    return out


def _theta12_candidates(n: int) -> list[_Candidate]:
    out = []
    for i, (x, y, inf) in enumerate(THETA12_ROWS):
        rem = n - 24 - 8 * x - 24 * y - inf
        if rem < 48 or rem % 48:
            continue
        t = rem // 48
        if x + y > 3 * t:
            continue
        u = 2 * t + 1
        params = (("x", x), ("y", y), ("t", t), ("e", inf))
        weights = (8,) * (3 * u) + (8,) * x + (24,) * y
        out.append(_Candidate((0, t, i), "Theta12Tower", params, _rgdd(3, u, x + y), weights, inf))
    for j, (m, tp) in enumerate(((48, "2^3"), (64, "2^4"))):
        if n == m:
            out.append(_Candidate((1, j), "PatchCase", (("name", str(m)),),
                                  GDDRequest("gdd", (3,), tp), (8,) * (3 if m == 48 else 4) * 2, 0))
    return out


_THETA15_PATCHES = {
    81: ("4^4", 1),
    85: ("3^4 5^1", 0),
    111: ("4^4 6^1", 1),
    115: ("3^1 5^4", 0),
}


def _theta15_candidates(n: int) -> list[_Candidate]:
    out = []
    for i, (w, inf, tmin) in enumerate(THETA15_ROWS):
        rem = n - 15 - 5 * w - inf
        if rem < 30 or rem % 30:
            continue
        t = rem // 30
        if t < tmin or w > 3 * t:
            continue
        u = 2 * t + 1
        out.append(_Candidate((0, t, i), "Theta15Tower", (("w", w), ("t", t), ("e", inf)),
                              _rgdd(3, u, w), (5,) * (3 * u + w), inf))
    if n in _THETA15_PATCHES:
        tp, inf = _THETA15_PATCHES[n]
        pts = (n - inf) // 5
        out.append(_Candidate((1, sorted(_THETA15_PATCHES).index(n)), "PatchCase", (("name", str(n)),),
                              GDDRequest("gdd", (3,), tp), (5,) * pts, inf))
    return out


def _candidates(theta: ThetaGraph, n: int) -> list[_Candidate]:
    e = theta.e
    if theta.bipartite:
        return _alt_candidates(n) if e == 15 else _tower_candidates(e, n)
    if e in (11, 13):
        return _prime_candidates(e, n)
    if e in (10, 14):
        return _two_prime_candidates(e, n)
    if e == 12:
        return _theta12_candidates(n)
    if e == 15:
        return _theta15_candidates(n)
    raise PlanningFailure(f"no construction for {e}-edge thetas")


def _ingredient_hosts(req: GDDRequest, weights: tuple[int, ...]) -> tuple[list[tuple[int, ...]], list[int]]:
    """(distinct sorted block part sizes, group weight sums) for a request, computed arithmetically."""
    sizes_of = lambda pts: tuple(sorted(weights[x] for x in pts))
    if req.kind == "complete":
        (m,) = req.sizes
        hosts = {sizes_of((i, j)) for j in range(m) for i in range(j)}
        groups = [weights[x] for x in range(m)]
        return sorted(hosts), groups
    if req.kind == "bipartite":
        a, b = req.sizes
        return [tuple(sorted((weights[0], weights[a])))], [sum(weights[:a]), sum(weights[a:])]
    if req.kind == "rgdd":
        k = req.K[0]
        u = int(req.type.split("^")[1])
        base = k * u
        w0 = weights[0]
        groups = [k * w0] * u
        hosts = {(w0,) * k}
        if req.extra:
            new = weights[base:]
            groups.append(sum(new))
            hosts |= {tuple(sorted((w0,) * k + (x,))) for x in new}
        return sorted(hosts), groups
    # general GDD: uniform weight except the trivial one-block case
    from .gdd import parse_type

    tv = parse_type(req.type)
    sizes = [g for g, c in tv for _ in range(c)]
    if len(set(weights)) == 1:
        # a mixed K lists every size it allows; the built design may use fewer
        w = weights[0]
        return [(w,) * k for k in sorted(req.K)], [g * w for g in sizes]
    # one block over singleton groups
    return [tuple(sorted(weights))], list(weights)


# ---------------------------------------------------------------------------
# planning

def _leaf(theta: ThetaGraph, n: int) -> PlanStep | None:
    if n <= 1:
        return PlanStep("Empty", theta, n)
    if (theta, HostGraph.complete(n)) in builtin_catalogue():
        return PlanStep("CatalogueLeaf", theta, n)
    if n == 2 * theta.e + 1:
        return PlanStep("SearchLeaf", theta, n, (("action", f"+1 mod {n}"),))
    return None


def _plan(theta: ThetaGraph, n: int, memo: dict[int, PlanStep]) -> PlanStep:
    if n in memo:
        return memo[n]
    if not spectrum_membership(theta, n):
        raise PlanningFailure(f"ingredient order {n} is outside the spectrum of {theta}")
    step = _leaf(theta, n)
    if step is None:
        cands = sorted(_candidates(theta, n), key=lambda c: c.rank)
        if not cands:
            raise PlanningFailure(f"no construction covers {theta} at order {n}")
        c = cands[0]
        hosts, group_orders = _ingredient_hosts(c.gdd, c.weights)
        step = PlanStep(c.kind, theta, n, c.params, c.gdd, c.weights, c.inf, {}, tuple(hosts))
        for m in sorted(set(g + c.inf for g in group_orders)):
            if m >= n:
                raise PlanningFailure(f"overlay order {m} does not shrink {n}")
            step.children[m] = _plan(theta, m, memo)
    memo[n] = step
    return step


def plan(theta: ThetaGraph, n: int) -> ConstructionPlan:
    """Deterministic construction plan for a design of order n."""
    if not spectrum_membership(theta, n):
        raise NotInSpectrum(f"no {theta} design of order {n}: {refusal_reason(theta, n)}")
    return ConstructionPlan(theta, n, _plan(theta, n, {}))


def refusal_reason(theta: ThetaGraph, n: int) -> str:
    """Why order n is impossible, or '' if it is in the spectrum."""
    if spectrum_membership(theta, n):
        return ""
    e = theta.e
    if not necessary_conditions(theta, n):
        if n < e - 1:
            return f"K{n} has fewer than {e - 1} vertices"
        return f"n(n-1) = {n * (n - 1)} is not divisible by {2 * e}"
    return f"order {n} is a known exception for {e}-edge thetas"


# ---------------------------------------------------------------------------
# execution

class _Executor:
    def __init__(self, theta: ThetaGraph, jobs: int = 1):
        self.theta = theta
        self.jobs = max(1, int(jobs))
        self.done: dict[int, np.ndarray] = {}
        self.entries: dict[tuple[int, ...], tuple[np.ndarray, list[list[int]]]] = {}
        self.lock = threading.Lock()

    def ingredient(self, sizes: tuple[int, ...]) -> tuple[np.ndarray, list[list[int]]]:
        """Blocks of a multipartite ingredient with its parts listed in increasing size."""
        hit = self.entries.get(sizes)
        if hit is None:
            try:
                entry = lookup(self.theta, HostGraph.multipartite(sizes))
            except NotFound as exc:
                raise IngredientMissing(str(exc)) from None
            host = entry.host
            parts = sorted((list(p) for p in host.parts), key=len)
            hit = (entry.decomposition.block_array(), parts)
            self.entries[sizes] = hit
        return hit

    def leaf(self, step: PlanStep) -> np.ndarray:
        v = self.theta.vertex_count
        if step.kind == "Empty":
            return np.zeros((0, v), dtype=np.int64)
        if step.kind == "CatalogueLeaf":
            entry = builtin_catalogue().lookup(self.theta, HostGraph.complete(step.n))
            return entry.decomposition.block_array()
        from .search import find_cyclic

        try:
            return find_cyclic(self.theta, step.n).block_array()
        except BudgetExhausted as exc:
            raise IngredientMissing(f"order {step.n} design of {self.theta}: {exc}") from exc

    def prefetch(self, root: PlanStep) -> None:
        """Resolve GDDs and search leaves of the tree in parallel."""
        jobs: list[Callable] = []
        seen: set[int] = set()
        for s in root.walk():
            if s.n in seen:
                continue
            seen.add(s.n)
            if s.kind == "SearchLeaf":
                jobs.append(lambda s=s: self.leaf(s))
            elif s.gdd is not None:
                jobs.append(s.gdd.provide)
        with ThreadPoolExecutor(self.jobs) as pool:
            for fut in [pool.submit(j) for j in jobs]:
                try:
                    fut.result()
                except (Unprovidable, IngredientMissing):
                    pass  # reported again, in order, during assembly

    def build(self, step: PlanStep) -> np.ndarray:
        hit = self.done.get(step.n)
        if hit is not None:
            return hit
        if step.is_leaf:
            out = self.leaf(step)
        else:
            out = self.wilson(step)
            self.check(step.n, out, step.head())
        self.done[step.n] = out
        return out

    def wilson(self, step: PlanStep) -> np.ndarray:
        try:
            g = step.gdd.provide()
        except Unprovidable as exc:
            raise IngredientMissing(f"{step.gdd.label()}: {exc}") from exc
        inf = inflate(g, step.weights, step.inf)
        if inf.order != step.n:
            raise VerificationFailure(f"{step.head()}: inflation gives order {inf.order}")
        pieces = []
        for b in inf.blocks:
            order = sorted(b, key=lambda x: (inf.weights[x], x))
            sizes = tuple(inf.weights[x] for x in order)
            arr, parts = self.ingredient(sizes)
            labels = np.empty(sum(sizes), dtype=np.int64)
            for part, x in zip(parts, order):
                labels[part] = np.fromiter(inf.ranges[x], dtype=np.int64, count=len(part))
            pieces.append(labels[arr])
        for grp in inf.groups:
            pts = [p for x in grp for p in inf.ranges[x]]
            if inf.infinity is not None:
                pts.append(inf.infinity)
            sub = self.build(step.children[len(pts)])
            if len(sub):
                pieces.append(np.asarray(pts, dtype=np.int64)[sub])
        v = self.theta.vertex_count
        return np.concatenate(pieces) if pieces else np.zeros((0, v), dtype=np.int64)

    def check(self, n: int, blocks: np.ndarray, what: str) -> None:
        d = Decomposition.explicit(self.theta, HostGraph.complete(n), blocks.tolist())
        cert = verify_decomposition(d)
        if not cert.accepted:
            raise VerificationFailure(f"{what}: self-check failed: {cert.violations[:3]}")


_cache_lock = threading.Lock()
_results: dict[tuple[ThetaGraph, int], np.ndarray] = {}


def execute(p: ConstructionPlan, jobs: int = 1) -> Decomposition:
    """Carry out a plan; the result is an explicit, verified decomposition of K_n."""
    with _cache_lock:
        hit = _results.get((p.theta, p.n))
    if hit is None:
        ex = _Executor(p.theta, jobs)
        with _cache_lock:
            for (th, m), arr in _results.items():
                if th == p.theta:
                    ex.done[m] = arr
        if jobs > 1:
            ex.prefetch(p.root)
        hit = ex.build(p.root)
        if p.root.is_leaf:
            ex.check(p.n, hit, p.root.head())
        with _cache_lock:
            for m, arr in ex.done.items():
                _results.setdefault((p.theta, m), arr)
    return Decomposition.explicit(p.theta, HostGraph.complete(p.n), hit.tolist())


def construct(theta: ThetaGraph, n: int, jobs: int = 1) -> Decomposition:
    return execute(plan(theta, n), jobs)


def clear_results() -> None:
    with _cache_lock:
        _results.clear()


def spectrum_table(theta: ThetaGraph, n_max: int, build: bool = True) -> list[tuple[int, bool]]:
    """(n, constructible) for 0 <= n <= n_max.

    With ``build`` every in-spectrum order is actually constructed and
    verified; otherwise only the plan is made.
    """
    out = []
    for n in range(n_max + 1):
        ok = spectrum_membership(theta, n)
        if ok:
            try:
                pl = plan(theta, n)
                if build:
                    execute(pl)
            except (PlanningFailure, IngredientMissing, VerificationFailure):
                ok = False
        out.append((n, ok))
    return out


# ---------------------------------------------------------------------------
# coverage laws

def _claimed(mod: int, residues: Sequence[int], excluded: Sequence[int], n_max: int) -> set[int]:
    return {n for n in range(n_max + 1) if n % mod in residues and n not in excluded}


def coverage_law(family: str, n_max: int = 2000) -> tuple[set[int], set[int]]:
    """(orders reached by rows + hypotheses + patches + {0, 1}, orders claimed) up to n_max.

    ``family`` is ``two-prime-5``, ``two-prime-7``, ``theta12`` or ``theta15``.
    Pure arithmetic: nothing is constructed.
    """
    got: set[int] = {0, 1}
    if family.startswith("two-prime-"):
        p = int(family.rsplit("-", 1)[1])
        f = 0 if p == 5 else 1
        fp = 1 - f
        evals = {"0": 0, "1": 1, "f": f, "f'": fp}
        got |= set(_two_prime_hypotheses(p, f))
        for x, y, z, es in TWO_PRIME_ROWS:
            t = 1
            while True:
                n = 12 * p * t + 4 * p + p * x + 3 * p * y + 4 * p * z + evals[es]
                if n > n_max:
                    break
                if x + y + z <= 4 * t:
                    got.add(n)
                t += 1
        got |= {12 * p, 12 * p + 1, 15 * p + fp, 17 * p + f}
        claimed = _claimed(4 * p, (0, 1, p + f, 3 * p + fp), (p + f,), n_max)
    elif family == "theta12":
        got |= set(_THETA12_HYP)
        for x, y, e in THETA12_ROWS:
            t = 1
            while 48 * t + 24 + 8 * x + 24 * y + e <= n_max:
                if x + y <= 3 * t:
                    got.add(48 * t + 24 + 8 * x + 24 * y + e)
                t += 1
        got |= {48, 64}
        mod, res, exc = spectrum_residues(12)
        claimed = _claimed(mod, res, exc, n_max)
    elif family == "theta15":
        got |= set(_THETA15_HYP)
        for w, e, tmin in THETA15_ROWS:
            t = tmin
            while 30 * t + 15 + 5 * w + e <= n_max:
                if w <= 3 * t:
                    got.add(30 * t + 15 + 5 * w + e)
                t += 1
        got |= set(_THETA15_PATCHES)
        mod, res, exc = spectrum_residues(15)
        claimed = _claimed(mod, res, exc, n_max)
    else:
        raise ValueError(f"unknown family {family!r}")
    return {n for n in got if n <= n_max}, claimed
