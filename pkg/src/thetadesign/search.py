"""Randomized local search for base blocks under a prescribed group action.

A state is a list of base blocks; the first ``developed_count`` are expanded
through the full orbit of the action, the rest are used once.  The cost is
the total deviation of edge multiplicities from the host (1 on host edges,
0 elsewhere), so a cost of 0 is exactly a decomposition.  Moves replace one
vertex of one block by the point that minimises the cost change; only
improving and sideways moves are kept and a restart is triggered when the
cost stops falling.
"""
from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .action import Decomposition, GroupAction, order
from .catalogue import CatalogueEntry, derived_catalogue, save_derived
from .errors import BudgetExhausted, InfeasibleArity, MalformedBlock, NotFound
from .theta import HostGraph, ThetaGraph, copy_counts, edge_template

__all__ = [
    "DEFAULT_RESTARTS",
    "DEFAULT_STEPS",
    "SearchProblem",
    "search",
    "resume",
    "cyclic_problem",
    "find_cyclic",
]

DEFAULT_RESTARTS = 64
DEFAULT_STEPS = 200_000


@dataclass(frozen=True)
class SearchProblem:
    theta: ThetaGraph
    host: HostGraph
    action: GroupAction
    developed_count: int
    fixed_count: int = 0
    restarts: int = DEFAULT_RESTARTS
    steps: int = DEFAULT_STEPS
    seed: int | None = None
    jobs: int = 1
    stall: int | None = None
    _orbit: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.action.point_count != self.host.n:
            raise InfeasibleArity(f"action acts on {self.action.point_count} points, host has {self.host.n}")
        if self.developed_count < 0 or self.fixed_count < 0:
            raise InfeasibleArity("block counts must be non-negative")
        t = order(self.action)
        object.__setattr__(self, "_orbit", t)
        need = copy_counts(self.theta.e, self.host)
        have = self.developed_count * t + self.fixed_count
        if have != need:
            raise InfeasibleArity(
                f"{self.developed_count} x {t} + {self.fixed_count} = {have} blocks, "
                f"but {self.host.label()} needs {need} copies of {self.theta}")

    @property
    def block_count(self) -> int:
        return self.developed_count + self.fixed_count

    def base_seed(self) -> int:
        if self.seed is not None:
            return int(self.seed)
        key = (str(self.theta), self.host.label(), self.host.parts, str(self.action),
               self.developed_count, self.fixed_count)
        return int.from_bytes(hashlib.sha256(repr(key).encode()).digest()[:8], "little")

    def restart_seed(self, index: int) -> int:
        h = hashlib.sha256(f"{self.base_seed()}:{index}".encode()).digest()
        return int.from_bytes(h[:8], "little") or 1


class _Arrays:
    """Kernel inputs shared by every restart of one problem."""

    def __init__(self, p: SearchProblem):
        v = p.theta.vertex_count
        tmpl = edge_template(p.theta)
        self.v = v
        self.powers = np.ascontiguousarray(p.action.power_table(), dtype=np.int32)
        self.target = np.ascontiguousarray(p.host.edge_mask(), dtype=np.uint8)
        self.tmpl_i = np.asarray([i for i, _ in tmpl], dtype=np.int32)
        self.tmpl_j = np.asarray([j for _, j in tmpl], dtype=np.int32)
        inc: list[list[int]] = [[] for _ in range(v)]
        for k, (i, j) in enumerate(tmpl):
            inc[i].append(k)
            inc[j].append(k)
        self.inc_ptr = np.asarray(np.cumsum([0] + [len(x) for x in inc]), dtype=np.int32)
        self.inc_edge = np.asarray([k for x in inc for k in x], dtype=np.int32)


def _random_blocks(p: SearchProblem, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = p.theta.vertex_count
    out = np.empty((p.block_count, v), dtype=np.int32)
    for b in range(p.block_count):
        out[b] = rng.choice(p.host.n, size=v, replace=False)
    return out


def _check_warm(p: SearchProblem, warm: Sequence[Sequence[int]]) -> np.ndarray:
    v = p.theta.vertex_count
    if len(warm) != p.block_count:
        raise InfeasibleArity(f"warm start has {len(warm)} blocks, problem needs {p.block_count}")
    arr = np.asarray([tuple(b) for b in warm], dtype=np.int64).reshape(-1, v) if warm else \
        np.zeros((0, v), dtype=np.int64)
    for b in arr:
        if len(set(b.tolist())) != v or b.min() < 0 or b.max() >= p.host.n:
            raise MalformedBlock(f"warm-start block {b.tolist()} is not {v} distinct points of the host")
    return np.ascontiguousarray(arr, dtype=np.int32)


def _run(p: SearchProblem, arrays: _Arrays, blocks: np.ndarray, seed: int) -> tuple[int, np.ndarray]:
    stall = p.stall if p.stall is not None else max(20_000, p.steps // 4)
    blocks = np.ascontiguousarray(blocks, dtype=np.int32)
    if p.block_count == 0:
        return int(arrays.target.sum()), blocks
    cost, _ = kernels.local_search(blocks, p.developed_count, arrays.powers, arrays.target,
                                   arrays.tmpl_i, arrays.tmpl_j, arrays.inc_ptr, arrays.inc_edge,
                                   seed, p.steps, stall)
    return int(cost), blocks


def _decomposition(p: SearchProblem, blocks: np.ndarray) -> Decomposition:
    return Decomposition(p.theta, p.host, p.action, tuple(map(tuple, blocks.tolist())), p.developed_count)


def _solve(p: SearchProblem, warm: np.ndarray | None) -> Decomposition:
    from .verify import verify_decomposition

    if p.restarts <= 0 or p.steps < 0:
        raise BudgetExhausted("search budget is zero", None)
    arrays = _Arrays(p)
    best = None

    def attempt(index: int):
        seed = p.restart_seed(index)
        start = warm if (index == 0 and warm is not None) else _random_blocks(p, seed)
        return _run(p, arrays, start.copy(), seed)

    jobs = max(1, int(p.jobs))
    pool = ThreadPoolExecutor(jobs) if jobs > 1 else None
    try:
        for lo in range(0, p.restarts, jobs):
            idx = range(lo, min(lo + jobs, p.restarts))
            results = list(pool.map(attempt, idx)) if pool else [attempt(i) for i in idx]
            # the lowest successful restart index wins, whatever finished first
            for cost, blocks in results:
                if cost == 0:
                    d = _decomposition(p, blocks)
                    if verify_decomposition(d).accepted:
                        return d
                if best is None or cost < best:
                    best = cost
    finally:
        if pool:
            pool.shutdown()
    raise BudgetExhausted(
        f"no decomposition of {p.host.label()} into {p.theta} after {p.restarts} restarts "
        f"x {p.steps} moves (best cost {best})", best)


def search(p: SearchProblem) -> Decomposition:
    """Run restarts from random states until one reaches cost 0; verified before return."""
    return _solve(p, None)


def resume(p: SearchProblem, warm_start: Sequence[Sequence[int]]) -> Decomposition:
    """Like ``search`` but the first restart starts from ``warm_start``."""
    return _solve(p, _check_warm(p, warm_start))


def cyclic_problem(theta: ThetaGraph, n: int | None = None, **kw) -> SearchProblem:
    """One base block developed under x -> x+1 mod n (default n = 2e+1)."""
    n = 2 * theta.e + 1 if n is None else n
    need = copy_counts(theta.e, HostGraph.complete(n))
    if need % n:
        raise InfeasibleArity(f"K{n} needs {need} copies of {theta}, not a multiple of {n}")
    return SearchProblem(theta, HostGraph.complete(n), GroupAction.cyclic(n), need // n, 0, **kw)


def find_cyclic(theta: ThetaGraph, n: int | None = None, save: bool = True, **kw) -> Decomposition:
    """Cached cyclic decomposition of K_n, searching and saving it when absent."""
    p = cyclic_problem(theta, n, **kw)
    try:
        return derived_catalogue().lookup(theta, p.host).decomposition
    except NotFound:
        pass
    d = search(p)
    if save:
        note = f"search seed={p.base_seed()} budget={p.restarts}x{p.steps}"
        save_derived(CatalogueEntry(d, note))
    return d
