"""Theta graphs, their tuple encoding, host graphs and the counting arithmetic.

A theta graph ``theta(a,b,c)`` is two degree-3 vertices joined by three
internally disjoint paths with ``a``, ``b`` and ``c`` edges.  A copy of it
inside a host graph is written as an ordered tuple of ``a+b+c-1`` points
``(v1, v2, ...)``; ``v1`` and ``v2`` are the branch vertices and the interior
vertices of the three paths follow in order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidTheta, MalformedBlock, NotDivisible, UnsupportedEdgeCount

__all__ = [
    "ThetaGraph",
    "ThetaBlock",
    "HostGraph",
    "make_theta",
    "parse_theta",
    "enumerate_thetas",
    "theta_count",
    "bipartite_theta_count",
    "block_edges",
    "edge_template",
    "necessary_conditions",
    "spectrum_membership",
    "spectrum_residues",
    "copy_counts",
    "pair_index",
    "pair_from_index",
]


@dataclass(frozen=True, order=True)
class ThetaGraph:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if not (1 <= self.a <= self.b <= self.c) or self.b < 2:
            raise InvalidTheta(f"theta({self.a},{self.b},{self.c}) needs 1 <= a <= b <= c and b >= 2")

    @property
    def e(self) -> int:
        return self.a + self.b + self.c

    edge_count = e

    @property
    def vertex_count(self) -> int:
        return self.a + self.b + self.c - 1

    @property
    def bipartite(self) -> bool:
        return self.a % 2 == self.b % 2 == self.c % 2

    def __str__(self) -> str:
        return f"theta({self.a},{self.b},{self.c})"


def make_theta(a: int, b: int, c: int) -> ThetaGraph:
    return ThetaGraph(int(a), int(b), int(c))


_THETA_RE = re.compile(r"^\s*theta\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")


def parse_theta(text: str) -> ThetaGraph:
    m = _THETA_RE.match(text)
    if not m:
        raise InvalidTheta(f"cannot parse theta graph {text!r}")
    return make_theta(*map(int, m.groups()))


def enumerate_thetas(e: int) -> list[ThetaGraph]:
    """All theta graphs with ``e`` edges in lexicographic ``(a, b, c)`` order."""
    out = []
    for a in range(1, e + 1):
        for b in range(max(a, 2), e + 1):
            c = e - a - b
            if c < b:
                break
            out.append(ThetaGraph(a, b, c))
    return out


def theta_count(e: int) -> int:
    """Closed form floor(e^2/12 - 1/2) for the number of theta graphs."""
    return max(0, (e * e - 6) // 12)


def bipartite_theta_count(e: int) -> int:
    """Closed form floor(e^2/48 + (e mod 2)(e-8)/8 + 1/2)."""
    return max(0, (e * e + 6 * (e % 2) * (e - 8) + 24) // 48)


@dataclass(frozen=True)
class ThetaBlock:
    theta: ThetaGraph
    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        if len(self.vertices) != self.theta.vertex_count:
            raise MalformedBlock(
                f"{self.theta} needs {self.theta.vertex_count} vertices, got {len(self.vertices)}")
        if len(set(self.vertices)) != len(self.vertices):
            raise MalformedBlock(f"repeated vertex in {self.vertices}")

    def edges(self) -> list[tuple[int, int]]:
        return block_edges(self)


_TEMPLATES: dict[ThetaGraph, tuple[tuple[int, int], ...]] = {}


def edge_template(theta: ThetaGraph) -> tuple[tuple[int, int], ...]:
    """Edges of a theta block as pairs of tuple positions (0-based)."""
    t = _TEMPLATES.get(theta)
    if t is not None:
        return t
    a, b, c = theta.a, theta.b, theta.c
    # positions: 0 -> v1, 1 -> v2, interior vertices follow path by path
    paths = [
        [0] + list(range(2, a + 1)) + [1],
        [0] + list(range(a + 1, a + b)) + [1],
        [0] + list(range(a + b, a + b + c - 1)) + [1],
    ]
    t = tuple((p[i], p[i + 1]) for p in paths for i in range(len(p) - 1))
    assert len(t) == theta.e
    _TEMPLATES[theta] = t
    return t


def block_edges(block: ThetaBlock | tuple[ThetaGraph, Sequence[int]]) -> list[tuple[int, int]]:
    """Unordered host edges covered by one theta block, path by path."""
    if not isinstance(block, ThetaBlock):
        block = ThetaBlock(*block)
    v = block.vertices
    out = []
    for i, j in edge_template(block.theta):
        x, y = v[i], v[j]
        out.append((x, y) if x < y else (y, x))
    return out


def pair_index(u, v):
    """Dense index of the unordered pair {u, v}; works elementwise on arrays."""
    if isinstance(u, np.ndarray) or isinstance(v, np.ndarray):
        lo = np.minimum(u, v).astype(np.int64)
        hi = np.maximum(u, v).astype(np.int64)
        return hi * (hi - 1) // 2 + lo
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def pair_from_index(i: int) -> tuple[int, int]:
    v = int((1 + (1 + 8 * i) ** 0.5) // 2)
    while v * (v - 1) // 2 > i:
        v -= 1
    while (v + 1) * v // 2 <= i:
        v += 1
    return i - v * (v - 1) // 2, v


_HOST_RE = re.compile(r"^\s*K\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)\s*$")


@dataclass(frozen=True)
class HostGraph:
    """Complete graph K(n), or complete multipartite K(g1,...,gr) with explicit parts.

    ``parts`` is ``None`` for a complete graph.  For a multipartite host it is
    a tuple of point tuples in declared order; every point 0..n-1 lies in
    exactly one part.
    """

    n: int
    parts: tuple[tuple[int, ...], ...] | None = None
    _part_of: tuple[int, ...] | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative order")
        if self.parts is not None:
            parts = tuple(tuple(int(x) for x in p) for p in self.parts)
            object.__setattr__(self, "parts", parts)
            part_of = [-1] * self.n
            for i, p in enumerate(parts):
                for x in p:
                    if not 0 <= x < self.n or part_of[x] != -1:
                        raise ValueError(f"parts do not partition 0..{self.n - 1}")
                    part_of[x] = i
            if -1 in part_of:
                raise ValueError(f"parts do not partition 0..{self.n - 1}")
            object.__setattr__(self, "_part_of", tuple(part_of))

    @classmethod
    def complete(cls, n: int) -> "HostGraph":
        return cls(n)

    @classmethod
    def multipartite(cls, sizes: Sequence[int]) -> "HostGraph":
        """Consecutive parts: the first ``sizes[0]`` points form part 0, and so on."""
        parts, start = [], 0
        for g in sizes:
            parts.append(tuple(range(start, start + g)))
            start += g
        return cls(start, tuple(parts))

    @property
    def is_complete(self) -> bool:
        return self.parts is None

    @property
    def part_sizes(self) -> tuple[int, ...]:
        if self.parts is None:
            return (self.n,)
        return tuple(len(p) for p in self.parts)

    @property
    def part_of(self) -> tuple[int, ...]:
        # a complete graph behaves like n singleton parts
        if self._part_of is None:
            return tuple(range(self.n))
        return self._part_of

    @property
    def edge_count(self) -> int:
        if self.parts is None:
            return self.n * (self.n - 1) // 2
        sizes = self.part_sizes
        total = sum(sizes)
        return (total * total - sum(g * g for g in sizes)) // 2

    def is_edge(self, u: int, v: int) -> bool:
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            return False
        return self.parts is None or self._part_of[u] != self._part_of[v]

    def edge_mask(self) -> np.ndarray:
        """Boolean array over all pair indices of K(n): True where the pair is a host edge."""
        n = self.n
        total = n * (n - 1) // 2
        if self.parts is None:
            return np.ones(total, dtype=bool)
        part = np.asarray(self._part_of, dtype=np.int64)
        hi, lo = _all_pairs(n)
        return part[hi] != part[lo]

    def edges(self) -> np.ndarray:
        """Sorted array of the pair indices that are host edges."""
        return np.flatnonzero(self.edge_mask()).astype(np.int64)

    def key(self) -> tuple:
        """Isomorphism key: complete order, or the sorted multiset of part sizes."""
        if self.parts is None:
            return ("K", self.n)
        return ("M",) + tuple(sorted(self.part_sizes))

    def label(self) -> str:
        if self.parts is None:
            return f"K({self.n})"
        return "K(" + ",".join(str(g) for g in self.part_sizes) + ")"

    __str__ = label


def _all_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(hi, lo) arrays such that pair index i is {lo[i], hi[i]}."""
    if n < 2:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    hi = np.repeat(np.arange(n, dtype=np.int64), np.arange(n, dtype=np.int64))
    lo = np.arange(n * (n - 1) // 2, dtype=np.int64) - hi * (hi - 1) // 2
    return hi, lo


def parse_host_label(text: str) -> tuple[int, ...]:
    m = _HOST_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse host {text!r}")
    return tuple(int(x) for x in m.group(1).split(","))


def necessary_conditions(theta: ThetaGraph, n: int) -> bool:
    """n <= 1, or n >= e-1 with n(n-1) divisible by 2e."""
    e = theta.e
    if n <= 1:
        return True
    return n >= e - 1 and (n * (n - 1)) % (2 * e) == 0


# residues and exceptional orders of the design spectra for 10..15 edges
_SPECTRA = {
    10: (20, (0, 1, 5, 16), (5,)),
    11: (11, (0, 1), ()),
    12: (24, (0, 1, 9, 16), (9,)),
    13: (13, (0, 1), ()),
    14: (28, (0, 1, 8, 21), (8,)),
    15: (15, (0, 1, 6, 10), (6, 10)),
}


def spectrum_residues(e: int) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """(modulus, residues, exceptions) of the spectrum for ``e`` in 10..15."""
    try:
        return _SPECTRA[e]
    except KeyError:
        raise UnsupportedEdgeCount(f"spectrum known only for 10..15 edges, not {e}") from None


def spectrum_membership(theta: ThetaGraph, n: int) -> bool:
    mod, residues, exceptions = spectrum_residues(theta.e)
    if n < 0:
        return False
    if n in (0, 1):
        return True
    return n % mod in residues and n not in exceptions


def copy_counts(e: int, host: HostGraph) -> int:
    edges = host.edge_count
    if e <= 0 or edges % e:
        raise NotDivisible(f"{edges} host edges are not divisible by {e}")
    return edges // e


def iter_pairs(points: Iterable[int]):
    pts = list(points)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            yield pts[i], pts[j]
