"""Point permutations built from residue wheels, and orbit development of base blocks."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import UnknownPoint
from .theta import HostGraph, ThetaBlock, ThetaGraph

__all__ = ["Segment", "GroupAction", "Decomposition", "apply", "order", "develop", "parse_action"]


@dataclass(frozen=True)
class Segment:
    """x -> start + ((x - start + step) mod length) on start..start+length-1."""

    start: int
    length: int
    step: int

    def __post_init__(self):
        if self.length < 1 or not 0 <= self.step < self.length:
            raise ValueError(f"bad wheel segment {self}")

    @property
    def stop(self) -> int:
        return self.start + self.length

    @property
    def order(self) -> int:
        return self.length // math.gcd(self.step, self.length)

    def __str__(self) -> str:
        return f"({self.start}..{self.stop - 1} +{self.step})"


@dataclass(frozen=True)
class GroupAction:
    segments: tuple[Segment, ...] = ()
    fixed_points: tuple[int, ...] = ()
    _image: tuple[int, ...] = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        segs = tuple(self.segments)
        fixed = tuple(int(x) for x in self.fixed_points)
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "fixed_points", fixed)
        n = self.point_count
        image = [-1] * n
        for s in segs:
            for x in range(s.start, s.stop):
                if not 0 <= x < n or image[x] != -1:
                    raise ValueError("segments and fixed points overlap or leave gaps")
                image[x] = s.start + (x - s.start + s.step) % s.length
        for x in fixed:
            if not 0 <= x < n or image[x] != -1:
                raise ValueError("segments and fixed points overlap or leave gaps")
            image[x] = x
        if -1 in image:
            raise ValueError("segments and fixed points do not cover 0..n-1")
        object.__setattr__(self, "_image", tuple(image))

    @classmethod
    def cyclic(cls, n: int, step: int = 1) -> "GroupAction":
        return cls((Segment(0, n, step % n),)) if n else cls()

    @classmethod
    def identity(cls, n: int) -> "GroupAction":
        return cls((), tuple(range(n)))

    @property
    def point_count(self) -> int:
        return sum(s.length for s in self.segments) + len(self.fixed_points)

    @property
    def image(self) -> tuple[int, ...]:
        return self._image

    def __call__(self, p: int) -> int:
        return apply(self, p)

    def power_table(self, t: int | None = None) -> np.ndarray:
        """Row i holds the images of every point under the i-th power of the action."""
        t = order(self) if t is None else t
        n = self.point_count
        table = np.empty((t, n), dtype=np.int32)
        img = np.asarray(self._image, dtype=np.int32)
        cur = np.arange(n, dtype=np.int32)
        for i in range(t):
            table[i] = cur
            cur = img[cur]
        return table

    def __str__(self) -> str:
        parts = []
        if self.segments:
            parts.append("act: " + ",".join(str(s) for s in self.segments))
        if self.fixed_points:
            parts.append("fix: " + " ".join(str(x) for x in self.fixed_points))
        return "; ".join(parts) or "identity"


def apply(action: GroupAction, p: int) -> int:
    if not 0 <= p < len(action.image):
        raise UnknownPoint(p)
    return action.image[p]


def order(action: GroupAction) -> int:
    """Least t >= 1 with the t-fold action equal to the identity."""
    t = 1
    for s in action.segments:
        t = math.lcm(t, s.order)
    return t


_SEG_RE = re.compile(r"\(\s*(\d+)\s*\.\.\s*(\d+)\s*\+\s*(\d+)\s*\)")


def parse_action(act: str = "", fix: str = "") -> GroupAction:
    """Build an action from catalogue syntax, e.g. ``"(0..14 +5)"`` and ``"15"``."""
    segs = []
    rest = act.strip()
    pos = 0
    while pos < len(rest):
        m = _SEG_RE.match(rest, pos)
        if not m:
            raise ValueError(f"bad action segment at {rest[pos:]!r}")
        lo, hi, step = map(int, m.groups())
        if hi < lo:
            raise ValueError(f"empty segment {m.group(0)}")
        segs.append(Segment(lo, hi - lo + 1, step))
        pos = m.end()
        while pos < len(rest) and rest[pos] in ", ":
            pos += 1
    fixed = []
    for tok in fix.replace(",", " ").split():
        if ".." in tok:
            lo, hi = tok.split("..")
            fixed.extend(range(int(lo), int(hi) + 1))
        else:
            fixed.append(int(tok))
    return GroupAction(tuple(segs), tuple(fixed))


@dataclass(frozen=True)
class Decomposition:
    """Base blocks plus the action that develops them.

    The first ``developed_count`` base blocks are expanded through the full
    orbit of ``action``; the remaining blocks appear once as given.
    """

    theta: ThetaGraph
    host: HostGraph
    action: GroupAction
    base_blocks: tuple[tuple[int, ...], ...]
    developed_count: int

    def __post_init__(self):
        object.__setattr__(self, "base_blocks", tuple(tuple(int(x) for x in b) for b in self.base_blocks))
        if not 0 <= self.developed_count <= len(self.base_blocks):
            raise ValueError("developed_count out of range")
        if self.action.point_count != self.host.n:
            raise ValueError(f"action acts on {self.action.point_count} points, host has {self.host.n}")

    @classmethod
    def explicit(cls, theta: ThetaGraph, host: HostGraph, blocks: Sequence[Sequence[int]]) -> "Decomposition":
        return cls(theta, host, GroupAction.identity(host.n), tuple(tuple(b) for b in blocks), 0)

    @property
    def expanded_count(self) -> int:
        return self.developed_count * order(self.action) + len(self.base_blocks) - self.developed_count

    def block_array(self) -> np.ndarray:
        """All expanded blocks as an int array of shape (blocks, vertex_count)."""
        v = self.theta.vertex_count
        base = np.asarray(self.base_blocks, dtype=np.int64).reshape(-1, v)
        dev = base[: self.developed_count]
        rest = base[self.developed_count:]
        if len(dev) == 0:
            return rest.copy()
        if dev.size and (dev.min() < 0 or dev.max() >= self.host.n):
            raise UnknownPoint("base block point outside host")
        table = self.action.power_table().astype(np.int64)
        images = table[:, dev]  # (order, developed, v)
        images = images.transpose(1, 0, 2).reshape(-1, v)
        return np.concatenate([images, rest]) if len(rest) else images


def develop(d: Decomposition) -> list[ThetaBlock]:
    """Expand base blocks into the full block list (developed orbits first, in base order)."""
    return [ThetaBlock(d.theta, tuple(row)) for row in d.block_array().tolist()]
