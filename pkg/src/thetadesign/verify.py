"""Exact edge-partition checks with explicit certificates.

``verify_decomposition`` is the production path: vectorised expansion plus a
dense coverage array.  ``oracle_verify`` reaches the same verdict by a
different route (point-by-point development and a sorted merge against the
host edge list) and exists to cross-check the first.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .action import Decomposition, apply, order
from .theta import ThetaBlock, block_edges, edge_template, pair_from_index

__all__ = [
    "Violation",
    "Certificate",
    "verify_decomposition",
    "verify_gdd_certificate",
    "oracle_verify",
    "VIOLATION_KINDS",
]

VIOLATION_KINDS = ("MalformedBlock", "WithinPartEdge", "DuplicateEdge", "MissingEdge")
REPORT_CAP = 32


@dataclass(frozen=True)
class Violation:
    kind: str
    edge: tuple[int, int] | None = None
    block: int | None = None

    def __str__(self) -> str:
        if self.edge is not None:
            where = f"edge {self.edge[0]}-{self.edge[1]}"
            if self.block is not None:
                where += f" (block {self.block})"
        else:
            where = f"block {self.block}"
        return f"{self.kind} {where}"


@dataclass
class Certificate:
    verdict: str
    block_count: int
    edge_count: int
    violations: list[Violation] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    subject: str = ""

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "verdict": self.verdict,
            "block_count": self.block_count,
            "edge_count": self.edge_count,
            "violation_counts": {k: self.counts.get(k, 0) for k in VIOLATION_KINDS},
            "violations": [
                {"kind": v.kind, "edge": list(v.edge) if v.edge else None, "block": v.block}
                for v in self.violations
            ],
        }

    def to_text(self) -> str:
        lines = [
            f"subject: {self.subject}",
            f"verdict: {self.verdict}",
            f"block_count: {self.block_count}",
            f"edge_count: {self.edge_count}",
        ]
        for k in VIOLATION_KINDS:
            lines.append(f"violations.{k}: {self.counts.get(k, 0)}")
        for v in self.violations:
            lines.append(f"violation: {v}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _finish(subject, block_count, edge_count, reports, counts) -> Certificate:
    counts = {k: int(counts.get(k, 0)) for k in VIOLATION_KINDS}
    ok = not any(counts.values())
    return Certificate("accept" if ok else "reject", int(block_count), int(edge_count),
                       reports[:REPORT_CAP], counts, subject)


def _expand(d: Decomposition) -> tuple[np.ndarray, list[int], int]:
    """Expanded block array plus the expanded indices of malformed blocks.

    Base blocks with points outside the host are not developed; each stands
    in for all of its would-be images.
    """
    n = d.host.n
    v = d.theta.vertex_count
    t = order(d.action)
    rows, bad = [], []
    base = np.asarray(d.base_blocks, dtype=np.int64).reshape(-1, v)
    table = d.action.power_table(t).astype(np.int64) if d.developed_count else None
    pos = 0
    for bi in range(len(base)):
        row = base[bi]
        nimg = t if bi < d.developed_count else 1
        if v and (row.min() < 0 or row.max() >= n):
            bad.extend(range(pos, pos + nimg))
            rows.append(np.full((nimg, v), -1, dtype=np.int64))
        elif nimg > 1:
            rows.append(table[:, row])
        else:
            rows.append(row[None, :])
        pos += nimg
    arr = np.concatenate(rows) if rows else np.zeros((0, v), dtype=np.int64)
    if len(arr):
        srt = np.sort(arr, axis=1)
        rep = np.flatnonzero((srt[:, 1:] == srt[:, :-1]).any(axis=1))
        bad = sorted(set(bad) | set(rep.tolist()))
    return arr, bad, pos


def verify_decomposition(d: Decomposition) -> Certificate:
    """Check that the developed blocks partition the host's edge set exactly."""
    host = d.host
    n = host.n
    subject = f"{d.theta} {host.label()}"
    arr, bad, block_count = _expand(d)
    reports: list[Violation] = [Violation("MalformedBlock", block=b) for b in bad[:REPORT_CAP]]
    counts = Counter({"MalformedBlock": len(bad)})

    good = np.ones(len(arr), dtype=bool)
    good[bad] = False
    block_ids = np.flatnonzero(good)
    tmpl = np.asarray(edge_template(d.theta), dtype=np.int64).reshape(-1, 2)
    sub = arr[good]
    u = sub[:, tmpl[:, 0]].ravel()
    w = sub[:, tmpl[:, 1]].ravel()
    edge_block = np.repeat(block_ids, len(tmpl))
    lo = np.minimum(u, w)
    hi = np.maximum(u, w)
    idx = hi * (hi - 1) // 2 + lo
    npairs = n * (n - 1) // 2

    if host.parts is not None:
        part = np.asarray(host.part_of, dtype=np.int64)
        inside = part[lo] == part[hi]
        if inside.any():
            ins = np.flatnonzero(inside)
            counts["WithinPartEdge"] = len(np.unique(idx[ins]))
            for k in ins[: REPORT_CAP]:
                reports.append(Violation("WithinPartEdge", (int(lo[k]), int(hi[k])), int(edge_block[k])))
    else:
        inside = np.zeros(len(idx), dtype=bool)

    cov, dup_pos = kernels.cover_scan(idx, npairs, REPORT_CAP)
    mask = host.edge_mask()
    dup_edges = (cov > 1) & mask
    counts["DuplicateEdge"] = int(dup_edges.sum())
    for k in dup_pos:
        if not inside[k]:
            reports.append(Violation("DuplicateEdge", (int(lo[k]), int(hi[k])), int(edge_block[k])))
    missing = np.flatnonzero((cov == 0) & mask)
    counts["MissingEdge"] = len(missing)
    for x in missing[:REPORT_CAP]:
        reports.append(Violation("MissingEdge", pair_from_index(int(x))))
    return _finish(subject, block_count, len(idx), reports, counts)


def oracle_verify(d: Decomposition) -> Certificate:
    """Independent check: develop point by point, then merge sorted edge lists."""
    host = d.host
    n = host.n
    subject = f"{d.theta} {host.label()}"
    t = order(d.action)
    blocks: list[tuple[int, ...] | None] = []
    for bi, base in enumerate(d.base_blocks):
        nimg = t if bi < d.developed_count else 1
        if any(not 0 <= x < n for x in base):
            blocks.extend([None] * nimg)
            continue
        cur = tuple(base)
        for _ in range(nimg):
            blocks.append(cur)
            cur = tuple(apply(d.action, x) for x in cur)

    reports, counts = [], Counter()
    edges = []
    for bi, blk in enumerate(blocks):
        if blk is None or len(set(blk)) != len(blk):
            counts["MalformedBlock"] += 1
            reports.append(Violation("MalformedBlock", block=bi))
            continue
        edges.extend(block_edges(ThetaBlock(d.theta, blk)))
    edges.sort()

    universe = [(u, v) for v in range(n) for u in range(v) if host.is_edge(u, v)]
    universe.sort()
    within = set()
    i = j = 0
    while i < len(edges) or j < len(universe):
        if j >= len(universe) or (i < len(edges) and edges[i] < universe[j]):
            e = edges[i]
            if e not in within:
                within.add(e)
                reports.append(Violation("WithinPartEdge", e))
            i += 1
        elif i >= len(edges) or universe[j] < edges[i]:
            counts["MissingEdge"] += 1
            reports.append(Violation("MissingEdge", universe[j]))
            j += 1
        else:
            e = edges[i]
            k = i + 1
            while k < len(edges) and edges[k] == e:
                k += 1
            if k - i > 1:
                counts["DuplicateEdge"] += 1
                reports.append(Violation("DuplicateEdge", e))
            i = k
            j += 1
    counts["WithinPartEdge"] = len(within)
    return _finish(subject, len(blocks), len(edges), reports, counts)


def verify_gdd_certificate(g) -> Certificate:
    """Check a GDD: block sizes in K, cross-group pairs exactly once, none within a group."""
    n = g.point_count
    group_of = np.full(n, -1, dtype=np.int64)
    for gi, grp in enumerate(g.groups):
        for x in grp:
            group_of[x] = gi
    reports, counts = [], Counter()
    lo_l, hi_l, owner = [], [], []
    for bi, blk in enumerate(g.blocks):
        pts = sorted(blk)
        if (len(set(pts)) != len(pts) or len(pts) not in g.K
                or any(not 0 <= x < n for x in pts)):
            counts["MalformedBlock"] += 1
            reports.append(Violation("MalformedBlock", block=bi))
            continue
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                lo_l.append(pts[a])
                hi_l.append(pts[b])
                owner.append(bi)
    lo = np.asarray(lo_l, dtype=np.int64)
    hi = np.asarray(hi_l, dtype=np.int64)
    idx = hi * (hi - 1) // 2 + lo
    inside = group_of[lo] == group_of[hi] if len(idx) else np.zeros(0, dtype=bool)
    if inside.any():
        ins = np.flatnonzero(inside)
        counts["WithinPartEdge"] = len(np.unique(idx[ins]))
        for k in ins[:REPORT_CAP]:
            reports.append(Violation("WithinPartEdge", (int(lo[k]), int(hi[k])), owner[k]))
    cov, dup_pos = kernels.cover_scan(idx, n * (n - 1) // 2, REPORT_CAP)
    hi_all = np.repeat(np.arange(n, dtype=np.int64), np.arange(n, dtype=np.int64))
    lo_all = np.arange(n * (n - 1) // 2, dtype=np.int64) - hi_all * (hi_all - 1) // 2
    mask = group_of[hi_all] != group_of[lo_all]
    counts["DuplicateEdge"] = int(((cov > 1) & mask).sum())
    for k in dup_pos:
        if not inside[k]:
            reports.append(Violation("DuplicateEdge", (int(lo[k]), int(hi[k])), owner[k]))
    missing = np.flatnonzero((cov == 0) & mask)
    counts["MissingEdge"] = len(missing)
    for x in missing[:REPORT_CAP]:
        reports.append(Violation("MissingEdge", pair_from_index(int(x))))
    return _finish(f"GDD {g.type_label()}", len(g.blocks), len(idx), reports, counts)
