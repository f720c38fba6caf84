"""Plain-text catalogue of base-block decompositions.

File format (line oriented, ``#`` starts a comment)::

    entry theta(1,2,7) host K(20)
    act: (0..19 +4)
    developed: 3
    block: 4 17 0 9 7 1 12 15 13
    end

A multipartite host either declares ``parts residue-mod m`` on the entry
line (part i holds the points congruent to i mod m) or lists its parts with
``part:`` lines.  Without ``parts`` and ``part:`` lines the parts are
consecutive.  ``fix:`` lists points fixed by the action; ``developed:``
defaults to the number of blocks.
"""
from __future__ import annotations

import os
import re
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .action import Decomposition, GroupAction, parse_action
from .errors import ArityMismatch, CatalogueSyntaxError, NotFound, PointOutOfRange
from .theta import HostGraph, ThetaGraph, parse_host_label, parse_theta

__all__ = [
    "CatalogueEntry",
    "Catalogue",
    "parse_catalogue",
    "serialize",
    "lookup",
    "builtin_catalogue",
    "cache_dir",
    "save_derived",
    "HEADER",
]

HEADER = "# thetadesign catalogue v1\n"
DATA_DIR = Path(__file__).with_name("data")


@dataclass(frozen=True)
class CatalogueEntry:
    decomposition: Decomposition
    source: str = ""

    @property
    def theta(self) -> ThetaGraph:
        return self.decomposition.theta

    @property
    def host(self) -> HostGraph:
        return self.decomposition.host


_ENTRY_RE = re.compile(
    r"^entry\s+(theta\([^)]*\))\s+host\s+(K\([^)]*\))(?:\s+parts\s+residue-mod\s+(\d+))?\s*$")


_SOURCE_RE = re.compile(r"^\s*#\s*source:\s*(.*)$")


class _Builder:
    def __init__(self, theta, sizes, mod, line, source):
        self.theta = theta
        self.sizes = sizes
        self.mod = mod
        self.line = line
        self.source = source
        self.parts: list[tuple[int, ...]] = []
        self.act = ""
        self.fix = ""
        self.developed: int | None = None
        self.blocks: list[tuple[int, ...]] = []
        self.note = ""

    def build(self) -> CatalogueEntry:
        n = sum(self.sizes)
        err = lambda msg: CatalogueSyntaxError(msg, self.line, 1, self.source)
        if len(self.sizes) == 1:
            if self.parts or self.mod:
                raise err("complete host cannot declare parts")
            host = HostGraph.complete(n)
        else:
            if self.parts:
                parts = tuple(self.parts)
            elif self.mod:
                parts = tuple(tuple(range(i, n, self.mod)) for i in range(self.mod))
            else:
                parts = None
            if parts is None:
                host = HostGraph.multipartite(self.sizes)
            else:
                if tuple(len(p) for p in parts) != tuple(self.sizes):
                    raise err(f"part sizes {[len(p) for p in parts]} do not match K{self.sizes}")
                try:
                    host = HostGraph(n, parts)
                except ValueError as exc:
                    raise err(str(exc)) from None
        try:
            if self.act or self.fix:
                action = parse_action(self.act, self.fix)
            else:
                action = GroupAction.identity(n)
        except ValueError as exc:
            raise err(str(exc)) from None
        if action.point_count != n:
            raise err(f"action covers {action.point_count} points, host has {n}")
        dev = len(self.blocks) if self.developed is None else self.developed
        if dev > len(self.blocks):
            raise err(f"developed count {dev} exceeds {len(self.blocks)} blocks")
        d = Decomposition(self.theta, host, action, tuple(self.blocks), dev)
        return CatalogueEntry(d, self.note or self.source)


def _iter_lines(text: str | Iterable[str]) -> Iterator[str]:
    if isinstance(text, str):
        yield from text.splitlines()
    else:
        for chunk in text:
            yield from chunk.splitlines()


def parse_catalogue(text: str | Iterable[str], source: str = "<string>") -> list[CatalogueEntry]:
    """Parse catalogue text into entries.

    Errors carry the 1-based line and column of the offending token.
    """
    out: list[CatalogueEntry] = []
    cur: _Builder | None = None
    pending_source = ""
    for lineno, raw in enumerate(_iter_lines(text), 1):
        note = _SOURCE_RE.match(raw)
        if note and cur is None:
            pending_source = note.group(1).strip()
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        col0 = len(line) - len(stripped) + 1

        def fail(msg, col=col0, cls=CatalogueSyntaxError):
            return cls(msg, lineno, col, source)

        if stripped.startswith("entry"):
            if cur is not None:
                raise fail("'entry' before 'end' of previous entry")
            m = _ENTRY_RE.match(stripped)
            if not m:
                raise fail("expected 'entry theta(a,b,c) host K(...)'")
            try:
                theta = parse_theta(m.group(1))
            except ValueError as exc:
                raise fail(str(exc), col0 + m.start(1)) from None
            try:
                sizes = parse_host_label(m.group(2))
            except ValueError as exc:
                raise fail(str(exc), col0 + m.start(2)) from None
            mod = int(m.group(3)) if m.group(3) else 0
            if mod and (len(sizes) != mod or len(set(sizes)) != 1):
                raise fail("residue-mod parts need equal part sizes, one per residue", col0 + m.start(3))
            cur = _Builder(theta, sizes, mod, lineno, source)
            cur.note = pending_source
            pending_source = ""
            continue
        if stripped == "end":
            if cur is None:
                raise fail("'end' outside an entry")
            out.append(cur.build())
            cur = None
            continue
        if cur is None:
            raise fail("statement outside an entry")
        key, sep, rest = stripped.partition(":")
        if not sep:
            raise fail(f"unknown statement {stripped.split()[0]!r}")
        key = key.strip()
        rest_col = col0 + len(key) + 1
        n = sum(cur.sizes)
        if key in ("block", "part"):
            pts = []
            for m in re.finditer(r"\S+", rest):
                tok = m.group(0)
                col = rest_col + m.start()
                if not re.fullmatch(r"-?\d+", tok):
                    raise fail(f"expected an integer, got {tok!r}", col)
                x = int(tok)
                if not 0 <= x < n:
                    raise fail(f"point {x} outside 0..{n - 1}", col, PointOutOfRange)
                pts.append(x)
            if key == "block":
                if len(pts) != cur.theta.vertex_count:
                    raise fail(f"{cur.theta} needs {cur.theta.vertex_count} points, got {len(pts)}",
                               rest_col + 1, ArityMismatch)
                cur.blocks.append(tuple(pts))
            else:
                if cur.mod:
                    raise fail("'part:' lines conflict with 'parts residue-mod'")
                cur.parts.append(tuple(pts))
        elif key == "act":
            cur.act = (cur.act + " " + rest).strip()
        elif key == "fix":
            cur.fix = (cur.fix + " " + rest).strip()
        elif key == "developed":
            try:
                cur.developed = int(rest)
            except ValueError:
                raise fail(f"expected an integer, got {rest.strip()!r}", rest_col + 1) from None
            if cur.developed < 0:
                raise fail("developed count is negative", rest_col + 1)
        else:
            raise fail(f"unknown statement {key!r}")
    if cur is not None:
        raise CatalogueSyntaxError("missing 'end'", cur.line, 1, source)
    return out


def _ranges(points: Iterable[int]) -> str:
    pts = sorted(points)
    out, i = [], 0
    while i < len(pts):
        j = i
        while j + 1 < len(pts) and pts[j + 1] == pts[j] + 1:
            j += 1
        out.append(str(pts[i]) if j - i < 2 else f"{pts[i]}..{pts[j]}")
        if 0 < j - i < 2:
            out.extend(str(p) for p in pts[i + 1:j + 1])
        i = j + 1
    return " ".join(out)


def _serialize_entry(entry: CatalogueEntry) -> str:
    d = entry.decomposition
    host = d.host
    head = f"entry {d.theta} host {host.label()}"
    lines = []
    if entry.source:
        lines.append(f"# source: {entry.source}")
    if host.parts is not None:
        m = len(host.parts)
        residue = all(p == tuple(range(i, host.n, m)) for i, p in enumerate(host.parts))
        consecutive = host == HostGraph.multipartite(host.part_sizes)
        if residue and host.n % m == 0:
            head += f" parts residue-mod {m}"
        elif not consecutive:
            for p in host.parts:
                lines.append("part: " + " ".join(map(str, p)))
    lines.insert(0 if not entry.source else 1, head)
    if d.action.segments:
        lines.append("act: " + ", ".join(str(s) for s in d.action.segments))
    if d.action.fixed_points:
        lines.append("fix: " + _ranges(d.action.fixed_points))
    if d.developed_count != len(d.base_blocks):
        lines.append(f"developed: {d.developed_count}")
    for b in d.base_blocks:
        lines.append("block: " + " ".join(map(str, b)))
    lines.append("end")
    return "\n".join(lines) + "\n"


def serialize(entries: Iterable[CatalogueEntry]) -> str:
    return HEADER + "".join("\n" + _serialize_entry(e) for e in entries)


def _key(theta: ThetaGraph, host: HostGraph) -> tuple:
    return (theta, host.key())


class Catalogue:
    """An immutable-after-load index from (theta, host shape) to entries."""

    def __init__(self, entries: Iterable[CatalogueEntry] = ()):
        self._index: dict[tuple, CatalogueEntry] = {}
        for e in entries:
            self.add(e)

    def add(self, entry: CatalogueEntry) -> None:
        self._index.setdefault(_key(entry.theta, entry.host), entry)

    def __len__(self) -> int:
        return len(self._index)

    def __iter__(self) -> Iterator[CatalogueEntry]:
        return iter(self._index.values())

    def __contains__(self, key) -> bool:
        theta, host = key
        return _key(theta, host) in self._index

    def lookup(self, theta: ThetaGraph, host: HostGraph) -> CatalogueEntry:
        try:
            return self._index[_key(theta, host)]
        except KeyError:
            raise NotFound(f"no catalogue entry for {theta} on {host.label()}") from None

    def hosts_for(self, theta: ThetaGraph) -> list[HostGraph]:
        return [e.host for e in self._index.values() if e.theta == theta]


def _read_file(path: Path, source: str | None = None) -> list[CatalogueEntry]:
    text = path.read_text()
    src = source or f"builtin:{path.name}"
    # an entry's own "# source:" note wins over the file label
    return [CatalogueEntry(e.decomposition, e.source if e.source != str(path) else src)
            for e in parse_catalogue(text, str(path))]


def builtin_files() -> list[Path]:
    return sorted(DATA_DIR.glob("*.cat"))


_lock = threading.Lock()
_builtin: Catalogue | None = None
_derived: dict[str, Catalogue] = {}


def builtin_catalogue(checked: bool = False) -> Catalogue:
    """All shipped entries.  With ``checked`` every entry is verified first."""
    global _builtin
    with _lock:
        if _builtin is None:
            entries = []
            for p in builtin_files():
                entries.extend(_read_file(p))
            _builtin = Catalogue(entries)
    if checked:
        from .verify import verify_decomposition

        for e in _builtin:
            cert = verify_decomposition(e.decomposition)
            if not cert.accepted:
                raise CatalogueSyntaxError(
                    f"{e.theta} {e.host.label()} fails verification: {cert.violations[:3]}",
                    0, 0, e.source)
    return _builtin


def cache_dir() -> Path:
    root = os.environ.get("THETA_CACHE_DIR")
    return Path(root) if root else Path.home() / ".cache" / "thetadesign"


def _derived_path(theta: ThetaGraph, host: HostGraph) -> Path:
    sizes = "_".join(str(g) for g in sorted(host.part_sizes))
    return cache_dir() / "derived" / f"{theta.a}_{theta.b}_{theta.c}_K{sizes}.cat"


def derived_catalogue() -> Catalogue:
    """Entries found by the searcher; each is re-verified when first read."""
    from .verify import verify_decomposition

    root = str(cache_dir())
    with _lock:
        cat = _derived.get(root)
        if cat is None:
            cat = Catalogue()
            for p in sorted((cache_dir() / "derived").glob("*.cat")):
                try:
                    for e in _read_file(p, f"derived:{p.name}"):
                        if verify_decomposition(e.decomposition).accepted:
                            cat.add(e)
                except (OSError, CatalogueSyntaxError, ValueError):
                    continue
            _derived[root] = cat
        return cat


def save_derived(entry: CatalogueEntry) -> Path:
    """Persist a search result under the cache's ``derived/`` namespace."""
    path = _derived_path(entry.theta, entry.host)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(serialize([entry]))
    tmp.replace(path)
    with _lock:
        cat = _derived.get(str(cache_dir()))
        if cat is not None:
            cat.add(entry)
    return path


def lookup(theta: ThetaGraph, host: HostGraph, derived: bool = True) -> CatalogueEntry:
    """Shipped entry for (theta, host), else a cached derived one; NotFound otherwise.

    Multipartite hosts match on the multiset of part sizes; the returned
    entry carries its own labelling of the parts.
    """
    try:
        return builtin_catalogue().lookup(theta, host)
    except NotFound:
        if not derived:
            raise
    return derived_catalogue().lookup(theta, host)
