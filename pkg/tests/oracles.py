"""Independent reference computations used to derive frozen test values.

Nothing here imports the package's verification or enumeration code; the
graphs are built with networkx and edges are counted with plain sets.
"""
from collections import Counter
from itertools import combinations

import networkx as nx


def theta_nx(a, b, c):
    """Theta graph built from three explicit paths between vertices 's' and 't'."""
    g = nx.Graph()
    for k, length in enumerate((a, b, c)):
        path = ["s"] + [(k, i) for i in range(1, length)] + ["t"]
        nx.add_path(g, path)
    return g


def thetas_brute(e):
    """All non-isomorphic theta graphs with e edges, found by isomorphism tests."""
    found = []
    for a in range(1, e):
        for b in range(1, e):
            c = e - a - b
            if c < 1:
                continue
            g = theta_nx(a, b, c)
            if g.number_of_edges() != e:
                continue  # two paths of length 1 give a multigraph
            if any(nx.is_isomorphic(g, h) for h, _ in found):
                continue
            found.append((g, tuple(sorted((a, b, c)))))
    return sorted(t for _, t in found)


def tuple_graph(theta_abc, pts):
    """Graph on the labels ``pts`` following the tuple convention for theta graphs."""
    a, b, c = theta_abc
    v1, v2 = pts[0], pts[1]
    rest = list(pts[2:])
    p1 = [v1] + rest[: a - 1] + [v2]
    p2 = [v1] + rest[a - 1: a + b - 2] + [v2]
    p3 = [v1] + rest[a + b - 2:] + [v2]
    g = nx.Graph()
    for p in (p1, p2, p3):
        nx.add_path(g, p)
    return g


def edge_multiset(theta_abc, blocks):
    cnt = Counter()
    for blk in blocks:
        for u, v in tuple_graph(theta_abc, blk).edges():
            cnt[frozenset((u, v))] += 1
    return cnt


def is_decomposition(theta_abc, blocks, n, parts=None):
    """Edges of K_n (or of the multipartite graph with these parts) each covered exactly once."""
    part = {}
    if parts:
        for i, p in enumerate(parts):
            for x in p:
                part[x] = i
    want = {frozenset(e) for e in combinations(range(n), 2)
            if not parts or part[e[0]] != part[e[1]]}
    e = sum(theta_abc)
    for blk in blocks:
        if len(set(blk)) != e - 1 or not all(0 <= x < n for x in blk):
            return False
    cnt = edge_multiset(theta_abc, blocks)
    return set(cnt) == want and all(v == 1 for v in cnt.values())


def develop_cyclic(base, n):
    return [tuple((x + s) % n for x in b) for b in base for s in range(n)]


def gdd_ok(n, groups, blocks):
    grp = {}
    for i, g in enumerate(groups):
        for x in g:
            if x in grp:
                return False
            grp[x] = i
    if sorted(grp) != list(range(n)):
        return False
    seen = Counter()
    for b in blocks:
        for u, v in combinations(b, 2):
            if grp[u] == grp[v]:
                return False
            seen[frozenset((u, v))] += 1
    want = {frozenset((u, v)) for u, v in combinations(range(n), 2) if grp[u] != grp[v]}
    return set(seen) == want and all(c == 1 for c in seen.values())


def spectrum_residues_brute(e, n_max):
    """Orders n <= n_max passing the counting conditions, before exceptions."""
    return [n for n in range(n_max + 1) if n <= 1 or (n >= e - 1 and n * (n - 1) % (2 * e) == 0)]
