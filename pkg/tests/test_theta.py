import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import spectrum_residues_brute, theta_nx, thetas_brute, tuple_graph
from thetadesign.errors import InvalidTheta, MalformedBlock, NotDivisible, UnsupportedEdgeCount
from thetadesign.theta import (
    HostGraph,
    ThetaBlock,
    bipartite_theta_count,
    block_edges,
    copy_counts,
    edge_template,
    enumerate_thetas,
    make_theta,
    necessary_conditions,
    pair_from_index,
    pair_index,
    parse_theta,
    spectrum_membership,
    theta_count,
)

E_RANGE = range(10, 16)
# [PAPER] counts of theta graphs and bipartite theta graphs for e = 10..15
COUNTS = {10: (7, 2), 11: (9, 3), 12: (11, 3), 13: (13, 4), 14: (15, 4), 15: (18, 6)}


@pytest.mark.parametrize("e", E_RANGE)
def test_enumeration_matches_isomorphism_oracle(e):
    got = [(t.a, t.b, t.c) for t in enumerate_thetas(e)]
    assert got == thetas_brute(e)


@pytest.mark.parametrize("e", E_RANGE)
def test_counts_and_closed_forms(e):
    thetas = enumerate_thetas(e)
    assert (len(thetas), sum(t.bipartite for t in thetas)) == COUNTS[e]
    assert theta_count(e) == COUNTS[e][0]
    assert bipartite_theta_count(e) == COUNTS[e][1]


@pytest.mark.parametrize("e", range(3, 40))
def test_closed_forms_track_enumeration(e):
    thetas = enumerate_thetas(e)
    assert theta_count(e) == len(thetas)
    assert bipartite_theta_count(e) == sum(t.bipartite for t in thetas)


@pytest.mark.parametrize("theta", [t for e in E_RANGE for t in enumerate_thetas(e)], ids=str)
def test_bipartite_flag_and_template_shape(theta):
    g = theta_nx(theta.a, theta.b, theta.c)
    assert theta.bipartite == nx.is_bipartite(g)
    h = nx.Graph(edge_template(theta))
    assert h.number_of_nodes() == theta.vertex_count
    assert nx.is_isomorphic(g, h)
    # the tuple convention: v1, v2 are the branch vertices
    assert h.degree(0) == h.degree(1) == 3


def test_template_follows_tuple_convention():
    theta = make_theta(2, 3, 4)
    pts = list(range(100, 108))
    want = tuple_graph((2, 3, 4), pts)
    got = {frozenset(e) for e in block_edges((theta, pts))}
    assert got == {frozenset(e) for e in want.edges()}


@pytest.mark.parametrize("abc", [(0, 2, 3), (1, 1, 5), (3, 2, 4), (2, 2, 1)])
def test_invalid_theta(abc):
    with pytest.raises(InvalidTheta):
        make_theta(*abc)


def test_parse_theta():
    assert parse_theta(" theta( 1, 2 ,7)") == make_theta(1, 2, 7)
    with pytest.raises(InvalidTheta):
        parse_theta("theta(1,2)")


def test_block_rejects_repeats_and_wrong_length():
    t = make_theta(1, 2, 7)
    with pytest.raises(MalformedBlock):
        ThetaBlock(t, (0, 1, 2))
    with pytest.raises(MalformedBlock):
        ThetaBlock(t, (0, 1, 2, 3, 4, 5, 6, 7, 7))


@given(st.integers(0, 2000), st.integers(0, 2000))
def test_pair_index_roundtrip(u, v):
    if u == v:
        return
    i = pair_index(u, v)
    assert pair_from_index(i) == (min(u, v), max(u, v))


def test_pair_index_dense():
    n = 40
    idx = sorted(pair_index(u, v) for v in range(n) for u in range(v))
    assert idx == list(range(n * (n - 1) // 2))
    arr = pair_index(np.array([3, 7]), np.array([5, 2]))
    assert arr.tolist() == [pair_index(3, 5), pair_index(7, 2)]


def test_copy_counts_formulas():
    # [PAPER] n(n-1)/2e, n^2 r(r-1)/2e, nr(n(r-1)+2m)/2e
    assert copy_counts(10, HostGraph.complete(20)) == 19
    assert copy_counts(12, HostGraph.complete(24)) == 23
    assert copy_counts(15, HostGraph.complete(30)) == 29
    n, r = 5, 4
    assert copy_counts(10, HostGraph.multipartite([n] * r)) == n * n * r * (r - 1) // 20
    n, r, m = 5, 4, 20
    assert copy_counts(10, HostGraph.multipartite([n] * r + [m])) == n * r * (n * (r - 1) + 2 * m) // 20
    with pytest.raises(NotDivisible):
        copy_counts(10, HostGraph.complete(7))


def test_host_graph_edges():
    h = HostGraph.multipartite([2, 3])
    assert h.edge_count == 6
    assert h.is_edge(0, 2) and not h.is_edge(0, 1) and not h.is_edge(3, 3)
    assert h.edge_mask().sum() == 6
    assert h.key() == HostGraph(5, ((2, 3, 4), (0, 1))).key()
    assert h.label() == "K(2,3)"
    with pytest.raises(ValueError):
        HostGraph(4, ((0, 1), (1, 2, 3)))


@pytest.mark.parametrize("e", E_RANGE)
def test_spectrum_is_counting_conditions_minus_exceptions(e):
    theta = enumerate_thetas(e)[0]
    admissible = spectrum_residues_brute(e, 600)
    got = [n for n in range(601) if spectrum_membership(theta, n)]
    # [PAPER] the only admissible orders without a design
    exceptions = {10: [5], 12: [9], 14: [8], 15: [6, 10]}.get(e, [])
    assert got == [n for n in admissible if n not in exceptions]
    assert all(necessary_conditions(theta, n) for n in got)


def test_spectrum_examples():
    # [DERIVED] residues 0,1,5,16 mod 20 without 5
    got = [n for n in range(101) if spectrum_membership(make_theta(1, 2, 7), n)]
    assert got == [0, 1, 16, 20, 21, 25, 36, 40, 41, 45, 56, 60, 61, 65, 76, 80, 81, 85, 96, 100]
    # [PAPER] n = 0 or 1 (mod 11)
    got = [n for n in range(24) if spectrum_membership(make_theta(1, 4, 6), n)]
    assert got == [0, 1, 11, 12, 22, 23]
    assert not spectrum_membership(make_theta(1, 2, 7), -1)


def test_spectrum_outside_supported_range():
    with pytest.raises(UnsupportedEdgeCount):
        spectrum_membership(make_theta(1, 2, 6), 9)
