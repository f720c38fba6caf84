import json
import random

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from oracles import is_decomposition
from thetadesign.action import Decomposition, GroupAction
from thetadesign.catalogue import builtin_catalogue
from thetadesign.gdd import GDD
from thetadesign.theta import HostGraph, make_theta
from thetadesign.verify import VIOLATION_KINDS, oracle_verify, verify_decomposition, verify_gdd_certificate

ENTRIES = sorted(builtin_catalogue(), key=lambda e: (e.theta, e.host.n, e.host.part_sizes))
SMALL = [e for e in ENTRIES if e.host.n <= 45]


def _mutate(d: Decomposition, rng: random.Random) -> Decomposition:
    blocks = [list(b) for b in d.base_blocks]
    b = rng.randrange(len(blocks))
    j = rng.randrange(len(blocks[b]))
    old = blocks[b][j]
    blocks[b][j] = rng.choice([x for x in range(d.host.n) if x != old])
    return Decomposition(d.theta, d.host, d.action, tuple(map(tuple, blocks)), d.developed_count)


def test_k20_first_base_block():
    # [PAPER] first base block listed for theta(1,2,7) on Z_20
    e = builtin_catalogue().lookup(make_theta(1, 2, 7), HostGraph.complete(20))
    assert e.decomposition.base_blocks[0] == (4, 17, 0, 9, 7, 1, 12, 15, 13)


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: f"{e.theta}-{e.host.label()}")
def test_small_entries_agree_with_set_oracle(entry):
    d = entry.decomposition
    blocks = d.block_array().tolist()
    abc = (d.theta.a, d.theta.b, d.theta.c)
    assert is_decomposition(abc, blocks, d.host.n, d.host.parts)
    cert = verify_decomposition(d)
    assert cert.accepted
    assert cert.block_count == d.host.edge_count // d.theta.e


def test_all_entries_accepted_by_both_checkers():
    for e in ENTRIES:
        a = verify_decomposition(e.decomposition)
        b = oracle_verify(e.decomposition)
        assert a.accepted and b.accepted, e.host.label()
        assert a.counts == b.counts
        assert a.block_count == b.block_count


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, len(SMALL) - 1), st.integers(0, 2**32))
def test_mutations_agree_with_oracle(i, seed):
    d = _mutate(SMALL[i].decomposition, random.Random(seed))
    a = verify_decomposition(d)
    b = oracle_verify(d)
    assert a.verdict == b.verdict
    assert a.counts == b.counts
    assert a.block_count == b.block_count
    assert a.edge_count == b.edge_count


def test_violation_kinds_reported():
    theta = make_theta(1, 2, 7)
    e = builtin_catalogue().lookup(theta, HostGraph.complete(20)).decomposition
    blocks = list(e.block_array().tolist())
    # drop a block: exactly its ten edges go missing
    cert = verify_decomposition(Decomposition.explicit(theta, e.host, blocks[1:]))
    assert cert.counts["MissingEdge"] == 10 and cert.counts["DuplicateEdge"] == 0
    # repeat a block: ten duplicated edges
    cert = verify_decomposition(Decomposition.explicit(theta, e.host, blocks + blocks[:1]))
    assert cert.counts["DuplicateEdge"] == 10 and cert.counts["MissingEdge"] == 0
    # a repeated vertex makes the block malformed and loses its edges
    bad = list(blocks[0])
    bad[1] = bad[0]
    cert = verify_decomposition(Decomposition.explicit(theta, e.host, [bad] + blocks[1:]))
    assert cert.counts["MalformedBlock"] == 1 and cert.counts["MissingEdge"] == 10
    assert not cert.accepted


def test_within_part_edges():
    theta = make_theta(2, 2, 6)
    d = builtin_catalogue().lookup(theta, HostGraph.multipartite([5, 10])).decomposition
    host = d.host
    blocks = d.block_array().tolist()
    # move the neighbour of v1 at position 2 into the part of v1
    blk = list(blocks[0])
    blk[2] = next(x for x in host.parts[host.part_of[blk[0]]] if x not in blk)
    blocks[0] = blk
    mutated = Decomposition.explicit(theta, host, blocks)
    cert = verify_decomposition(mutated)
    assert cert.counts["WithinPartEdge"] >= 1
    assert cert.counts == oracle_verify(mutated).counts


def test_out_of_range_points_are_malformed():
    theta = make_theta(1, 2, 7)
    d = Decomposition(theta, HostGraph.complete(21), GroupAction.cyclic(21), ((0, 1, 2, 3, 4, 5, 6, 7, 30),), 1)
    cert = verify_decomposition(d)
    assert cert.counts["MalformedBlock"] == 21
    assert cert.counts == oracle_verify(d).counts


def test_certificate_serialisation():
    e = ENTRIES[0]
    cert = verify_decomposition(e.decomposition)
    doc = json.loads(cert.to_json())
    assert doc["verdict"] == "accept"
    assert set(doc["violation_counts"]) == set(VIOLATION_KINDS)
    assert "verdict: accept" in cert.to_text()


def test_report_is_capped():
    theta = make_theta(1, 2, 7)
    cert = verify_decomposition(Decomposition.explicit(theta, HostGraph.complete(40), []))
    assert cert.counts["MissingEdge"] == 780
    assert len(cert.violations) <= 32


def test_gdd_certificate():
    g = GDD(6, ((0, 1), (2, 3), (4, 5)), ((0, 2, 4), (0, 3, 5), (1, 2, 5), (1, 3, 4)), frozenset({3}))
    assert verify_gdd_certificate(g).accepted
    bad = GDD(6, g.groups, ((0, 1, 4),) + g.blocks[1:], frozenset({3}))
    cert = verify_gdd_certificate(bad)
    assert not cert.accepted and cert.counts["WithinPartEdge"] >= 1
    wrong_k = GDD(6, g.groups, g.blocks, frozenset({4}))
    assert verify_gdd_certificate(wrong_k).counts["MalformedBlock"] == 4
