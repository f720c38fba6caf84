import numpy as np
import pytest

from oracles import is_decomposition
from thetadesign.construct import (
    GDDRequest,
    clear_results,
    construct,
    coverage_law,
    inflate,
    plan,
    refusal_reason,
    spectrum_table,
)
from thetadesign.errors import NotInSpectrum
from thetadesign.gdd import GDD
from thetadesign.theta import enumerate_thetas, make_theta, spectrum_membership
from thetadesign.verify import verify_decomposition


def test_inflate_labels_and_goals():
    k3 = GDDRequest("complete", sizes=(3,)).provide()
    inf = inflate(k3, [2, 3, 4], inf=1)
    assert inf.order == 10
    assert [list(r) for r in inf.ranges] == [[0, 1], [2, 3, 4], [5, 6, 7, 8]]
    assert inf.infinity == 9
    assert inf.block_goals() == [(2, 3), (2, 4), (3, 4)]
    assert inf.overlay_goals() == [3, 4, 5]
    plain = inflate(GDDRequest("bipartite", sizes=(2, 3)).provide(), 5)
    assert plain.order == 25 and plain.infinity is None
    assert plain.overlay_goals() == [10, 15]
    with pytest.raises(ValueError):
        inflate(k3, [1, 0, 1])


def test_gdd_request_labels():
    assert GDDRequest("complete", sizes=(4,)).label() == "K4 as 2-GDD 1^4"
    assert GDDRequest("rgdd", K=(3,), type="3^5", extra=2).label() == "3-RGDD 3^5 + 2 new points"
    assert GDDRequest("gdd", K=(3, 4, 5), type="1^9").label() == "{3,4,5}-GDD 1^9"
    g = GDDRequest("rgdd", K=(3,), type="3^3", extra=3).provide()
    assert isinstance(g, GDD) and g.type_label() == "3^4"


@pytest.mark.parametrize("abc,n,kinds", [
    # [DERIVED] plan shapes frozen from the rank rule
    ((1, 2, 7), 20, ["CatalogueLeaf"]),
    ((1, 2, 7), 21, ["SearchLeaf"]),
    ((1, 2, 7), 76, ["PatchCase", "CatalogueLeaf"]),
    ((2, 2, 6), 36, ["BipartiteTower", "CatalogueLeaf", "SearchLeaf"]),
    ((5, 5, 5), 85, ["BipartiteAlt", "CatalogueLeaf", "CatalogueLeaf"]),
    ((1, 3, 6), 100, ["TwoPrimeTripartite", "CatalogueLeaf"]),
    ((2, 3, 7), 72, ["Theta12Tower", "CatalogueLeaf"]),
    ((1, 2, 12), 81, ["PatchCase", "CatalogueLeaf"]),
])
def test_plan_shapes(abc, n, kinds):
    p = plan(make_theta(*abc), n)
    assert [s.kind for s in p.steps()] == kinds
    assert p.explain().splitlines()[0] == f"{p.theta} design of order {n}"


def test_explain_text():
    text = plan(make_theta(1, 2, 7), 76).explain()
    assert "gdd: 4-GDD 3^5, weights 5x15, plus infinity" in text
    assert "blocks: K(5,5,5,5)" in text


@pytest.mark.parametrize("abc,n", [((1, 2, 7), 76), ((2, 2, 6), 36), ((1, 3, 6), 41), ((1, 4, 6), 34),
                                   ((2, 3, 7), 48), ((1, 2, 10), 27)])
def test_constructions_pass_set_oracle(abc, n):
    theta = make_theta(*abc)
    d = construct(theta, n)
    blocks = d.block_array()
    assert len(blocks) == n * (n - 1) // (2 * theta.e)
    assert is_decomposition(abc, blocks.tolist(), n)


def test_block_counts():
    # [DERIVED] n(n-1)/2e
    assert len(construct(make_theta(1, 2, 7), 76).base_blocks) == 285
    assert len(construct(make_theta(5, 5, 5), 85).base_blocks) == 238
    assert verify_decomposition(construct(make_theta(1, 2, 12), 81)).accepted


def test_not_in_spectrum():
    theta = make_theta(1, 2, 7)
    with pytest.raises(NotInSpectrum):
        plan(theta, 5)
    with pytest.raises(NotInSpectrum):
        plan(theta, 30)
    assert refusal_reason(theta, 5) == "K5 has fewer than 9 vertices"
    assert refusal_reason(theta, 30) == "n(n-1) = 870 is not divisible by 20"
    assert refusal_reason(theta, 36) == ""
    assert refusal_reason(make_theta(1, 2, 9), 9) == "K9 has fewer than 11 vertices"


def test_determinism():
    theta = make_theta(1, 3, 6)
    assert plan(theta, 100).to_dict() == plan(theta, 100).to_dict()
    a = construct(theta, 100).block_array()
    clear_results()
    b = construct(theta, 100, jobs=3).block_array()
    assert np.array_equal(a, b)


@pytest.mark.parametrize("theta", [t for e in (10, 11, 12, 13, 14, 15) for t in enumerate_thetas(e)[:2]], ids=str)
def test_spectrum_table_small(theta):
    rows = spectrum_table(theta, 70)
    assert [n for n, ok in rows if ok] == [n for n in range(71) if spectrum_membership(theta, n)]


@pytest.mark.parametrize("family", ["two-prime-5", "two-prime-7", "theta12", "theta15"])
def test_coverage_laws(family):
    got, claimed = coverage_law(family, 3000)
    assert got == claimed
