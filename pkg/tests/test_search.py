import pytest

from oracles import develop_cyclic, is_decomposition
from thetadesign.action import GroupAction, parse_action
from thetadesign.catalogue import derived_catalogue
from thetadesign.errors import BudgetExhausted, InfeasibleArity, MalformedBlock
from thetadesign.search import SearchProblem, cyclic_problem, find_cyclic, resume, search
from thetadesign.theta import HostGraph, enumerate_thetas, make_theta
from thetadesign.verify import verify_decomposition


@pytest.mark.parametrize("abc", [(1, 2, 7), (2, 4, 4), (1, 2, 8), (3, 4, 4)])
def test_cyclic_search_finds_designs(abc):
    theta = make_theta(*abc)
    n = 2 * theta.e + 1
    d = search(cyclic_problem(theta))
    assert verify_decomposition(d).accepted
    assert is_decomposition(abc, develop_cyclic(d.base_blocks, n), n)


def test_every_order_2e_plus_1_for_ten_edges():
    for theta in enumerate_thetas(10):
        d = search(cyclic_problem(theta, restarts=16))
        assert verify_decomposition(d).accepted


def test_search_with_fixed_blocks():
    # K(5,10) with a rotation of order 5 on each part: 5 developed base blocks
    theta = make_theta(2, 2, 6)
    host = HostGraph.multipartite([5, 10])
    act = parse_action("(0..4 +1), (5..9 +1), (10..14 +1)")
    d = search(SearchProblem(theta, host, act, 1, 0, restarts=64))
    assert verify_decomposition(d).accepted
    assert d.expanded_count == 5


def test_zero_budget():
    p = cyclic_problem(make_theta(1, 2, 7), restarts=0)
    with pytest.raises(BudgetExhausted):
        search(p)


def test_exhausted_budget_reports_best_cost():
    p = cyclic_problem(make_theta(1, 2, 7), restarts=2, steps=3, stall=1)
    with pytest.raises(BudgetExhausted) as info:
        search(p)
    assert "best cost" in str(info.value)


def test_arity_errors():
    theta = make_theta(1, 2, 7)
    with pytest.raises(InfeasibleArity):
        cyclic_problem(theta, 20)
    with pytest.raises(InfeasibleArity):
        SearchProblem(theta, HostGraph.complete(21), GroupAction.cyclic(21), 2)
    with pytest.raises(InfeasibleArity):
        SearchProblem(theta, HostGraph.complete(21), GroupAction.cyclic(20), 1)
    p = cyclic_problem(theta)
    with pytest.raises(InfeasibleArity):
        resume(p, [])
    with pytest.raises(MalformedBlock):
        resume(p, [[0, 0, 1, 2, 3, 4, 5, 6, 7]])
    with pytest.raises(MalformedBlock):
        resume(p, [[0, 1, 2, 3, 4, 5, 6, 7, 21]])


def test_resume_from_solution_and_from_perturbed_state():
    p = cyclic_problem(make_theta(1, 2, 7))
    d = search(p)
    again = resume(p, d.base_blocks)
    assert again.base_blocks == d.base_blocks
    blk = list(d.base_blocks[0])
    blk[3] = next(x for x in range(21) if x not in blk)
    fixed = resume(p, [blk])
    assert verify_decomposition(fixed).accepted


def test_determinism_across_jobs():
    p = cyclic_problem(make_theta(1, 3, 6))
    a = search(p)
    assert search(p).base_blocks == a.base_blocks
    b = search(cyclic_problem(make_theta(1, 3, 6), jobs=4))
    assert b.base_blocks == a.base_blocks
    assert p.restart_seed(0) != p.restart_seed(1)
    assert cyclic_problem(make_theta(1, 3, 6), seed=7).base_seed() == 7


def test_find_cyclic_is_cached(tmp_path, monkeypatch):
    monkeypatch.setenv("THETA_CACHE_DIR", str(tmp_path))
    theta = make_theta(1, 4, 5)
    d = find_cyclic(theta)
    files = list((tmp_path / "derived").glob("*.cat"))
    assert len(files) == 1 and "search seed=" in files[0].read_text()
    assert (theta, HostGraph.complete(21)) in derived_catalogue()
    assert find_cyclic(theta, restarts=0) == d
