import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from thetadesign import _fallback, kernels
from thetadesign.catalogue import builtin_catalogue
from thetadesign.search import SearchProblem, _Arrays, _random_blocks, cyclic_problem
from thetadesign.theta import make_theta
from thetadesign.verify import verify_decomposition

compiled = pytest.importorskip("thetadesign._kernels")

SMALL = sorted((e for e in builtin_catalogue() if e.host.n <= 30),
               key=lambda e: (e.theta, e.host.n, e.host.part_sizes))


def _problem_for(entry):
    d = entry.decomposition
    return SearchProblem(d.theta, d.host, d.action, d.developed_count,
                         len(d.base_blocks) - d.developed_count)


def _run(mod, arrays, p, blocks, seed, steps, stall=10**9):
    blk = np.ascontiguousarray(blocks, dtype=np.int32).copy()
    cost, used = mod.local_search(blk, p.developed_count, arrays.powers, arrays.target, arrays.tmpl_i,
                                  arrays.tmpl_j, arrays.inc_ptr, arrays.inc_edge, seed, steps, stall)
    return int(cost), int(used), blk


def _dups(idx, cap):
    seen, out = {}, []
    for k, x in enumerate(idx):
        seen[x] = seen.get(x, 0) + 1
        if seen[x] == 2 and len(out) < cap:
            out.append(k)
    return out


@given(st.lists(st.integers(0, 40), max_size=200), st.integers(0, 10))
def test_cover_scan_backends_agree(idx, cap):
    for mod in (_fallback, compiled):
        counts, dups = mod.cover_scan(np.asarray(idx, dtype=np.int64), 41, cap)
        assert counts.tolist() == np.bincount(np.asarray(idx, dtype=np.int64), minlength=41).tolist()
        assert dups.tolist() == _dups(idx, cap)


@pytest.mark.parametrize("abc", [(1, 2, 7), (2, 3, 5), (1, 2, 9)])
@pytest.mark.parametrize("seed", [1, 99, 2**40 + 3])
def test_local_search_backends_agree(abc, seed):
    p = cyclic_problem(make_theta(*abc))
    arrays = _Arrays(p)
    start = _random_blocks(p, seed)
    a = _run(_fallback, arrays, p, start, seed, 3000)
    b = _run(compiled, arrays, p, start, seed, 3000)
    assert a[:2] == b[:2]
    assert np.array_equal(a[2], b[2])


def test_local_search_backends_agree_with_fixed_blocks():
    entry = next(e for e in SMALL if 0 < e.decomposition.developed_count < len(e.decomposition.base_blocks))
    p = _problem_for(entry)
    arrays = _Arrays(p)
    start = _random_blocks(p, 5)
    a = _run(_fallback, arrays, p, start, 5, 2000)
    b = _run(compiled, arrays, p, start, 5, 2000)
    assert a[:2] == b[:2] and np.array_equal(a[2], b[2])


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    if kernels.BACKEND == "cython":
        assert kernels.local_search is compiled.local_search


@settings(max_examples=150, deadline=None)
@given(st.integers(0, len(SMALL) - 1), st.integers(0, 2**31), st.booleans())
def test_zero_cost_iff_verifier_accepts(i, seed, mutate):
    entry = SMALL[i]
    p = _problem_for(entry)
    arrays = _Arrays(p)
    blocks = np.asarray(entry.decomposition.base_blocks, dtype=np.int32)
    if mutate:
        rng = np.random.default_rng(seed)
        b, j = rng.integers(len(blocks)), rng.integers(blocks.shape[1])
        free = [x for x in range(p.host.n) if x not in blocks[b]]
        blocks[b, j] = free[rng.integers(len(free))]
    d = type(entry.decomposition)(p.theta, p.host, p.action, tuple(map(tuple, blocks.tolist())),
                                  p.developed_count)
    for mod in (_fallback, compiled):
        cost, steps, _ = _run(mod, arrays, p, blocks, seed, 0)
        assert steps == 0
        assert (cost == 0) == verify_decomposition(d).accepted
