"""Compare the compiled kernels with the pure-Python fallback.

    python bench/bench_kernels.py [--steps 4000] [--repeat 3]

Both backends get identical inputs and must return identical results; the
script stops with an error if they do not.
"""
import argparse
import time

import numpy as np

from thetadesign import _fallback
from thetadesign.search import _Arrays, _random_blocks, cyclic_problem
from thetadesign.theta import make_theta

try:
    from thetadesign import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_local_search(mod, abc, steps, repeat):
    theta = make_theta(*abc)
    p = cyclic_problem(theta, 8 * theta.e + 1)
    arrays = _Arrays(p)
    start = _random_blocks(p, 12345)

    def run():
        blk = start.copy()
        # stall limit above the step budget so both backends do the same work
        cost, used = mod.local_search(blk, p.developed_count, arrays.powers, arrays.target, arrays.tmpl_i,
                                      arrays.tmpl_j, arrays.inc_ptr, arrays.inc_edge, 7, steps, steps + 1)
        return int(cost), int(used), blk

    return best_of(run, repeat)


def bench_cover_scan(mod, size, repeat):
    rng = np.random.default_rng(1)
    npairs = 200_000
    idx = rng.integers(0, npairs, size=size)
    return best_of(lambda: mod.cover_scan(idx, npairs, 64), repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2000, help="moves per local-search run")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scan-size", type=int, default=1_000_000)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled kernels are not built; run pip install -e . --no-build-isolation")

    print(f"{"kernel":42} {'python (s)':>11} {'cython (s)':>11} {'speedup':>8}")
    for abc in [(1, 2, 7), (2, 3, 7), (3, 5, 7)]:
        tp, rp = bench_local_search(_fallback, abc, args.steps, args.repeat)
        tc, rc = bench_local_search(_kernels, abc, args.steps, args.repeat)
        if rp[:2] != rc[:2] or not np.array_equal(rp[2], rc[2]):
            raise SystemExit(f"backends disagree on theta{abc}")
        n = 8 * sum(abc) + 1
        label = f"local_search theta{abc} K{n} ({rp[1]} mv)"
        print(f"{label:42} {tp:11.4f} {tc:11.4f} {tp / tc:7.1f}x")
    tp, rp = bench_cover_scan(_fallback, args.scan_size, args.repeat)
    tc, rc = bench_cover_scan(_kernels, args.scan_size, args.repeat)
    if not (np.array_equal(rp[0], rc[0]) and np.array_equal(rp[1], rc[1])):
        raise SystemExit("backends disagree on cover_scan")
    label = f"cover_scan ({args.scan_size} pairs)"
    print(f"{label:42} {tp:11.4f} {tc:11.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
