"""Benchmark the compiled kernels against the pure-Python fallback.

Times the two hot paths on realistic workloads: antichain enumeration over
the comparability masks of real tower stages, and branch-and-bound open-map
enumeration between materialized stage posets.  Results are checked equal
between implementations before any timing is reported.

Run:  python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

from finord import _kernels_pure as pure
from finord import hierarchy, hsets, order
from finord.hierarchy import _comparability_masks
from finord.hsets import Universe

try:
    from finord import _kernels_c as fast
except ImportError:
    fast = None


def best_of(fn, repeat):
    best = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        elapsed = time.perf_counter() - start
        best = elapsed if best is None or elapsed < best else best
    return best, result


def antichain_workloads():
    u, ids = hsets.abstract_antichain(3)
    a, b, c = ids
    doubles = (u.intern([a, b]), u.intern([a, c]), u.intern([b, c]))
    h = hierarchy.build(doubles, 2, u)
    elems = sorted(h.levels[-1])
    yield ("antichains, 21-element stage", len(elems),
           _comparability_masks(elems, u))

    uc = Universe()
    hc = hierarchy.build(hsets.concrete_claw(uc), 2, uc)
    elems = sorted(hc.levels[-1])
    yield ("antichains, 22-element stage", len(elems),
           _comparability_masks(elems, uc))


def map_workloads():
    u = Universe()
    h = hierarchy.build(hsets.concrete_claw(u), 2, u)
    stage1, _ = hierarchy.materialize(h, 1)
    stage2, _ = hierarchy.materialize(h, 2)
    s = order.sierpinski()
    yield "open maps, 22 -> Sierpinski", stage2, s
    yield "open maps, 8 -> 8", stage1, stage1


def run(repeat):
    rows = []
    for name, n, comp in antichain_workloads():
        t_pure, got_pure = best_of(
            lambda: pure.antichains(n, comp, 2, None), repeat)
        t_fast = None
        if fast is not None:
            t_fast, got_fast = best_of(
                lambda: fast.antichains(n, comp, 2, None), repeat)
            assert got_fast == got_pure, name
        rows.append((name, f"{len(got_pure[0])} results", t_pure, t_fast))

    for name, p, q in map_workloads():
        allowed = [(1 << q.n) - 1] * p.n
        args = (p.n, q.n, p.down, p.up, q.down, q.up, allowed, True,
                100_000_000)
        t_pure, got_pure = best_of(lambda: pure.enumerate_maps(*args), repeat)
        t_fast = None
        if fast is not None:
            t_fast, got_fast = best_of(
                lambda: fast.enumerate_maps(*args), repeat)
            assert got_fast == got_pure, name
        rows.append((name, f"{len(got_pure[0])} maps", t_pure, t_fast))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5,
                        help="timings per workload; best is reported")
    args = parser.parse_args()

    if fast is None:
        print("compiled kernels unavailable; timing the pure path only\n")

    rows = run(args.repeat)
    width = max(len(r[0]) for r in rows)
    header = (f"{'workload':<{width}}  {'output':>14}  {'pure':>10}  "
              f"{'compiled':>10}  {'speedup':>8}")
    print(header)
    print("-" * len(header))
    for name, output, t_pure, t_fast in rows:
        if t_fast is None:
            print(f"{name:<{width}}  {output:>14}  {t_pure:>9.4f}s  "
                  f"{'-':>10}  {'-':>8}")
        else:
            print(f"{name:<{width}}  {output:>14}  {t_pure:>9.4f}s  "
                  f"{t_fast:>9.4f}s  {t_pure / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
