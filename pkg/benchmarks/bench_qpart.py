#!/usr/bin/env python3
"""Benchmark the partition-count kernel: compiled extension vs the
pure-Python fallback.

Each workload runs the full alternating-sum computation for every
dominant pair below a cap, with a fresh memo per backend so the timing
covers the real recursion, not cache hits.

    python benchmarks/bench_qpart.py [--repeat 3]
"""

import argparse
import itertools
import time

from sphecke.kernels import available_backends
from sphecke.rootdata import (
    build_gl,
    build_preset,
    dominant_below,
    mat_apply,
    vadd,
    vscale,
    vsub,
    weyl_elements,
)


def workload_pairs(rd, size_cap):
    lams = [
        v
        for v in itertools.product(range(size_cap + 1), repeat=rd.rank)
        if rd.is_dominant(v) and sum(v) <= size_cap
    ]
    pairs = []
    for lam in lams:
        for mu in dominant_below(rd, lam):
            pairs.append((lam, mu))
    return pairs


def alternating_sum_betas(rd, pairs):
    rho2 = rd.rho_b_times2
    betas = []
    for lam, mu in pairs:
        lam2 = vadd(vscale(2, lam), rho2)
        mu2 = vadd(vscale(2, mu), rho2)
        for w, _ in weyl_elements(rd):
            betas.append(tuple(x // 2 for x in vsub(mat_apply(w, lam2), mu2)))
    return betas


def run_backend(ctx_cls, rd, betas):
    roots = tuple(sorted(rd.positive_roots, reverse=True))
    ctx = ctx_cls(roots, rd.pair2_form)
    sink = 0
    t0 = time.perf_counter()
    for beta in betas:
        sink += sum(ctx.counts(beta).values())
    return time.perf_counter() - t0, sink


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = available_backends()
    workloads = [
        ("gl3 size<=12", build_gl(3), 12),
        ("gl4 size<=8", build_gl(4), 8),
        ("c3 size<=6", build_preset("c3"), 6),
    ]
    print(f"backends: {', '.join(sorted(backends))}")
    print(f"{'workload':<14} {'pairs':>6} " + " ".join(f"{n:>12}" for n in sorted(backends)) + "  speedup")
    for name, rd, cap in workloads:
        pairs = workload_pairs(rd, cap)
        betas = alternating_sum_betas(rd, pairs)
        times = {}
        checks = set()
        for bname, cls in sorted(backends.items()):
            best = None
            for _ in range(args.repeat):
                t, sink = run_backend(cls, rd, betas)
                best = t if best is None else min(best, t)
                checks.add(sink)
            times[bname] = best
        assert len(checks) == 1, "backends disagree"
        cols = " ".join(f"{times[n]*1000:>10.1f}ms" for n in sorted(backends))
        if "cython" in times and "python" in times:
            ratio = times["python"] / times["cython"]
            print(f"{name:<14} {len(pairs):>6} {cols}  {ratio:>6.2f}x")
        else:
            print(f"{name:<14} {len(pairs):>6} {cols}")


if __name__ == "__main__":
    main()
