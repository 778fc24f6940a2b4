"""Benchmark the fold-simulation kernels: pure-numpy vs compiled.

Usage: python benchmarks/bench_core.py [--repeat N]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from tenantsim.pearray import _core_py
from tenantsim.pearray import core

CASES = [
    ("8x8 fold, t=16", 8, 1, [(0, 0, (8, 8), (16, 8))]),
    ("32x32 fold, t=64", 32, 1, [(0, 0, (32, 32), (64, 32))]),
    ("2x 64x32 folds, t=128", 64, 2,
     [(0, 0, (64, 32), (128, 64)), (1, 32, (64, 32), (128, 64))]),
    ("128x128 fold, t=256", 128, 1, [(0, 0, (128, 128), (256, 128))]),
]


def materialize(case):
    name, total_cols, n_slots, shapes = case
    rng = np.random.default_rng(0)
    asg = [(slot, cs, rng.integers(-7, 8, wshape), rng.integers(-7, 8, xshape))
           for slot, cs, wshape, xshape in shapes]
    return name, total_cols, n_slots, asg


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    args = ap.parse_args()

    impls = [("python", _core_py.simulate)]
    if "cython" in core.available_backends():
        from tenantsim.pearray import _core_cy
        impls.append(("cython", _core_cy.simulate))
    else:
        print("note: compiled backend unavailable; benchmarking python only")

    print(f"{'case':28s}" + "".join(f"{n:>12s}" for n, _ in impls) + f"{'speedup':>10s}")
    for case in CASES:
        name, total_cols, n_slots, asg = materialize(case)
        base = None
        times = []
        for _, fn in impls:
            t = min(timeit.repeat(lambda: fn(total_cols, n_slots, asg),
                                  number=1, repeat=args.repeat))
            times.append(t)
        row = f"{name:28s}" + "".join(f"{t * 1000:10.1f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:9.1f}x"
        print(row)

        # sanity: all implementations agree exactly
        ref = impls[0][1](total_cols, n_slots, asg)
        for _, fn in impls[1:]:
            got = fn(total_cols, n_slots, asg)
            for (o1, c1, n1), (o2, c2, n2) in zip(ref, got):
                assert np.array_equal(o1, o2) and c1 == c2 and n1 == n2


if __name__ == "__main__":
    main()
