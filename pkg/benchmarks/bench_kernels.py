"""Compiled vs numpy kernels on the workloads that dominate the experiments.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each workload is run on both backends with identical inputs; the table shows
the best wall time of ``--repeat`` runs and the largest difference between the
two backends' results.
"""

import argparse
import json
import sys
import timeit

import numpy as np

from spacelike._kernels import _pykernels, compiled_backend
from spacelike.core import equality_families
from spacelike.space import Structure, affine_projector, sample_flat


def _workloads():
    tpl = Structure.parse("2x2x2x2").template()
    bptr = tpl.block_ptr()
    X = sample_flat(np.random.default_rng(0), bptr, 100_000)
    fam_r, fam_l = equality_families(tpl)

    big = Structure.parse("3x3x3x3").template()
    Xb = sample_flat(np.random.default_rng(1), big.block_ptr(), 100)
    M = affine_projector(big)

    V = np.random.default_rng(2).normal(size=(2000, big.size))

    def spread(k):
        return np.concatenate([k.family_spread_batch(X, f.ptr, f.idx, f.group_ptr)
                               for f in (fam_r, fam_l)])

    def dykstra(k):
        return np.concatenate([k.dykstra(x, M, np.zeros(big.size), big.block_ptr(), 10_000,
                                         1e-12)[0] for x in Xb])

    def simplex(k):
        return np.concatenate([k.project_simplex_blocks(v, big.block_ptr()) for v in V])

    return [
        ("signaling measure, 1e5 samples of 2x2x2x2", spread),
        ("Dykstra projection, 100 points of 3x3x3x3", dykstra),
        ("simplex projection, 2000 vectors of 3x3x3x3", simplex),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args(argv)

    ck = compiled_backend()
    if ck is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1
    rows = []
    print(f"{'workload':46s} {'numpy':>10s} {'cython':>10s} {'speedup':>8s} {'max diff':>9s}")
    for name, fn in _workloads():
        t_py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        t_c = min(timeit.repeat(lambda: fn(ck), number=1, repeat=args.repeat))
        diff = float(np.max(np.abs(fn(_pykernels) - fn(ck))))
        rows.append({"workload": name, "numpy_s": t_py, "cython_s": t_c,
                     "speedup": t_py / t_c, "max_abs_diff": diff})
        print(f"{name:46s} {t_py:9.4f}s {t_c:9.4f}s {t_py / t_c:7.1f}x {diff:9.1e}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
