"""Compare the numba kernels with the pure-numpy fallbacks.

Usage: python3 benchmarks/bench_kernels.py [--repeat 3] [--groups Z6,S3,D4]

Each kernel is run once untimed on both backends (compilation, caches),
then timed as the best of ``--repeat`` runs.  Results are checked equal.
"""
import argparse
import time

import numpy as np

from tenfact import kernels
from tenfact.cohomology import RANK_PRIME, coboundary_matrix
from tenfact.groups import catalog


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def rows_for(name, g, repeat):
    rows = []
    d3 = coboundary_matrix(g, 3).toarray()
    d4 = coboundary_matrix(g, 4)
    rng = np.random.default_rng(0)
    s = rng.integers(0, RANK_PRIME, size=(min(512, d4.shape[0]), d4.shape[0]))
    proj = (s % RANK_PRIME) @ (d4.toarray() % RANK_PRIME) % RANK_PRIME if d4.shape[0] <= 4096 else None
    cases = [
        ("coboundary d4", lambda impl: impl.coboundary_coo(g.table, g.identity, 4, True), lambda a, b: len(a[0]) == len(b[0])),
        ("local valuations d3 at 2", lambda impl: list(impl.local_valuations(d3, 2, 4)), lambda a, b: sorted(a) == sorted(b)),
        ("rank d3 mod p", lambda impl: impl.rank_mod_p(d3, RANK_PRIME), lambda a, b: a == b),
    ]
    if proj is not None:
        cases.append(("rank S*d4 mod p", lambda impl: impl.rank_mod_p(proj, RANK_PRIME), lambda a, b: a == b))
    for label, call, same in cases:
        tj, rj = best_of(lambda: call(kernels.jit_impl), repeat)
        tn, rn = best_of(lambda: call(kernels.numpy_impl), repeat)
        assert same(rj, rn), (name, label)
        rows.append((name, label, tj, tn))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--groups", default="Z4,Z5,Z6,S3")
    args = ap.parse_args()
    if kernels.jit_impl is None:
        raise SystemExit("numba is not installed; nothing to compare")
    groups = catalog(12)
    print(f"{'group':8} {'kernel':26} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for name in args.groups.split(","):
        for g_name, label, tj, tn in rows_for(name, groups[name], args.repeat):
            print(f"{g_name:8} {label:26} {tj:10.4f} {tn:10.4f} {tn / tj:8.1f}")


if __name__ == "__main__":
    main()
