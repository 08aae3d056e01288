"""Compare the compiled Gray-code kernel with the numpy fallback.

Usage: python3 benchmarks/bench_enumeration.py [--max-n 9] [--repeat 3]

Each row enumerates the Ising graph of a regular 2n-gon with both backends
and reports wall time and the largest difference between their correlations.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from boundary_ising import _enumerate
from boundary_ising.oracle import build_arrangement, build_ising_graph, exact_correlations
from boundary_ising.region import regular_polygon


def best_of(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=9)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not _enumerate.compiled_available():
        print("compiled kernel not built; only the python backend is timed")
    print(f"{'n':>3} {'|V|':>4} {'python s':>10} {'cython s':>10} {'speedup':>8} {'max diff':>10}")
    for n in range(4, args.max_n + 1):
        r = regular_polygon(n)
        g = build_ising_graph(build_arrangement(r.matching, 0), r)
        t_py, m_py = best_of(lambda: exact_correlations(g, "python"), args.repeat)
        if _enumerate.compiled_available():
            t_c, m_c = best_of(lambda: exact_correlations(g, "cython"), args.repeat)
            diff = float(np.max(np.abs(m_py.entries - m_c.entries)))
            print(f"{n:>3} {g.n_vertices:>4} {t_py:>10.4f} {t_c:>10.4f} {t_py / t_c:>8.1f} {diff:>10.1e}")
        else:
            print(f"{n:>3} {g.n_vertices:>4} {t_py:>10.4f} {'-':>10} {'-':>8} {'-':>10}")


if __name__ == "__main__":
    main()
