"""Acceptance criteria 1-8, one test each.

Every test records a PASS/FAIL line with the measured quantity; the lines
are repeated in the pytest terminal summary.
"""

from __future__ import annotations

import functools
import math
import time

import mpmath
import numpy as np
import pytest

from boundary_ising.checks import bk_residual, orthogonality_residual, recursion_residual
from boundary_ising.correlate import (
    CorrelationMatrix,
    correlations,
    correlations_recursive,
    double,
    extract_correlations,
    regular_correlation,
    regular_correlation_matrix,
    scaling_limit,
)
from boundary_ising.curve import fourier_matrix, gamma
from boundary_ising.oracle import oracle_correlations
from boundary_ising.region import (
    Region,
    all_matchings,
    is_connected,
    random_region,
    regular_polygon,
    staple_region,
)

SWEEP_SEED = 8


@functools.lru_cache(maxsize=None)
def sweep() -> tuple[Region, ...]:
    """Every connected matching with 2n <= 8, three random valid shapes each."""
    rng = np.random.default_rng(SWEEP_SEED)
    out = []
    for n in range(1, 5):
        for m in all_matchings(n):
            if is_connected(m):
                out.extend(random_region(m, rng) for _ in range(3))
    return tuple(out)


def max_abs(a: CorrelationMatrix, b: CorrelationMatrix) -> float:
    return float(np.max(np.abs(a.entries - b.entries)))


def test_criterion_1_square_golden_value(acceptance):
    correlations(regular_polygon(1))  # warm imports
    t0 = time.perf_counter()
    value = correlations(regular_polygon(2))[1, 2]
    elapsed = time.perf_counter() - t0
    err = abs(value - (math.sqrt(2) - 1))
    ok = err <= 1e-12 and elapsed < 0.010
    acceptance(1, ok, f"|<s1 s2> - (sqrt2 - 1)| = {err:.1e} (tol 1e-12), {elapsed * 1e3:.2f} ms (< 10 ms)")
    assert ok


def _closed_form_mp(n: int, k: int) -> mpmath.mpf:
    total = mpmath.mpf((-1) ** k)
    for i in range(1, k + 1):
        total += (-1) ** (k - i) * 2 / (n * mpmath.sin((2 * i - 1) * mpmath.pi / (2 * n)))
    return total


def test_criterion_2_closed_form_consistency(acceptance):
    t0 = time.perf_counter()
    pipeline_err = max(
        max_abs(correlations(regular_polygon(n)), regular_correlation_matrix(n)) for n in range(2, 13)
    )
    float_asym = max(
        abs(regular_correlation(n, 1, 1 + k) - regular_correlation(n, 1, 1 + n - k))
        for n in range(2, 51) for k in range(1, n)
    )
    elapsed = time.perf_counter() - t0
    # exactness of the symmetry itself, checked in 60-digit arithmetic (not timed)
    with mpmath.workdps(60):
        exact_asym = max(
            abs(_closed_form_mp(n, k) - _closed_form_mp(n, n - k)) for n in range(2, 51) for k in range(1, n)
        )
    ok = pipeline_err <= 1e-9 and exact_asym <= mpmath.mpf("1e-45") and float_asym <= 1e-14 and elapsed < 1.0
    acceptance(
        2, ok,
        f"pipeline vs closed form {pipeline_err:.1e} (tol 1e-9); k<->n-k asymmetry "
        f"{float(exact_asym):.1e} at 60 digits, {float_asym:.1e} in double; {elapsed:.3f} s (< 1 s)",
    )
    assert ok


def test_criterion_3_oracle_equivalence(acceptance):
    t0 = time.perf_counter()
    regions = sweep()
    worst = max(max_abs(oracle_correlations(r, placements=3).correlations, correlations(r)) for r in regions)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 60
    acceptance(3, ok, f"{len(regions)} regions, max |oracle - formula| = {worst:.1e} (tol 1e-9), {elapsed:.2f} s (< 60 s)")
    assert ok


def _jittered(r: Region, delta: float, rng: np.random.Generator) -> Region:
    theta = list(r.theta)
    for a, b in r.matching.pairs():
        shift = delta * rng.uniform(-1, 1)
        theta[a - 1] += shift
        theta[b - 1] += shift
    return Region(r.matching, tuple(theta))


def test_criterion_4_alternating_region(acceptance):
    staple = staple_region()
    derivative = correlations(staple, "derivative")
    oracle_err = max_abs(derivative, oracle_correlations(staple, placements=5).correlations)
    errs = []
    for delta in (1e-4, 1e-5):
        perturbed = _jittered(staple, delta, np.random.default_rng(4))
        errs.append(max_abs(correlations(perturbed, "fourier"), derivative))
    ok = oracle_err <= 1e-9 and errs[1] < errs[0]
    acceptance(
        4, ok,
        f"derivative basis vs oracle {oracle_err:.1e} (tol 1e-9); jittered Fourier error "
        f"{errs[0]:.2e} at 1e-4 -> {errs[1]:.2e} at 1e-5 (decreasing)",
    )
    assert ok


def test_criterion_5_path_equivalence(acceptance):
    regions = sweep()
    worst = max(max_abs(correlations(r), correlations_recursive(r)) for r in regions)
    ok = worst <= 1e-9
    acceptance(5, ok, f"{len(regions)} regions, max |pipeline - recursive| = {worst:.1e} (tol 1e-9)")
    assert ok


def test_criterion_6_property_suites(acceptance):
    regions = sweep() + (regular_polygon(5), regular_polygon(6))
    ortho = max(orthogonality_residual(r, pairs=20, seed=i) for i, r in enumerate(regions))
    bk = max(bk_residual(r) for r in regions)
    rec = max(recursion_residual(r, seed=i) for i, r in enumerate(regions))

    rng = np.random.default_rng(6)
    exact = True
    for _ in range(100):
        n = int(rng.integers(1, 9))
        A = rng.uniform(-1, 1, (n, n))
        M = (A + A.T) / 2
        np.fill_diagonal(M, 1.0)
        exact &= bool(np.array_equal(extract_correlations(double(M)).entries, M))

    band_leak = 0.0
    for r in regions:
        N = 4 * r.n + 8
        coeffs = np.fft.fft(gamma(r, 2 * np.pi * np.arange(N) / N), axis=0) / N
        mask = np.ones(N, dtype=bool)
        mask[[f % N for f in range(-(r.n - 1), r.n, 2)]] = False
        band_leak = max(band_leak, float(np.max(np.abs(coeffs[mask]))) if mask.any() else 0.0)
        assert fourier_matrix(r).shape == (r.n, r.size)

    ok = ortho <= 1e-10 and bk <= 1e-10 and exact and rec <= 1e-10 and band_leak <= 1e-10
    acceptance(
        6, ok,
        f"orthogonality {ortho:.1e}, |BK - I| {bk:.1e}, double/extract exact on 100 matrices: {exact}, "
        f"crossing-removal identity {rec:.1e}, out-of-band Fourier {band_leak:.1e} (tols 1e-10)",
    )
    assert ok


def test_criterion_7_scaling_limit(acceptance):
    t0 = time.perf_counter()
    x = 0.5
    errors = []
    for n in (64, 128, 256, 512):
        errors.append(abs(n * regular_correlation(n, 1, math.floor(n * x)) - scaling_limit(x)))
    elapsed = time.perf_counter() - t0
    decreasing = all(a > b for a, b in zip(errors, errors[1:]))
    ok = errors[-1] <= 0.02 * scaling_limit(x) and decreasing and elapsed < 1.0
    acceptance(
        7, ok,
        f"error at n=512: {errors[-1]:.2e} (tol 2e-2); errors "
        f"{', '.join(f'{e:.1e}' for e in errors)} strictly decreasing: {decreasing}; {elapsed * 1e3:.1f} ms",
    )
    assert ok


def test_criterion_8_arrangement_independence(acceptance):
    regions = sweep() + (regular_polygon(2), regular_polygon(3), regular_polygon(4), staple_region())
    spread = max(oracle_correlations(r, placements=5, seed=11, check=False).spread for r in regions)
    ok = spread <= 1e-9
    acceptance(8, ok, f"{len(regions)} regions x 5 placements, max spread {spread:.1e} (tol 1e-9)")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
