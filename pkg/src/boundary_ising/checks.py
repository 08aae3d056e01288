"""Invariant suite run by ``boundary-ising check`` and the test-suite."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import curve, oracle
from .correlate import (
    correlations,
    doubled_from_span,
    g_matrix,
    k_matrix,
    span_basis,
)
from .errors import BoundaryIsingError
from .numerics import DEFAULT_POLICY, TolerancePolicy
from .region import Region, descents, is_alternating, remove_crossing

IDENTITY_EPS = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def orthogonality_residual(r: Region, pairs: int = 20, seed: int = 0) -> float:
    """Largest relative size of ``sum_k (-1)^(k+1) gamma_k(t) gamma_k(t')``."""
    rng = np.random.default_rng(seed)
    ts = rng.uniform(0, np.pi, size=(pairs, 2))
    g1, g2 = curve.gamma(r, ts[:, 0]), curve.gamma(r, ts[:, 1])
    signs = (-1.0) ** np.arange(r.size)
    prod = g1 * g2
    num = np.abs(prod @ signs)
    den = np.maximum(np.sum(np.abs(prod), axis=1), np.finfo(float).tiny)
    return float(np.max(num / den))


def bk_residual(r: Region, basis: str = "auto", policy: TolerancePolicy = DEFAULT_POLICY) -> float:
    B = doubled_from_span(span_basis(r, basis, policy=policy), policy).entries
    return float(np.max(np.abs(B @ k_matrix(r.n) - np.eye(r.n))))


def recursion_residual(r: Region, samples: int = 16, seed: int = 0) -> float:
    """Worst ``|gamma_R(t) - gamma_R'(t) g_k|`` over every descent ``k``, relative to ``|gamma_R|``."""
    rng = np.random.default_rng(seed)
    ts = rng.uniform(0, np.pi, samples)
    worst = 0.0
    lhs = curve.gamma(r, ts)
    scale = max(float(np.max(np.abs(lhs))), 1e-300)
    for k in descents(r):
        rhs = curve.gamma(remove_crossing(r, k), ts) @ g_matrix(r, k)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))) / scale)
    return worst


def applicable_bases(r: Region) -> list[str]:
    if is_alternating(r):
        return ["derivative", "recursive"]
    return ["fourier", "samples", "derivative", "recursive"]


def basis_spread(r: Region, policy: TolerancePolicy = DEFAULT_POLICY) -> float:
    mats = [correlations(r, b, policy=policy).entries for b in applicable_bases(r)]
    return max(float(np.max(np.abs(a - b))) for a, b in itertools.combinations(mats, 2)) if len(mats) > 1 else 0.0


def run_checks(r: Region, policy: TolerancePolicy = DEFAULT_POLICY, *,
               placements: int = 3, seed: int = 0, with_oracle: bool = True) -> list[CheckResult]:
    out: list[CheckResult] = []

    def record(name, fn, limit):
        try:
            value = fn()
        except BoundaryIsingError as exc:
            out.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}"))
            return
        out.append(CheckResult(name, value <= limit, f"{value:.3e} (limit {limit:.0e})"))

    record("orthogonality", lambda: orthogonality_residual(r, seed=seed), IDENTITY_EPS)
    record("BK=I", lambda: bk_residual(r, policy=policy), IDENTITY_EPS)
    record("basis-equivalence", lambda: basis_spread(r, policy), policy.agreement_eps)
    record("recursion-identity", lambda: recursion_residual(r, seed=seed), IDENTITY_EPS)

    if with_oracle:
        try:
            arr = oracle.build_arrangement(r.matching, seed)
            size = oracle.build_ising_graph(arr, r).n_vertices
        except BoundaryIsingError as exc:
            out.append(CheckResult("oracle", False, f"{type(exc).__name__}: {exc}"))
            return out
        if size > oracle.MAX_VERTICES:
            out.append(CheckResult("oracle", True, f"skipped ({size} vertices)"))
            return out

        def oracle_gap():
            res = oracle.oracle_correlations(r, placements, seed, policy, check=False)
            diff = float(np.max(np.abs(res.entries - correlations(r, policy=policy).entries)))
            return max(diff, res.spread)

        record("oracle", oracle_gap, policy.agreement_eps)
    return out
