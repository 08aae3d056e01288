"""The curve of a region and the row bases built from it.

``gamma(r, t)`` has coordinates ``prod_{j in J~_k} sin(t - theta~_j)``. Its
real span (equivalently, the complex span of ``gamma_complex``) is the
subspace from which boundary correlations are read off. Three bases of that
span are provided: Fourier coefficients, samples at ``n`` points, and the
derivative basis that also works for alternating regions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P

from . import numerics
from .errors import BadSamplePoints, IndexOutOfRange, RankDeficient
from .numerics import DEFAULT_POLICY, TolerancePolicy
from .region import (
    Region,
    affine_theta,
    j_set,
    j_set_affine,
    multiplicity,
    support,
)

__all__ = [
    "SpanBasis",
    "elementary_symmetric",
    "gamma",
    "gamma_signed",
    "gamma_complex",
    "gamma_polynomials",
    "fourier_matrix",
    "fourier_basis",
    "default_sample_points",
    "sample_basis",
    "derivative_basis",
    "multiplicity",
    "support",
]


@dataclass(frozen=True)
class SpanBasis:
    rows: np.ndarray
    provenance: str

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape


@lru_cache(maxsize=256)
def _affine_data(r: Region):
    """Per coordinate: affine J-set, its angles and the half-angle phases."""
    sets = []
    for k in range(1, r.size + 1):
        js = j_set_affine(r, k)
        angles = np.array([affine_theta(r, j) for j in js], dtype=float)
        sets.append((tuple(js), angles))
    return tuple(sets)


def _v_affine(r: Region, j: int) -> complex:
    return complex(r.v[(j - 1) % r.size])


def gamma(r: Region, t):
    """Evaluate the curve; ``t`` may be a scalar or an array (coordinates last)."""
    t = np.asarray(t, dtype=float)
    out = np.ones(t.shape + (r.size,))
    for k, (_, angles) in enumerate(_affine_data(r)):
        for a in angles:
            out[..., k] *= np.sin(t - a)
    return out


def gamma_signed(r: Region, t):
    """Same curve from the finite J-sets with the explicit sign prefactor."""
    t = np.asarray(t, dtype=float)
    out = np.ones(t.shape + (r.size,))
    for k in range(1, r.size + 1):
        js = j_set(r, k)
        sign = (-1) ** sum(1 for j in js if j < k)
        col = np.full(t.shape, float(sign))
        for j in js:
            col = col * np.sin(t - r.theta[j - 1])
        out[..., k - 1] = col
    return out


def gamma_complex(r: Region, T) -> np.ndarray:
    """``Gamma_k(T) = prod_{j in J~_k} (T - v_j) / T_j`` with affine ``T_j``."""
    T = np.asarray(T, dtype=complex)
    out = np.ones(T.shape + (r.size,), dtype=complex)
    for k, (js, angles) in enumerate(_affine_data(r)):
        for j, a in zip(js, angles):
            out[..., k] *= (T - _v_affine(r, j)) / cmath.exp(1j * a)
    return out


def elementary_symmetric(xs) -> np.ndarray:
    """``[e_0, e_1, ..., e_m]`` of ``xs`` by multiplying in one linear factor at a time."""
    xs = np.asarray(xs)
    e = np.zeros(len(xs) + 1, dtype=np.result_type(xs.dtype, float))
    e[0] = 1
    for i, x in enumerate(xs, start=1):
        e[1:i + 1] = e[1:i + 1] + x * e[0:i]
    return e


def fourier_matrix(r: Region) -> np.ndarray:
    """n x 2n matrix ``f_{j,k} = e_{j-1}(v_m : m in J~_k) / prod T_m``.

    The row-dependent factor ``(-1)^(n-j) / (2i)^(n-1)`` of the Fourier
    expansion is left out; it does not change the row span.
    """
    n = r.n
    F = np.empty((n, r.size), dtype=complex)
    for k, (js, angles) in enumerate(_affine_data(r)):
        vs = np.array([_v_affine(r, j) for j in js], dtype=complex)
        e = elementary_symmetric(vs)
        F[:, k] = e[:n] / np.prod(np.exp(1j * angles))
    return F


def fourier_basis(r: Region, policy: TolerancePolicy = DEFAULT_POLICY) -> SpanBasis:
    F = fourier_matrix(r)
    rk = numerics.rank(F, policy)
    if rk < r.n:
        raise RankDeficient(
            f"Fourier matrix has rank {rk} < n = {r.n}; the region is alternating "
            "(use the derivative basis)"
        )
    return SpanBasis(F, "fourier")


def default_sample_points(n: int) -> np.ndarray:
    return (2 * np.arange(1, n + 1) - 1) * math.pi / (2 * n)


def sample_basis(r: Region, ts=None, policy: TolerancePolicy = DEFAULT_POLICY) -> SpanBasis:
    """Rows ``gamma(t_1), ..., gamma(t_n)`` for increasing ``t_m`` in ``[0, pi)``."""
    ts = default_sample_points(r.n) if ts is None else np.asarray(ts, dtype=float)
    if ts.shape != (r.n,):
        raise BadSamplePoints(f"need exactly n = {r.n} sample points, got {ts.size}")
    if np.any(ts < 0) or np.any(ts >= math.pi) or np.any(np.diff(ts) <= 0):
        raise BadSamplePoints("sample points must be strictly increasing in [0, pi)")
    A = gamma(r, ts)
    rk = numerics.rank(A, policy)
    if rk < r.n:
        raise RankDeficient(
            f"sampled curve has rank {rk} < n = {r.n} (alternating region or degenerate points)"
        )
    return SpanBasis(A, "samples")


def gamma_polynomials(r: Region) -> list[np.ndarray]:
    """Coefficients (lowest degree first) of each ``Gamma_k`` as a polynomial in ``T``."""
    polys = []
    for js, angles in _affine_data(r):
        c = np.array([1.0 + 0j])
        for j, a in zip(js, angles):
            c = P.polymul(c, np.array([-_v_affine(r, j), 1.0]) / cmath.exp(1j * a))
        polys.append(c)
    return polys


def derivative_basis(r: Region, k: int = 1) -> SpanBasis:
    """Rows ``u^(j)`` for ``j`` in ``J_k`` and ``k``, ordered cyclically from ``k``.

    ``u^(j)`` is the ``m_j``-th derivative of ``Gamma`` at ``v_j``, with the
    coordinates outside ``supp(j)`` set to zero.
    """
    if not 1 <= k <= r.size:
        raise IndexOutOfRange(f"index {k} outside [1, {r.size}]")
    polys = gamma_polynomials(r)
    v = r.v
    rows_idx = sorted(j_set(r, k) + [k], key=lambda j: (j - k) % r.size)
    rows = np.zeros((len(rows_idx), r.size), dtype=complex)
    for row, j in zip(rows, rows_idx):
        order = multiplicity(r, j)
        for i in support(r.matching, j):
            c = P.polyder(polys[i - 1], order) if order else polys[i - 1]
            row[i - 1] = P.polyval(v[j - 1], c)
    return SpanBasis(rows, "derivative")
