"""From a row basis of the curve span to boundary correlations.

The doubling map sends a correlation matrix ``M`` to an n x 2n matrix whose
row span determines ``M``. Given any basis ``A`` of that span,
``B = (A K_n)^{-1} A`` recovers the doubled matrix itself, and ``M`` is read
off from its odd columns with alternating signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import curve
from .errors import (
    AsymmetryAboveTolerance,
    DomainError,
    NotADescent,
    RegionError,
    ResidualImaginary,
    SignPatternViolation,
    Singular,
    SingularProduct,
)
from .numerics import DEFAULT_POLICY, TolerancePolicy, lu_solve
from .region import (
    Region,
    affine_theta,
    crossing_number,
    descents,
    is_alternating,
    j_set,
    regular_polygon,
    remove_crossing,
)

BASES = ("auto", "fourier", "samples", "derivative", "recursive")


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric matrix of boundary spin correlations, ones on the diagonal.

    ``discrepancy`` is the largest disagreement between the two independent
    reads of an off-diagonal entry during extraction (0 when built directly).
    """

    entries: np.ndarray
    discrepancy: float = 0.0

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"correlation matrix must be square, got shape {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("correlation matrix must be symmetric")
        if not np.all(np.diag(m) == 1.0):
            raise ValueError("correlation matrix must have ones on the diagonal")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, jk) -> float:
        # 1-based access: corr[j, k]
        j, k = jk
        return float(self.entries[j - 1, k - 1])


@dataclass(frozen=True)
class DoubledMatrix:
    entries: np.ndarray

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def k_matrix(n: int) -> np.ndarray:
    K = np.zeros((2 * n, n))
    idx = np.arange(n)
    K[2 * idx, idx] = 0.5
    K[2 * idx + 1, idx] = 0.5
    return K


def _double_sign(j: int, k: int) -> int:
    # sign of m~_{j,2k-1} relative to m_{j,k}, 1-based, j != k
    return (-1) ** (j + k + (1 if j < k else 0))


def double(m: CorrelationMatrix | np.ndarray) -> DoubledMatrix:
    M = m.entries if isinstance(m, CorrelationMatrix) else np.asarray(m, dtype=float)
    n = M.shape[0]
    D = np.empty((n, 2 * n))
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            if j == k:
                D[j - 1, 2 * k - 2] = D[j - 1, 2 * k - 1] = 1.0
            else:
                val = _double_sign(j, k) * M[j - 1, k - 1]
                D[j - 1, 2 * k - 2] = val
                D[j - 1, 2 * k - 1] = -val
    return DoubledMatrix(D)


def doubled_from_span(a, policy: TolerancePolicy = DEFAULT_POLICY) -> DoubledMatrix:
    """``B = (A K_n)^{-1} A`` for a basis ``A`` (real or complex) of the span."""
    A = np.asarray(a.rows if isinstance(a, curve.SpanBasis) else a)
    n = A.shape[0]
    if A.shape != (n, 2 * n):
        raise ValueError(f"basis must be n x 2n, got shape {A.shape}")
    try:
        B = lu_solve(A @ k_matrix(n), A, policy)
    except Singular as exc:
        raise SingularProduct(f"A K_n is not invertible: {exc}") from exc
    if np.iscomplexobj(B):
        scale = max(1.0, float(np.max(np.abs(B.real))))
        imag = float(np.max(np.abs(B.imag)))
        if imag > policy.residual_eps * scale:
            raise ResidualImaginary(f"imaginary residual {imag:.3e} exceeds tolerance")
        B = B.real.copy()
    return DoubledMatrix(B)


def extract_correlations(b: DoubledMatrix | np.ndarray,
                         policy: TolerancePolicy = DEFAULT_POLICY) -> CorrelationMatrix:
    """Read ``M`` off a doubled matrix, checking the sign layout on the way."""
    B = b.entries if isinstance(b, DoubledMatrix) else np.asarray(b, dtype=float)
    n = B.shape[0]
    odd, even = B[:, 0::2], B[:, 1::2]
    scale = max(1.0, float(np.max(np.abs(B))))
    tol = policy.agreement_eps * scale
    diag = np.arange(n)
    pattern = np.where(np.eye(n, dtype=bool), odd - even, odd + even)
    worst = float(np.max(np.abs(pattern))) if n else 0.0
    worst = max(worst, float(np.max(np.abs(odd[diag, diag] - 1.0))))
    if worst > tol:
        raise SignPatternViolation(f"doubled matrix deviates from the sign layout by {worst:.3e}")

    M = np.eye(n)
    discrepancy = 0.0
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            upper = _double_sign(j, k) * odd[j - 1, k - 1]
            lower = _double_sign(k, j) * odd[k - 1, j - 1]
            discrepancy = max(discrepancy, abs(upper - lower))
            M[j - 1, k - 1] = M[k - 1, j - 1] = (upper + lower) / 2
    if discrepancy > tol:
        raise AsymmetryAboveTolerance(
            f"the two reads of an entry differ by {discrepancy:.3e}"
        )
    return CorrelationMatrix(M, discrepancy)


# ---------------------------------------------------------------------------
# crossing removal
# ---------------------------------------------------------------------------


def g_matrix(r: Region, k: int) -> np.ndarray:
    """The 2n x 2n matrix attached to a descent ``k``."""
    if k not in descents(r):
        raise NotADescent(f"{k} is not a descent")
    size, n = r.size, r.n
    d = affine_theta(r, k + 1) - affine_theta(r, k)
    s, c = math.sin(d), math.cos(d)
    g = np.eye(size)
    if k < size:
        g[k - 1, k - 1] = g[k, k] = 1 / c
        g[k - 1, k] = g[k, k - 1] = s / c
    else:
        g[0, 0] = g[-1, -1] = 1 / c
        g[0, -1] = g[-1, 0] = (-1) ** (n - 1) * s / c
    return g


def noncrossing_basis(r: Region) -> np.ndarray:
    """Rows ``e_a + eps_{a,b} e_b`` over the chords of a non-crossing matching."""
    if crossing_number(r.matching):
        raise RegionError("noncrossing_basis needs a non-crossing matching")
    rows = []
    for j in sorted(j_set(r, 1) + [1]):
        a, b = sorted((j, r.tau(j)))
        row = np.zeros(r.size)
        row[a - 1] = 1.0
        row[b - 1] = (-1) ** ((b - a - 1) // 2)
        rows.append(row)
    return np.array(rows)


def recursive_basis(r: Region) -> curve.SpanBasis:
    """Remove descents one at a time, then push the base span back through the g's."""
    gs = []
    cur = r
    while crossing_number(cur.matching):
        k = descents(cur)[0]
        gs.append(g_matrix(cur, k))
        cur = remove_crossing(cur, k)
    A = noncrossing_basis(cur)
    for g in reversed(gs):
        A = A @ g
    return curve.SpanBasis(A, "noncrossing-recursive")


# ---------------------------------------------------------------------------
# end to end
# ---------------------------------------------------------------------------


def span_basis(r: Region, basis: str = "auto", *, samples=None, k: int = 1,
               policy: TolerancePolicy = DEFAULT_POLICY) -> curve.SpanBasis:
    if basis == "auto":
        basis = "derivative" if is_alternating(r) else "fourier"
    if basis == "fourier":
        return curve.fourier_basis(r, policy)
    if basis == "samples":
        return curve.sample_basis(r, samples, policy)
    if basis == "derivative":
        return curve.derivative_basis(r, k)
    if basis == "recursive":
        return recursive_basis(r)
    raise ValueError(f"unknown basis {basis!r}; expected one of {BASES}")


def correlations(r: Region, basis: str = "auto", *, samples=None, k: int = 1,
                 policy: TolerancePolicy = DEFAULT_POLICY) -> CorrelationMatrix:
    """Boundary correlation matrix of ``r``.

    ``basis="auto"`` uses Fourier coefficients for non-alternating regions and
    the derivative basis otherwise.
    """
    A = span_basis(r, basis, samples=samples, k=k, policy=policy)
    return extract_correlations(doubled_from_span(A, policy), policy)


def correlations_recursive(r: Region, policy: TolerancePolicy = DEFAULT_POLICY) -> CorrelationMatrix:
    return correlations(r, "recursive", policy=policy)


# ---------------------------------------------------------------------------
# regular polygons
# ---------------------------------------------------------------------------


def regular_correlation(n: int, p: int, q: int) -> float:
    """Closed-form correlation between boundary spins ``p`` and ``q`` of the regular 2n-gon."""
    if n < 1 or not (1 <= p <= n and 1 <= q <= n):
        raise DomainError(f"need 1 <= p, q <= n, got n={n}, p={p}, q={q}")
    k = abs(p - q)
    if k == 0:
        return 1.0
    terms = [
        (-1) ** (k - i) * 2 / (n * math.sin((2 * i - 1) * math.pi / (2 * n)))
        for i in range(1, k + 1)
    ]
    terms.append((-1) ** k)
    return math.fsum(terms)


def regular_correlation_matrix(n: int) -> CorrelationMatrix:
    row = [regular_correlation(n, 1, 1 + d) for d in range(n)]
    M = np.array([[row[abs(p - q)] for q in range(n)] for p in range(n)])
    return CorrelationMatrix(M)


def regular_pipeline_row(n: int, basis: str = "fourier",
                         policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    return correlations(regular_polygon(n), basis, policy=policy).entries[0].copy()


def scaling_limit(x: float) -> float:
    if not 0 < x < 1:
        raise DomainError(f"x must lie in (0, 1), got {x}")
    return 1 / math.sin(math.pi * x)


def cyclic_shift_matrix(n: int) -> np.ndarray:
    """Matrix ``S`` with ``x @ S = ((-1)^(n-1) x_2n, x_1, ..., x_{2n-1})``."""
    size = 2 * n
    S = np.zeros((size, size))
    for i in range(size - 1):
        S[i, i + 1] = 1.0
    S[size - 1, 0] = (-1) ** (n - 1)
    return S
