"""Small dense linear algebra and the shared tolerance policy.

LAPACK (through scipy) does the factorizations; this module only adds the
singularity thresholds and the row-span comparisons used across the package.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from .errors import Singular


@dataclass(frozen=True)
class TolerancePolicy:
    angle_eps: float = 1e-9
    solve_eps: float = 1e-12
    residual_eps: float = 1e-9
    agreement_eps: float = 1e-9

    def __post_init__(self):
        for name in ("angle_eps", "solve_eps", "residual_eps", "agreement_eps"):
            value = getattr(self, name)
            if not (value > 0 and np.isfinite(value)):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    def with_overrides(self, **kwargs) -> "TolerancePolicy":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


DEFAULT_POLICY = TolerancePolicy()


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite 2-d array (real or complex)."""
    arr = np.asarray(a)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.complexfloating):
        arr = arr.astype(float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def lu_solve(a, b, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Solve ``a @ x = b`` by LU with partial pivoting.

    Raises ``Singular`` when a pivot falls below ``solve_eps * max|a|``.
    """
    a = as_matrix(a)
    b_arr = np.asarray(b)
    vector_rhs = b_arr.ndim == 1
    b_arr = b_arr[:, None] if vector_rhs else as_matrix(b_arr)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"lu_solve needs a square matrix, got {a.shape}")
    if b_arr.shape[0] != a.shape[0]:
        raise ValueError("right-hand side has the wrong number of rows")
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale == 0.0:
        raise Singular("matrix is zero")
    with warnings.catch_warnings():
        # exact zero pivots are reported below as Singular
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if np.min(pivots) <= policy.solve_eps * scale:
        raise Singular(
            f"pivot {np.min(pivots):.3e} below threshold {policy.solve_eps * scale:.3e}"
        )
    x = scipy.linalg.lu_solve((lu, piv), b_arr, check_finite=False)
    return x[:, 0] if vector_rhs else x


def rank(a, policy: TolerancePolicy = DEFAULT_POLICY) -> int:
    """Numerical rank from a column-pivoted QR factorization."""
    a = as_matrix(a)
    if a.size == 0:
        return 0
    scale = np.max(np.abs(a))
    if scale == 0.0:
        return 0
    r = scipy.linalg.qr(a / scale, mode="r", pivoting=True, check_finite=False)[0]
    diag = np.abs(np.diag(r))
    return int(np.count_nonzero(diag > policy.solve_eps * max(diag[0], 1.0)))


def _row_basis(a: np.ndarray, policy: TolerancePolicy) -> np.ndarray:
    # orthonormal rows spanning the row space of a
    _, s, vh = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return vh[:0]
    keep = s > policy.solve_eps * s[0] * max(a.shape)
    return vh[keep]


def _one_sided_residual(a: np.ndarray, b: np.ndarray, policy: TolerancePolicy) -> float:
    basis = _row_basis(a, policy)
    worst = 0.0
    for row in b:
        norm = np.linalg.norm(row)
        if norm == 0.0:
            continue
        unit = row / norm
        proj = (unit @ basis.conj().T) @ basis
        worst = max(worst, float(np.linalg.norm(unit - proj)))
    return worst


def span_residual(a, b, policy: TolerancePolicy = DEFAULT_POLICY) -> float:
    """Distance between the (complex) row spans of ``a`` and ``b``.

    Each row of one matrix is normalized and projected onto the row space of
    the other; the largest leftover norm over both directions is returned.
    Zero iff the spans agree.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[1]:
        raise ValueError("span_residual needs equal column counts")
    return max(_one_sided_residual(a, b, policy), _one_sided_residual(b, a, policy))
