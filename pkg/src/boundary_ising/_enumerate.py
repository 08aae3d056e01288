"""Backend selection for the spin enumeration kernel.

The compiled Gray-code kernel is used when it was built; otherwise (or when
``BOUNDARY_ISING_PURE_PYTHON`` is set to a non-empty value other than ``0``)
a chunked numpy implementation takes over. Both return the same histogram
of configuration weights keyed by boundary spin pattern.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from . import _kernels
except ImportError:  # extension not built
    _kernels = None

_CHUNK = 1 << 16


def _force_python() -> bool:
    return os.environ.get("BOUNDARY_ISING_PURE_PYTHON", "") not in ("", "0")


BACKEND = "python" if (_kernels is None or _force_python()) else "cython"


def compiled_available() -> bool:
    return _kernels is not None


def _python_histogram(n_vertices, n_boundary, eu, ev, lx, shift):
    nb_bits = max(n_boundary - 1, 0)
    hist = np.zeros(1 << nb_bits)
    free = n_vertices - 1
    total = 1 << free
    mask = (1 << nb_bits) - 1
    # vertex 0 is pinned up, vertex v >= 1 is bit v-1 of the state index
    bit_u = np.where(eu > 0, eu - 1, -1)
    bit_v = np.where(ev > 0, ev - 1, -1)
    for start in range(0, total, _CHUNK):
        states = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        logw = np.full(states.shape, -shift)
        for a, b, w in zip(bit_u, bit_v, lx):
            sa = (states >> a) & 1 if a >= 0 else 0
            sb = (states >> b) & 1 if b >= 0 else 0
            logw += np.where(sa == sb, w, 0.0)
        hist += np.bincount(states & mask, weights=np.exp(logw), minlength=hist.size)
    return hist


def _csr(n_vertices, eu, ev, lx):
    ends = np.concatenate([eu, ev])
    other = np.concatenate([ev, eu])
    w = np.concatenate([lx, lx])
    order = np.argsort(ends, kind="stable")
    indptr = np.zeros(n_vertices + 1, dtype=np.int64)
    np.add.at(indptr, ends + 1, 1)
    return np.cumsum(indptr), other[order], w[order]


def boundary_histogram(n_vertices: int, n_boundary: int, edges: np.ndarray,
                       log_weights: np.ndarray, backend: str | None = None) -> tuple[np.ndarray, float]:
    """Return ``(hist, shift)``; the true weight of a pattern is ``hist * exp(shift)``.

    ``edges`` is an (E, 2) integer array of vertex ids, vertex 0 is pinned,
    and boundary vertices are ``0 .. n_boundary - 1``.
    """
    backend = backend or BACKEND
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    lx = np.ascontiguousarray(log_weights, dtype=float)
    eu = np.ascontiguousarray(edges[:, 0])
    ev = np.ascontiguousarray(edges[:, 1])
    shift = float(lx.sum())
    if backend == "cython":
        if _kernels is None:
            raise RuntimeError("compiled kernel is not available")
        indptr, nbr, nbr_lx = _csr(n_vertices, eu, ev, lx)
        hist = _kernels.boundary_histogram(
            n_vertices, n_boundary,
            np.ascontiguousarray(indptr), np.ascontiguousarray(nbr), np.ascontiguousarray(nbr_lx),
            eu, ev, lx, shift,
        )
    elif backend == "python":
        hist = _python_histogram(n_vertices, n_boundary, eu, ev, lx, shift)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return hist, shift
