# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Gray-code enumeration of Ising spin configurations (compiled backend)."""

import numpy as np
from libc.math cimport exp
from libc.stdint cimport int64_t

cdef int64_t RESYNC = 4096


cdef double _log_weight(const signed char[::1] spin, const int64_t[::1] eu,
                        const int64_t[::1] ev, const double[::1] lx, double shift) noexcept nogil:
    cdef Py_ssize_t e
    cdef double s = -shift
    for e in range(eu.shape[0]):
        if spin[eu[e]] == spin[ev[e]]:
            s += lx[e]
    return s


def boundary_histogram(int64_t n_vertices, int64_t n_boundary,
                       const int64_t[::1] indptr, const int64_t[::1] nbr, const double[::1] nbr_lx,
                       const int64_t[::1] eu, const int64_t[::1] ev, const double[::1] lx,
                       double shift):
    """Weights summed by boundary spin pattern, vertex 0 pinned to +1.

    Bit ``i`` of a pattern is the spin of boundary vertex ``i + 1`` (1 = down).
    """
    cdef int64_t nb_bits = n_boundary - 1 if n_boundary > 0 else 0
    cdef int64_t total = (<int64_t> 1) << (n_vertices - 1)
    cdef int64_t mask = ((<int64_t> 1) << nb_bits) - 1
    cdef int64_t i, p, v, gray = 0
    cdef double logw
    cdef signed char sv
    hist_arr = np.zeros((<int64_t> 1) << nb_bits, dtype=np.float64)
    cdef double[::1] hist = hist_arr
    spin_arr = np.zeros(n_vertices, dtype=np.int8)
    cdef signed char[::1] spin = spin_arr

    logw = _log_weight(spin, eu, ev, lx, shift)
    with nogil:
        hist[0] += exp(logw)
        for i in range(1, total):
            # the bit flipped between gray(i-1) and gray(i) is the lowest set bit of i
            p = 0
            while not ((i >> p) & 1):
                p += 1
            v = p + 1
            sv = spin[v]
            for p in range(indptr[v], indptr[v + 1]):
                if spin[nbr[p]] == sv:
                    logw -= nbr_lx[p]
                else:
                    logw += nbr_lx[p]
            spin[v] = 1 - sv
            gray ^= (<int64_t> 1) << (v - 1)
            if i % RESYNC == 0:
                logw = _log_weight(spin, eu, ev, lx, shift)
            hist[gray & mask] += exp(logw)
    return hist_arr
