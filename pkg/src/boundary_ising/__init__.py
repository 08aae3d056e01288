"""Boundary spin correlations of the critical Z-invariant Ising model on polygonal regions."""

from __future__ import annotations

from ._enumerate import BACKEND as ENUMERATION_BACKEND
from .correlate import (
    CorrelationMatrix,
    DoubledMatrix,
    correlations,
    correlations_recursive,
    cyclic_shift_matrix,
    double,
    doubled_from_span,
    extract_correlations,
    g_matrix,
    k_matrix,
    regular_correlation,
    scaling_limit,
)
from .curve import (
    SpanBasis,
    derivative_basis,
    fourier_basis,
    fourier_matrix,
    gamma,
    gamma_complex,
    sample_basis,
)
from .errors import BoundaryIsingError, NumericalError, RegionError
from .numerics import DEFAULT_POLICY, TolerancePolicy
from .oracle import (
    Arrangement,
    IsingGraph,
    build_arrangement,
    build_ising_graph,
    exact_correlations,
    oracle_correlations,
)
from .region import (
    Matching,
    Region,
    crossing_number,
    descents,
    from_boundary_vectors,
    is_alternating,
    is_connected,
    multiplicity,
    new_matching,
    random_region,
    regular_polygon,
    remove_crossing,
    staple_region,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
