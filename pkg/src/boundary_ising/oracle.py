"""Exact-enumeration ground truth for boundary correlations.

A matching is realized by straight chords between jittered points on the unit
circle. Faces of the chord arrangement are identified by their sign vectors
(which side of every chord they lie on); since each face is convex, the sign
vector determines it. Faces with an odd number of "inside" signs are black.
The black faces are the Ising vertices, and every crossing contributes one
edge between the two black quadrants meeting there. Boundary correlations are
then computed by summing over all spin configurations.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _enumerate
from .correlate import CorrelationMatrix
from .errors import (
    ColoringInconsistent,
    GenericityFailure,
    RegionError,
    SpreadTooLarge,
    TooLarge,
)
from .numerics import DEFAULT_POLICY, TolerancePolicy
from .region import Matching, Region, regular_polygon

MAX_VERTICES = 26
MAX_JITTER = 0.01
MAX_RETRIES = 100
_GENERIC_EPS = 1e-9


@dataclass(frozen=True)
class Crossing:
    chords: tuple[int, int]  # indices into Arrangement.chords, first < second
    point: np.ndarray


@dataclass(frozen=True)
class Arrangement:
    matching: Matching
    angles: np.ndarray  # endpoint angles, strictly increasing within one turn
    endpoints: np.ndarray  # (2n, 2), counterclockwise
    chords: tuple[tuple[int, int], ...]  # 1-based endpoint labels (a, b), a < b
    crossings: tuple[Crossing, ...]

    @property
    def n(self) -> int:
        return self.matching.n


@dataclass(frozen=True)
class IsingGraph:
    """Black faces as vertices, one weighted edge per crossing.

    Vertices ``0 .. n_boundary - 1`` are the distinct boundary faces;
    ``boundary[j - 1]`` is the vertex carrying the label ``b_j``.
    """

    n_vertices: int
    edges: np.ndarray  # (E, 2) int
    weights: np.ndarray  # x_e
    angles: np.ndarray  # theta_e
    boundary: tuple[int, ...]
    n_boundary: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n_boundary", len(set(self.boundary)))

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    def contraction_classes(self) -> list[list[int]]:
        classes: dict[int, list[int]] = {}
        for label, vertex in enumerate(self.boundary, start=1):
            classes.setdefault(vertex, []).append(label)
        return sorted(classes.values())


@dataclass(frozen=True)
class OracleResult:
    correlations: CorrelationMatrix
    spread: float
    samples: tuple[CorrelationMatrix, ...]

    @property
    def entries(self) -> np.ndarray:
        return self.correlations.entries


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------


def _orient(a, b, p) -> float:
    return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])


def _interleave(c1, c2) -> bool:
    (a1, b1), (a2, b2) = c1, c2
    return (a1 < a2 < b1 < b2) or (a2 < a1 < b2 < b1)


def _intersection(p1, p2, q1, q2) -> np.ndarray:
    d1, d2 = p2 - p1, q2 - q1
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    t = ((q1[0] - p1[0]) * d2[1] - (q1[1] - p1[1]) * d2[0]) / denom
    return p1 + t * d1


def _try_place(m: Matching, rng: np.random.Generator) -> Arrangement | None:
    size = m.size
    base = 2 * math.pi * np.arange(size) / size
    phi = base + rng.uniform(-MAX_JITTER, MAX_JITTER, size)
    if np.any(np.diff(phi) <= 0) or phi[-1] - phi[0] >= 2 * math.pi:
        return None
    pts = np.column_stack([np.cos(phi), np.sin(phi)])
    chords = tuple(m.pairs())
    seg = [(pts[a - 1], pts[b - 1]) for a, b in chords]

    crossings = []
    for i, i2 in itertools.combinations(range(len(chords)), 2):
        (p1, p2), (q1, q2) = seg[i], seg[i2]
        s1 = _orient(p1, p2, q1) * _orient(p1, p2, q2)
        s2 = _orient(q1, q2, p1) * _orient(q1, q2, p2)
        geometric = s1 < 0 and s2 < 0
        if abs(s1) < _GENERIC_EPS or abs(s2) < _GENERIC_EPS:
            return None
        if geometric != _interleave(chords[i], chords[i2]):
            return None
        if geometric:
            crossings.append(Crossing((i, i2), _intersection(p1, p2, q1, q2)))

    # no three chords through one point
    for c in crossings:
        for i, (p1, p2) in enumerate(seg):
            if i in c.chords:
                continue
            if abs(_orient(p1, p2, c.point)) / np.linalg.norm(p2 - p1) < _GENERIC_EPS:
                return None
    return Arrangement(m, phi, pts, chords, tuple(crossings))


def build_arrangement(m: Matching, seed: int = 0) -> Arrangement:
    """Straight-chord realization of ``m`` with endpoints jittered by at most 0.01 rad."""
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RETRIES):
        arr = _try_place(m, rng)
        if arr is not None:
            return arr
    raise GenericityFailure(f"no generic placement found after {MAX_RETRIES} attempts")


# ---------------------------------------------------------------------------
# Ising graph
# ---------------------------------------------------------------------------


def _signs_at(a: Arrangement, p, skip=()) -> list[int]:
    # 1 when p lies on the side of chord (x, y) that contains the arc from d_x to d_y
    out = []
    for i, (x, y) in enumerate(a.chords):
        if i in skip:
            out.append(0)
            continue
        o = _orient(a.endpoints[x - 1], a.endpoints[y - 1], p)
        if o == 0:
            raise GenericityFailure("point lies on a chord")
        out.append(1 if o < 0 else 0)
    return out


def _edge_angle(r: Region, black: set[tuple[int, int]], j: int, k: int) -> float:
    # chords (j, tau j) and (k, tau k) with j < k < tau j < tau k
    th = r.theta
    if black == {(1, 0), (0, 1)}:
        return th[k - 1] - th[j - 1]
    return th[r.tau(j) - 1] - th[k - 1]


def build_ising_graph(a: Arrangement, r: Region) -> IsingGraph:
    if a.matching != r.matching:
        raise RegionError("arrangement does not realize the region's matching")
    size = a.matching.size
    faces: dict[tuple[int, ...], int] = {}

    # boundary faces first, in label order
    boundary = []
    for arc in range(1, size + 1, 2):
        end = a.angles[arc] if arc < size else a.angles[0] + 2 * math.pi
        mid_angle = (a.angles[arc - 1] + end) / 2
        p = np.array([math.cos(mid_angle), math.sin(mid_angle)])
        signs = tuple(_signs_at(a, p))
        expected = tuple(1 if x <= arc < y else 0 for x, y in a.chords)
        if signs != expected or sum(signs) % 2 != 1:
            raise ColoringInconsistent(f"boundary arc {arc} does not border a black face")
        boundary.append(faces.setdefault(signs, len(faces)))
    n_boundary = len(faces)

    edges, weights, angles = [], [], []
    for c in a.crossings:
        i, i2 = c.chords
        base = _signs_at(a, c.point, skip=c.chords)
        black = []
        for s1, s2 in itertools.product((0, 1), repeat=2):
            sv = list(base)
            sv[i], sv[i2] = s1, s2
            if sum(sv) % 2 == 1:
                black.append(((s1, s2), tuple(sv)))
        if len(black) != 2 or black[0][0][0] == black[1][0][0]:
            raise ColoringInconsistent("crossing does not have two opposite black quadrants")
        (j, _), (k, _) = a.chords[i], a.chords[i2]
        theta_e = _edge_angle(r, {q for q, _ in black}, j, k)
        if not 0 < theta_e < math.pi / 2:
            raise ColoringInconsistent(f"edge angle {theta_e} outside (0, pi/2)")
        u, v = (faces.setdefault(sv, len(faces)) for _, sv in black)
        edges.append((u, v))
        angles.append(theta_e)
        weights.append(1 / math.tan(theta_e / 2))

    if len(faces) > n_boundary:
        interior = list(faces)[n_boundary:]
        parity = {sum(sv) % 2 for sv in interior}
        if parity != {1}:
            raise ColoringInconsistent("interior vertex is not a black face")

    return IsingGraph(
        n_vertices=len(faces),
        edges=np.array(edges, dtype=np.int64).reshape(-1, 2),
        weights=np.array(weights, dtype=float),
        angles=np.array(angles, dtype=float),
        boundary=tuple(boundary),
    )


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _histogram(g: IsingGraph, backend: str | None):
    if g.n_vertices > MAX_VERTICES:
        raise TooLarge(f"{g.n_vertices} vertices exceed the enumeration bound {MAX_VERTICES}")
    return _enumerate.boundary_histogram(
        g.n_vertices, g.n_boundary, g.edges, np.log(g.weights), backend
    )


def partition_function(g: IsingGraph, backend: str | None = None) -> float:
    """Sum of ``prod_{equal-spin edges} x_e`` over all ``2^|V|`` configurations."""
    hist, shift = _histogram(g, backend)
    return 2.0 * math.fsum(hist) * math.exp(shift)


def exact_correlations(g: IsingGraph, backend: str | None = None) -> CorrelationMatrix:
    hist, _ = _histogram(g, backend)
    nb = g.n_boundary
    patterns = np.arange(hist.size)
    # spin of boundary vertex u under each pattern; vertex 0 is pinned up
    spins = np.ones((nb, hist.size))
    for u in range(1, nb):
        spins[u] = 1 - 2 * ((patterns >> (u - 1)) & 1)
    z = math.fsum(hist)
    vertex_corr = np.eye(nb)
    for u, v in itertools.combinations(range(nb), 2):
        vertex_corr[u, v] = vertex_corr[v, u] = math.fsum(hist * spins[u] * spins[v]) / z
    idx = np.array(g.boundary)
    M = vertex_corr[np.ix_(idx, idx)]
    np.fill_diagonal(M, 1.0)
    return CorrelationMatrix(M)


@functools.cache
def _anchor_check() -> None:
    # the square must give a single edge of weight cot(pi/8)
    sq = regular_polygon(2)
    g = build_ising_graph(build_arrangement(sq.matching, 0), sq)
    expected = 1 / math.tan(math.pi / 8)
    if g.n_edges != 1 or abs(g.weights[0] - expected) > 1e-12:
        raise ColoringInconsistent("edge-weight rule fails the square anchor")


def oracle_correlations(r: Region, placements: int = 3, seed: int = 0,
                        policy: TolerancePolicy = DEFAULT_POLICY,
                        backend: str | None = None, check: bool = True) -> OracleResult:
    """Exact correlations averaged over independently jittered arrangements.

    With ``check`` set, raises ``SpreadTooLarge`` if the placements disagree
    by more than ``policy.agreement_eps``.
    """
    if placements < 1:
        raise ValueError("placements must be positive")
    _anchor_check()
    mats = []
    for i in range(placements):
        arr = build_arrangement(r.matching, seed=np.random.SeedSequence([seed, i]).generate_state(1)[0])
        mats.append(exact_correlations(build_ising_graph(arr, r), backend))
    stack = np.stack([m.entries for m in mats])
    spread = float(np.max(stack.max(axis=0) - stack.min(axis=0)))
    mean = stack.mean(axis=0)
    mean = (mean + mean.T) / 2
    np.fill_diagonal(mean, 1.0)
    if check and spread > policy.agreement_eps:
        raise SpreadTooLarge(f"placements disagree by {spread:.3e}")
    return OracleResult(CorrelationMatrix(mean), spread, tuple(mats))
