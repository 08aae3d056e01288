"""Matchings, angle sequences and valid regions.

All indices are 1-based: a matching on ``[2n] = {1, ..., 2n}`` is stored as the
tuple ``pairing`` with ``pairing[k - 1] == tau(k)``. Integers outside ``[2n]``
are handled through the affine extension (``affine_tau``, ``affine_theta``),
which is periodic up to a shift by ``2n`` (resp. ``pi``).
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import (
    AlternatingAmbiguous,
    ChainNotClosed,
    DuplicateIndex,
    FixedPoint,
    IndexOutOfRange,
    InvalidShape,
    LiftFailed,
    NotADescent,
    OddSize,
    RegionError,
    UnpairableDirections,
)

HALF_PI = math.pi / 2


# ---------------------------------------------------------------------------
# matchings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Matching:
    """Fixed-point-free involution of ``[2n]``."""

    pairing: tuple[int, ...]

    def __post_init__(self):
        pairing = tuple(int(x) for x in self.pairing)
        object.__setattr__(self, "pairing", pairing)
        size = len(pairing)
        if size == 0 or size % 2:
            raise OddSize(f"a matching needs an even, positive number of indices, got {size}")
        for k, t in enumerate(pairing, start=1):
            if not 1 <= t <= size:
                raise IndexOutOfRange(f"tau({k}) = {t} lies outside [1, {size}]")
            if t == k:
                raise FixedPoint(f"tau({k}) = {k}: fixed-point in matching")
            if pairing[t - 1] != k:
                raise DuplicateIndex(
                    f"tau is not an involution: tau({k}) = {t} but tau({t}) = {pairing[t - 1]}"
                )

    @property
    def n(self) -> int:
        return len(self.pairing) // 2

    @property
    def size(self) -> int:
        return len(self.pairing)

    def __call__(self, k: int) -> int:
        return self.pairing[k - 1]

    def pairs(self) -> list[tuple[int, int]]:
        """Chords ``(a, b)`` with ``a < b``, sorted by ``a``."""
        return [(k, t) for k, t in enumerate(self.pairing, start=1) if k < t]


def new_matching(pairs) -> Matching:
    """Build a matching from index pairs, e.g. ``[(1, 3), (2, 4)]``."""
    seen: dict[int, int] = {}
    for pair in pairs:
        a, b = (int(x) for x in pair)
        if a == b:
            raise FixedPoint(f"pair ({a}, {b}) is a fixed-point")
        for x in (a, b):
            if x in seen:
                raise DuplicateIndex(f"index {x} appears in more than one pair")
        seen[a] = b
        seen[b] = a
    size = len(seen)
    if size == 0 or size % 2:
        raise OddSize(f"pairs cover {size} indices; need an even positive count")
    if sorted(seen) != list(range(1, size + 1)):
        missing = sorted(set(range(1, size + 1)) - set(seen))
        raise IndexOutOfRange(f"pairs do not cover [1, {size}]; missing {missing}")
    return Matching(tuple(seen[k] for k in range(1, size + 1)))


def _check_index(m: Matching, k: int) -> None:
    if not 1 <= k <= m.size:
        raise IndexOutOfRange(f"index {k} outside [1, {m.size}]")


def crossing_number(m: Matching) -> int:
    pairs = m.pairs()
    count = 0
    for i, (a, b) in enumerate(pairs):
        for c, d in pairs[i + 1:]:
            if a < c < b < d:
                count += 1
    return count


def crossing_pairs(m: Matching) -> list[tuple[int, int]]:
    """Left endpoints ``(j, k)`` of all chord pairs with ``j < k < tau(j) < tau(k)``."""
    out = []
    pairs = m.pairs()
    for i, (a, b) in enumerate(pairs):
        for c, d in pairs[i + 1:]:
            if a < c < b < d:
                out.append((a, c))
    return out


def connected_components(m: Matching) -> list[tuple[int, int]]:
    """Split ``[2n]`` into consecutive blocks closed under ``tau``.

    Scanning from 1, each block is the shortest interval starting at the
    current index that ``tau`` maps to itself. Blocks are returned as inclusive
    ``(start, end)`` pairs; a single block ``(1, 2n)`` means no such split.
    Nested sub-blocks are not split further.
    """
    blocks = []
    start = 1
    while start <= m.size:
        end = start
        k = start
        while k <= end:
            end = max(end, m(k))
            k += 1
        blocks.append((start, end))
        start = end + 1
    return blocks


def is_connected(m: Matching) -> bool:
    """True unless some proper interval ``[j, k]`` is mapped onto itself."""
    size = m.size
    for j in range(1, size + 1):
        lo, hi = size + 1, 0
        for k in range(j, size + 1):
            lo, hi = min(lo, m(k)), max(hi, m(k))
            if lo < j:
                break
            if hi == k and (j, k) != (1, size):
                return False
    return True


def all_matchings(n: int) -> Iterator[Matching]:
    """Every matching of ``[2n]`` (there are ``(2n - 1)!!``)."""

    def rec(free: list[int]):
        if not free:
            yield []
            return
        first = free[0]
        for i in range(1, len(free)):
            rest = free[1:i] + free[i + 1:]
            for tail in rec(rest):
                yield [(first, free[i])] + tail

    for pairs in rec(list(range(1, 2 * n + 1))):
        yield new_matching(pairs)


def affine_tau(m: Matching, k: int) -> int:
    """The periodic extension with ``k < tau~(k) < k + 2n``."""
    size = m.size
    k0 = (k - 1) % size + 1
    t = m(k0)
    if t < k0:
        t += size
    return t + (k - k0)


def support(m: Matching, k: int) -> list[int]:
    """Cyclic interval from ``k`` to ``tau(k)``."""
    _check_index(m, k)
    size = m.size
    length = (m(k) - k) % size + 1
    return [(k - 1 + i) % size + 1 for i in range(length)]


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------


def _dist_to_lattice(x: float, period: float) -> float:
    r = math.fmod(x, period)
    if r < 0:
        r += period
    return min(r, period - r)


@dataclass(frozen=True)
class DirectionClass:
    representative: complex
    members: tuple[int, ...]
    signs: tuple[int, ...]


class Alternation(NamedTuple):
    alternating: bool
    witness: tuple[int, int, int, int] | None

    def __bool__(self) -> bool:
        return self.alternating


@dataclass(frozen=True)
class Region:
    """A matching together with a compatible angle sequence ``theta``.

    ``tolerance`` is the epsilon used for the ``+pi/2`` pairing rule and for
    deciding whether two boundary directions coincide.
    """

    matching: Matching
    theta: tuple[float, ...]
    tolerance: float = 1e-9
    _classes: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        theta = tuple(float(x) for x in self.theta)
        object.__setattr__(self, "theta", theta)
        m = self.matching
        if len(theta) != m.size:
            raise InvalidShape(f"expected {m.size} angles, got {len(theta)}")
        if not all(math.isfinite(x) for x in theta):
            raise InvalidShape("angles must be finite")
        if not self.tolerance > 0:
            raise InvalidShape("tolerance must be positive")
        for a, b in m.pairs():
            gap = theta[b - 1] - theta[a - 1] - HALF_PI
            if abs(gap) > self.tolerance:
                raise InvalidShape(
                    f"theta_{b} - theta_{a} must equal pi/2 (tau({a}) = {b}); off by {gap:.3e}"
                )
        for j, k in crossing_pairs(m):
            tj, tk, ttj = theta[j - 1], theta[k - 1], theta[m(j) - 1]
            if not (tj < tk < ttj):
                raise InvalidShape(
                    f"crossing chords ({j},{m(j)}) and ({k},{m(k)}) need "
                    f"theta_{j} < theta_{k} < theta_{m(j)}"
                )
        object.__setattr__(self, "_classes", _direction_classes(theta, self.tolerance))

    @property
    def n(self) -> int:
        return self.matching.n

    @property
    def size(self) -> int:
        return self.matching.size

    def tau(self, k: int) -> int:
        return self.matching(k)

    @property
    def v(self) -> np.ndarray:
        """Boundary vectors ``exp(2i theta_k)``, snapped to a shared value per direction."""
        out = np.empty(self.size, dtype=complex)
        for cls in self._classes:
            for k, s in zip(cls.members, cls.signs):
                out[k - 1] = s * cls.representative
        return out

    def direction_classes(self) -> list[DirectionClass]:
        return list(self._classes)

    def same_direction(self, j: int, k: int) -> bool:
        return _dist_to_lattice(self.theta[j - 1] - self.theta[k - 1], math.pi) <= self.tolerance


def _direction_classes(theta: Sequence[float], tol: float) -> tuple[DirectionClass, ...]:
    classes: list[tuple[float, list[int], list[int]]] = []
    for k, t in enumerate(theta, start=1):
        for ref, members, signs in classes:
            d = t - ref
            if _dist_to_lattice(d, HALF_PI) <= tol:
                members.append(k)
                signs.append(1 if _dist_to_lattice(d, math.pi) <= tol else -1)
                break
        else:
            classes.append((t, [k], [1]))
    return tuple(
        DirectionClass(cmath.exp(2j * ref), tuple(members), tuple(signs))
        for ref, members, signs in classes
    )


def direction_classes(r: Region) -> list[DirectionClass]:
    return r.direction_classes()


def affine_theta(r: Region, k: int) -> float:
    size = r.size
    k0 = (k - 1) % size + 1
    return r.theta[k0 - 1] + math.pi * ((k - k0) // size)


def j_set(r: Region | Matching, k: int) -> list[int]:
    """Indices ``j`` with ``(k, j, tau(j))`` counterclockwise, sorted."""
    m = r.matching if isinstance(r, Region) else r
    _check_index(m, k)
    out = []
    for j in range(1, m.size + 1):
        t = m(j)
        if k < j < t or j < t < k or t < k < j:
            out.append(j)
    return out


def j_set_affine(r: Region | Matching, k: int) -> list[int]:
    """``{tau~(j) : j < k < tau~(j)}``; a subset of ``(k, k + 2n)``."""
    m = r.matching if isinstance(r, Region) else r
    return sorted(
        affine_tau(m, j) for j in range(k - m.size + 1, k) if affine_tau(m, j) > k
    )


def is_alternating(r: Region) -> Alternation:
    """Look for ``a < b < c < d`` with ``v_a = -v_b = v_c = -v_d``."""
    best = None
    for cls in r.direction_classes():
        for first in (1, -1):
            want = first
            picked = []
            for k, s in zip(cls.members, cls.signs):
                if s == want:
                    picked.append(k)
                    want = -want
                    if len(picked) == 4:
                        break
            if len(picked) == 4:
                cand = tuple(picked)
                if best is None or cand < best:
                    best = cand
    return Alternation(best is not None, best)


def multiplicity(r: Region, k: int) -> int:
    """``#{j in J_k : v_j = v_k}``."""
    return sum(1 for j in j_set(r, k) if r.same_direction(j, k))


def descents(r: Region | Matching) -> list[int]:
    m = r.matching if isinstance(r, Region) else r
    out = []
    for k in range(1, m.size + 1):
        a, b = affine_tau(m, k), affine_tau(m, k + 1)
        if k + 1 < a < b:
            out.append(k)
    return out


def remove_crossing(r: Region, k: int) -> Region:
    """Uncross the chords at a descent ``k`` and swap ``theta_k``, ``theta_{k+1}``."""
    m = r.matching
    _check_index(m, k)
    if k not in descents(r):
        raise NotADescent(f"{k} is not a descent of tau = {list(m.pairing)}")
    size = m.size
    a, b = affine_tau(m, k), affine_tau(m, k + 1)
    new_aff = {j: affine_tau(m, j) for j in range(1, size + 1)}
    for pos, val in ((k, b), (k + 1, a), (a, k + 1 + size), (b, k + size)):
        p0 = (pos - 1) % size + 1
        new_aff[p0] = val - (pos - p0)
    pairing = tuple((new_aff[j] - 1) % size + 1 for j in range(1, size + 1))

    theta = list(r.theta)
    for pos, val in ((k, affine_theta(r, k + 1)), (k + 1, affine_theta(r, k))):
        p0 = (pos - 1) % size + 1
        theta[p0 - 1] = val - math.pi * ((pos - p0) // size)
    return Region(Matching(pairing), tuple(theta), r.tolerance)


def shift_region(r: Region) -> Region:
    """Relabel so that new index ``k`` is old index ``k - 1`` (affinely)."""
    size = r.size
    pairing = tuple(r.tau((k - 2) % size + 1) % size + 1 for k in range(1, size + 1))
    theta = (r.theta[-1] - math.pi,) + r.theta[:-1]
    return Region(Matching(pairing), theta, r.tolerance)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def regular_polygon(n: int) -> Region:
    if n < 1:
        raise RegionError(f"n must be positive, got {n}")
    size = 2 * n
    pairing = tuple((k - 1 + n) % size + 1 for k in range(1, size + 1))
    theta = tuple((k - 1) * math.pi / size for k in range(1, size + 1))
    return Region(Matching(pairing), theta)


# 3x2 rectangle minus the bottom-centre unit square; alternating (u, d, u, d at 2, 4, 6, 11)
STAPLE_TAU = (10, 12, 9, 6, 8, 4, 11, 5, 3, 1, 7, 2)
STAPLE_THETA = tuple(
    x * math.pi for x in (0, 0.25, 0, -0.25, 0, 0.25, 0.25, 0.5, 0.5, 0.5, 0.75, 0.75)
)


def staple_region() -> Region:
    return Region(Matching(STAPLE_TAU), STAPLE_THETA)


def boundary_vectors(r: Region) -> np.ndarray:
    v = r.v
    return np.column_stack([v.real, v.imag])


def random_region(m: Matching, rng: np.random.Generator, max_tries: int = 2000,
                  min_gap: float = 0.01) -> Region:
    """A random valid shape for ``m``.

    One angle per chord, drawn uniformly from ``[0, pi)`` and rejected until
    every crossing pair satisfies the interleaving constraints and no two
    chords are within ``min_gap`` of sharing a direction (which would make
    the region nearly alternating and the Fourier basis ill-conditioned).
    """
    pairs = m.pairs()
    cross = crossing_pairs(m)

    def spread_out(alpha):
        vals = list(alpha.values())
        return all(_dist_to_lattice(x - y, HALF_PI) >= min_gap
                   for i, x in enumerate(vals) for y in vals[i + 1:])

    for _ in range(max_tries):
        alpha = {a: rng.uniform(0.0, math.pi) for a, _ in pairs}
        if all(0.0 < alpha[k] - alpha[j] < HALF_PI for j, k in cross) and spread_out(alpha):
            break
    else:
        # increasing angles inside a window narrower than pi/2 always work
        step = 0.99 * HALF_PI / len(pairs)
        grid = step * (np.arange(len(pairs)) + 0.5) + rng.uniform(-step / 4, step / 4, len(pairs))
        alpha = dict(zip(sorted(a for a, _ in pairs), grid))
    theta = [0.0] * m.size
    for a, b in pairs:
        theta[a - 1] = float(alpha[a])
        theta[b - 1] = float(alpha[a]) + HALF_PI
    return Region(m, tuple(theta))


def _pair_class(members: list[int], signs: list[int]) -> list[tuple[int, int]]:
    runs = sum(1 for i in range(len(signs)) if signs[i] != signs[i - 1])
    if runs > 2:
        raise AlternatingAmbiguous(
            f"directions at indices {members} alternate in sign; the pairing is not "
            "determined by the geometry, pass tau explicitly"
        )
    if signs.count(1) != signs.count(-1):
        raise UnpairableDirections(
            f"indices {members} have unequal numbers of opposite directions"
        )
    stack: list[tuple[int, int]] = []
    out = []
    for k, s in zip(members, signs):
        if stack and stack[-1][1] != s:
            out.append((stack.pop()[0], k))
        else:
            stack.append((k, s))
    return out


def from_boundary_vectors(vs, tolerance: float = 1e-9) -> Region:
    """Recover ``(tau, theta)`` from the counterclockwise boundary edge vectors.

    The pairing inside each direction class is the unique non-crossing pairing
    of opposite vectors; this requires the region to be non-alternating.
    Angles are lifted chord by chord along the crossing graph, starting each
    component from ``arg(v)/2`` in ``[0, pi)``.
    """
    arr = np.asarray(vs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0 or arr.shape[0] % 2:
        raise OddSize(f"expected an even number of 2-vectors, got shape {arr.shape}")
    lengths = np.hypot(arr[:, 0], arr[:, 1])
    if np.max(np.abs(lengths - 1.0)) > 1e-9:
        bad = int(np.argmax(np.abs(lengths - 1.0))) + 1
        raise RegionError(f"vector {bad} is not a unit vector (length {lengths[bad - 1]!r})")
    closure = np.hypot(*arr.sum(axis=0))
    if closure > 1e-9 * len(arr):
        raise ChainNotClosed(f"boundary vectors sum to length {closure:.3e}, not zero")

    half = [math.atan2(y, x) / 2 for x, y in arr]
    classes = _direction_classes(half, tolerance)
    pairs = []
    for cls in classes:
        pairs.extend(_pair_class(list(cls.members), list(cls.signs)))
    m = new_matching(pairs)

    chords = m.pairs()
    left = {a for a, _ in chords}
    neighbours: dict[int, list[int]] = {a: [] for a in left}
    for j, k in crossing_pairs(m):
        neighbours[j].append(k)
        neighbours[k].append(j)

    alpha: dict[int, float] = {}
    for root in sorted(left):
        if root in alpha:
            continue
        alpha[root] = half[root - 1] % math.pi
        queue = deque([root])
        while queue:
            c = queue.popleft()
            for d in neighbours[c]:
                if d in alpha:
                    continue
                lo = alpha[c] if c < d else alpha[c] - HALF_PI
                base = half[d - 1]
                cand = base + math.pi * math.ceil((lo - base) / math.pi)
                if not cand < lo + HALF_PI:
                    raise LiftFailed(f"no consistent angle for chord starting at {d}")
                alpha[d] = cand
                queue.append(d)
    theta = [0.0] * m.size
    for a, b in chords:
        theta[a - 1] = alpha[a]
        theta[b - 1] = alpha[a] + HALF_PI
    try:
        return Region(m, tuple(theta), tolerance)
    except InvalidShape as exc:
        raise LiftFailed(f"lifted angles fail validation: {exc}") from exc
