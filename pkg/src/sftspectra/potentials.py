"""Locally constant potentials and periodic orbits.

A depth-k potential assigns a real value to every admissible k-word; as a
function on the shift space it is constant on depth-k cylinders.  Two
geometric constructions are provided: the negated distance to a periodic
orbit, and a normalized separation profile between two disjoint orbits.
Both truncate the shift metric d(x, y) = 2^-(first disagreement) at depth k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (OrbitNotAdmissibleError, OrbitsIntersectError,
                     SftMismatchError, WordNotAdmissibleError)
from .sft import Sft, Word, admissible_words, is_admissible, same_sft


@dataclass(frozen=True)
class PeriodicOrbit:
    """A periodic orbit, stored as the lexicographically least rotation.

    The word is cyclically admissible and primitive (not a power of a
    shorter word), so period == len(word) is the least period.
    """

    word: Word
    period: int

    def point(self, phase: int, length: int) -> tuple[int, ...]:
        """length symbols of the orbit point starting at the given phase."""
        w = self.word.symbols
        return tuple(w[(phase + i) % self.period] for i in range(length))


def periodic_orbit(sft: Sft, symbols) -> PeriodicOrbit:
    symbols = tuple(int(s) for s in symbols)
    if not symbols:
        raise OrbitNotAdmissibleError("empty cyclic word")
    if not is_admissible(sft, symbols) or not sft.transitions[symbols[-1], symbols[0]]:
        raise OrbitNotAdmissibleError(f"cyclic word {symbols} is not admissible")
    n = len(symbols)
    for d in range(1, n):
        if n % d == 0 and symbols == symbols[:d] * (n // d):
            raise OrbitNotAdmissibleError(
                f"cyclic word {symbols} is a power of {symbols[:d]}; pass the primitive word")
    least = min(symbols[i:] + symbols[:i] for i in range(n))
    return PeriodicOrbit(Word(least), n)


def orbits_intersect(a: PeriodicOrbit, b: PeriodicOrbit) -> bool:
    # Canonical rotations make orbit equality a plain comparison.
    return a.word.symbols == b.word.symbols


@dataclass(frozen=True, eq=False)
class Potential:
    """Depth-k locally constant potential with values in nats.

    table maps every admissible k-word (and nothing else) to a finite float.
    """

    sft: Sft
    depth: int
    table: dict[tuple[int, ...], float]

    def __post_init__(self):
        expected = admissible_words(self.sft, self.depth)
        if set(self.table) != set(expected):
            raise WordNotAdmissibleError(
                "table keys must be exactly the admissible words of the declared depth")
        values = np.fromiter(self.table.values(), dtype=float, count=len(self.table))
        if not np.isfinite(values).all():
            raise ValueError("potential values must be finite")

    def __call__(self, symbols: tuple[int, ...]) -> float:
        """Value on the cylinder of a word with length >= depth."""
        return self.table[tuple(symbols[:self.depth])]

    def sup_norm(self) -> float:
        return float(max(abs(v) for v in self.table.values()))

    # Pointwise algebra.  Operands are lifted to the larger depth first, so
    # mixing depths is allowed as long as the subshift matches.
    def __add__(self, other):
        if isinstance(other, Potential):
            return _combine(self, other, lambda a, b: a + b)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Potential):
            return _combine(self, other, lambda a, b: a - b)
        return NotImplemented

    def __neg__(self):
        return Potential(self.sft, self.depth, {w: -v for w, v in self.table.items()})

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float)):
            return Potential(self.sft, self.depth,
                             {w: float(scalar) * v for w, v in self.table.items()})
        return NotImplemented

    __rmul__ = __mul__

    def shifted(self, constant: float) -> "Potential":
        return Potential(self.sft, self.depth,
                         {w: v + float(constant) for w, v in self.table.items()})


def tabulate(sft: Sft, depth: int, fn) -> Potential:
    """Potential whose value on word w is fn(w)."""
    return Potential(sft, depth, {w: float(fn(w)) for w in admissible_words(sft, depth)})


def constant_potential(sft: Sft, value: float, depth: int = 1) -> Potential:
    return tabulate(sft, depth, lambda w: value)


def lift(p: Potential, depth: int) -> Potential:
    """Re-express a potential at a larger depth; values are unchanged."""
    if depth < p.depth:
        raise ValueError(f"cannot lower depth {p.depth} to {depth}")
    if depth == p.depth:
        return p
    return tabulate(p.sft, depth, lambda w: p.table[w[:p.depth]])


def _combine(p: Potential, q: Potential, op) -> Potential:
    if not same_sft(p.sft, q.sft):
        raise SftMismatchError("potentials live on different subshifts")
    depth = max(p.depth, q.depth)
    a, b = lift(p, depth), lift(q, depth)
    return Potential(p.sft, depth, {w: op(a.table[w], b.table[w]) for w in a.table})


def affine_combine(p: Potential, q: Potential, t: float) -> Potential:
    """(1-t) p + t q, lifted to the common depth."""
    t = float(t)
    return _combine(p, q, lambda a, b: (1.0 - t) * a + t * b)


def birkhoff_average(p: Potential, orbit: PeriodicOrbit) -> float:
    """Average of the potential over one period of the orbit."""
    total = 0.0
    for phase in range(orbit.period):
        total += p.table[orbit.point(phase, p.depth)]
    return total / orbit.period


def _prefix_length(w: tuple[int, ...], orbit: PeriodicOrbit, phase: int) -> int:
    """Length of the common prefix of w and the orbit point at phase."""
    point = orbit.point(phase, len(w))
    for i, (a, b) in enumerate(zip(w, point)):
        if a != b:
            return i
    return len(w)


def _capped_distance(w: tuple[int, ...], orbit: PeriodicOrbit) -> float:
    """min over orbit points of 2^-(common prefix length), with agreement
    through all of w counted as distance zero."""
    best = max(_prefix_length(w, orbit, phase) for phase in range(orbit.period))
    if best >= len(w):
        return 0.0
    return 2.0 ** (-best)


def _check_orbit_on(sft: Sft, orbit: PeriodicOrbit) -> None:
    # Cyclic admissibility: the linear word plus the wraparound transition.
    w = orbit.word.symbols
    if not is_admissible(sft, w) or not sft.transitions[w[-1], w[0]]:
        raise OrbitNotAdmissibleError("orbit does not live on this subshift")


def orbit_distance_potential(sft: Sft, orbit: PeriodicOrbit, depth: int) -> Potential:
    """phi(w) = -(distance from the cylinder of w to the orbit), depth-capped.

    The value on a k-word w is -2^-j where j <= k is the longest common
    prefix of w with any orbit point; prefixes of orbit points get -2^-k and
    words disagreeing immediately get -1.  Values therefore lie in
    [-1, -2^-k], and the orbit itself carries the maximum Birkhoff average.
    """
    _check_orbit_on(sft, orbit)

    def value(w):
        j = min(max(_prefix_length(w, orbit, phase) for phase in range(orbit.period)), depth)
        return -(2.0 ** (-j))

    return tabulate(sft, depth, value)


def normalized_separation_potential(sft: Sft, orbit_a: PeriodicOrbit,
                                    orbit_b: PeriodicOrbit, depth: int) -> Potential:
    """g(w) = (d(w,B) - d(w,A)) / (d(w,A) + d(w,B)) with the capped metric.

    Takes the value +1 exactly on prefixes of orbit A, -1 on prefixes of
    orbit B, and values strictly between elsewhere.  Words equidistant from
    the orbits (including prefixes of both, possible only when depth is
    shorter than the separation scale of the orbits) map to 0.  Swapping the
    orbits negates the table.
    """
    if orbits_intersect(orbit_a, orbit_b):
        raise OrbitsIntersectError("separation potential needs disjoint orbits")
    for orbit in (orbit_a, orbit_b):
        _check_orbit_on(sft, orbit)

    def value(w):
        da = _capped_distance(w, orbit_a)
        db = _capped_distance(w, orbit_b)
        if da == db:
            return 0.0
        return (db - da) / (da + db)

    return tabulate(sft, depth, value)


__all__ = [
    "PeriodicOrbit", "Potential", "periodic_orbit", "orbits_intersect", "tabulate",
    "constant_potential", "lift", "affine_combine", "birkhoff_average",
    "orbit_distance_potential", "normalized_separation_potential",
]
