"""Brute-force cross-checks, independent of the transfer-matrix machinery.

Nothing here touches eigenvectors or convex duality: orbits are enumerated
as cyclic words, pressure is approximated by sums over periodic points, and
level-set entropies are estimated by counting words in Birkhoff-average
bins.  Agreement with the fast modules is asserted by the test suite, never
assumed here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import PeriodTooLargeError, TooLargeError
from .potentials import PeriodicOrbit, Potential, birkhoff_average, periodic_orbit
from .sft import Sft, admissible_words, enumerate_cyclic_words
from .spectra import SpectrumGraph, spectrum_graph

MAX_PERIOD = 16
MAX_WORDS = 2 ** 24


@dataclass(frozen=True)
class OrbitCatalog:
    """Every periodic orbit of the subshift up to a period bound.

    orbits_by_period[n] lists the orbits of least period n, each stored as
    its lexicographically least rotation, in sorted order.
    """

    sft: Sft
    max_period: int
    orbits_by_period: dict[int, tuple[PeriodicOrbit, ...]]

    def __iter__(self):
        for n in range(1, self.max_period + 1):
            yield from self.orbits_by_period[n]

    def count(self) -> int:
        return sum(len(v) for v in self.orbits_by_period.values())


def enumerate_orbits(sft: Sft, max_period: int) -> OrbitCatalog:
    """Complete orbit catalog by enumeration of cyclic admissible words.

    A word of length n contributes when it is primitive (not a power of a
    shorter word) and is its own least rotation, so each orbit appears
    exactly once.
    """
    if max_period > MAX_PERIOD:
        raise PeriodTooLargeError(f"max_period {max_period} exceeds guard {MAX_PERIOD}")
    if max_period < 1:
        raise ValueError("max_period must be at least 1")
    by_period: dict[int, tuple[PeriodicOrbit, ...]] = {}
    for n in range(1, max_period + 1):
        found = []
        for w in enumerate_cyclic_words(sft, n):
            if any(n % d == 0 and w == w[:d] * (n // d) for d in range(1, n)):
                continue
            if any(w[i:] + w[:i] < w for i in range(1, n)):
                continue
            found.append(periodic_orbit(sft, w))
        by_period[n] = tuple(found)
    return OrbitCatalog(sft, max_period, by_period)


def catalog_average_range(catalog: OrbitCatalog, phi: Potential
                          ) -> tuple[float, float, PeriodicOrbit, PeriodicOrbit]:
    """Extreme Birkhoff averages over the catalog, with attaining orbits.

    Ties go to the orbit encountered first in catalog order (shorter period,
    then lexicographic), which keeps the result deterministic.
    """
    best_low = best_high = None
    low = high = None
    for orbit in catalog:
        avg = birkhoff_average(phi, orbit)
        if low is None or avg < low:
            low, best_low = avg, orbit
        if high is None or avg > high:
            high, best_high = avg, orbit
    if best_low is None:
        raise ValueError("catalog is empty")
    return low, high, best_low, best_high


def periodic_pressure(sft: Sft, phi: Potential, t: float, n: int) -> float:
    """(1/n) log sum over period-n points of exp(t * n-step Birkhoff sum).

    Period-n points are exactly the cyclic admissible words of length n
    (least period any divisor of n).  Converges to the pressure of t*phi
    as n grows; finite-size error is O(1/n).
    """
    if n > MAX_PERIOD:
        raise PeriodTooLargeError(f"period {n} exceeds guard {MAX_PERIOD}")
    if n < 1:
        raise ValueError("period must be at least 1")
    k = phi.depth
    table = phi.table
    sums = []
    for w in enumerate_cyclic_words(sft, n):
        total = 0.0
        for i in range(n):
            window = tuple(w[(i + j) % n] for j in range(k))
            total += table[window]
        sums.append(t * total)
    if not sums:
        raise ValueError("no periodic points at this period")
    return float(logsumexp(np.array(sums)) / n)


def word_count_spectrum(sft: Sft, phi: Potential, n: int, bins: int) -> SpectrumGraph:
    """Histogram estimate of the entropy spectrum from finite word counts.

    Counts admissible n-words by the average of phi over their complete
    depth-k windows and reports (1/n) log count per nonempty bin.  Raw
    finite-size data: not concave, accurate only to O(1/n).
    """
    if sft.alphabet_size ** n > MAX_WORDS:
        raise TooLargeError(f"alphabet^{n} exceeds the {MAX_WORDS} enumeration guard")
    if bins < 1:
        raise ValueError("bins must be at least 1")
    k = phi.depth
    if n < k:
        raise ValueError("words must be at least as long as the potential depth")
    words = np.array(admissible_words(sft, n), dtype=np.int64)

    # Dense lookup: value of each depth-k window by its base-A digit code.
    size = sft.alphabet_size ** k
    lookup = np.zeros(size)
    powers = sft.alphabet_size ** np.arange(k - 1, -1, -1, dtype=np.int64)
    for w, value in phi.table.items():
        lookup[int(np.dot(w, powers))] = value

    totals = np.zeros(len(words))
    for i in range(n - k + 1):
        codes = words[:, i:i + k] @ powers
        totals += lookup[codes]
    averages = totals / (n - k + 1)

    counts, edges = np.histogram(averages, bins=bins)
    centers = 0.5 * (edges[:-1] + edges[1:])
    occupied = counts > 0
    return spectrum_graph(centers[occupied], np.log(counts[occupied]) / n,
                          check_concave=False)


__all__ = [
    "OrbitCatalog", "enumerate_orbits", "catalog_average_range",
    "periodic_pressure", "word_count_spectrum", "MAX_PERIOD", "MAX_WORDS",
]
