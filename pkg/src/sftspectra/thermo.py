"""Pressure, equilibrium states, and pressure curves via transfer matrices.

A depth-k potential is evaluated on a recoded graph whose vertices are the
admissible m-words, m = max(k-1, 1), and whose edges are the admissible
(m+1)-words.  The weighted transfer matrix W(t)[u, v] = exp(t phi(uv...))
has log spectral radius equal to the pressure of t*phi, and its Perron data
yield the equilibrium Markov measure by the usual stochasticization.

Overflow is guarded by factoring the maximal weight out of the matrix:
W(t) = e^s B with s = max(t * table), so only log(spectral radius of B) + s
is ever formed, and entries of B lie in (0, 1].  When t is extreme enough
that entries of B underflow to zero, the whole solve switches to a
log-domain power iteration, so cooling paths stay usable at very large |t|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ._perron import (log_perron_pair, log_perron_root, perron_pair,
                      perron_root, perron_roots)
from .errors import NotPrimitiveError, SftMismatchError
from .potentials import PeriodicOrbit, Potential
from .sft import Sft, admissible_words, build_sft, same_sft


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    """Stationary Markov chain on a block recoding of the base subshift.

    words[i] is the m-word labelling recoded symbol i.  stochastic is row
    stochastic with support inside the recoded transition structure, and
    stationary is its stationary distribution.
    """

    sft: Sft                     # recoded transition structure
    base_sft: Sft                # the subshift the words live on
    words: tuple[tuple[int, ...], ...]
    stochastic: np.ndarray
    stationary: np.ndarray

    def __post_init__(self):
        rows = self.stochastic.sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > 1e-12:
            raise ValueError("stochastic rows must sum to 1 within 1e-12")
        residual = self.stationary @ self.stochastic - self.stationary
        if np.max(np.abs(residual)) > 1e-10:
            raise ValueError("stationary vector fails invariance within 1e-10")

    @property
    def block_length(self) -> int:
        return len(self.words[0])


@dataclass(frozen=True, eq=False)
class PressureCurve:
    """Pressure of t*phi sampled on a sorted grid of t values."""

    t_grid: np.ndarray
    values: np.ndarray
    phi: Potential


class _TransferModel:
    """Recoded weighted-transfer-matrix presentation of (sft, phi)."""

    def __init__(self, sft: Sft, phi: Potential):
        if not same_sft(sft, phi.sft):
            raise SftMismatchError("potential was tabulated on a different subshift")
        self.sft = sft
        self.phi = phi
        k = phi.depth
        m = max(k - 1, 1)
        self.block = m
        self.words = admissible_words(sft, m)
        index = {w: i for i, w in enumerate(self.words)}
        n = len(self.words)

        cyl_words = admissible_words(sft, k)
        cyl_index = {w: i for i, w in enumerate(cyl_words)}
        self.cyl_words = cyl_words

        src, dst, edge_phi, edge_cyl = [], [], [], []
        t = sft.transitions
        for i, w in enumerate(self.words):
            for b in range(sft.alphabet_size):
                if not t[w[-1], b]:
                    continue
                glued = w + (b,)
                j = index.get(glued[1:])
                if j is None:
                    continue
                src.append(i)
                dst.append(j)
                edge_phi.append(phi.table[glued[:k]])
                edge_cyl.append(cyl_index[glued[:k]])
        self.src = np.array(src, dtype=np.intp)
        self.dst = np.array(dst, dtype=np.intp)
        self.edge_phi = np.array(edge_phi, dtype=float)
        self.edge_cyl = np.array(edge_cyl, dtype=np.intp)
        self.n_vertices = n

        support = np.zeros((n, n), dtype=np.int8)
        support[self.src, self.dst] = 1
        self.support = support
        self.recoded = build_sft(n, support)
        if not self.recoded.primitive:
            raise NotPrimitiveError("recoded transition structure is not primitive")

    def reweighted(self, cylinder_values) -> "_TransferModel":
        """Clone sharing the recoded graph, with new per-cylinder values.

        cylinder_values follows the canonical cyl_words order.  Lets an
        optimizer iterate over potential tables without re-deriving the
        structure each step.
        """
        values = np.asarray(cylinder_values, dtype=float)
        if values.shape != (len(self.cyl_words),):
            raise ValueError("need one value per admissible cylinder word")
        clone = object.__new__(_TransferModel)
        clone.__dict__ = dict(self.__dict__)
        clone.edge_phi = values[self.edge_cyl]
        clone.phi = Potential(self.sft, self.phi.depth,
                              {w: float(values[i]) for i, w in enumerate(self.cyl_words)})
        return clone

    def _solve(self, t: float, tol: float = 1e-14, need_vectors: bool = True):
        """Spectral data of the stabilized transfer matrix, all in logs.

        Returns (log edge weights, shift, log root, log right, log left);
        the vectors are None when need_vectors is off.  Tries the plain
        power iteration first; if the exponent range underflows it (extreme
        t against a wide potential), redoes the computation in log domain,
        which only costs speed.
        """
        exponents = t * self.edge_phi
        shift = float(exponents.max())
        entries = exponents - shift
        n = self.n_vertices
        if entries.min() > -700.0:
            try:
                matrix = np.zeros((n, n))
                matrix[self.src, self.dst] = np.exp(entries)
                if need_vectors:
                    root, right, left = perron_pair(matrix, tol=tol)
                    return entries, shift, float(np.log(root)), np.log(right), np.log(left)
                return entries, shift, float(np.log(perron_root(matrix, tol=tol))), None, None
            except NotPrimitiveError:
                # Support is primitive by construction, so this is underflow
                # inside the iteration, not a structural failure.
                pass
        log_matrix = np.full((n, n), -np.inf)
        log_matrix[self.src, self.dst] = entries
        if need_vectors:
            log_root, log_right, log_left = log_perron_pair(log_matrix, tol=tol)
            return entries, shift, log_root, log_right, log_left
        return entries, shift, log_perron_root(log_matrix, tol=tol), None, None

    def pressure(self, t: float, tol: float = 1e-13) -> float:
        _, shift, log_root, _, _ = self._solve(t, tol=tol, need_vectors=False)
        return float(log_root + shift)

    def pressures(self, ts, tol: float = 1e-13) -> np.ndarray:
        """Pressure at many parameters through one batched solve.

        Matches [pressure(t) for t in ts] to solver tolerance while
        amortizing per-call overhead, which dominates on small recoded
        graphs.  Parameters whose stabilized weights underflow the linear
        domain (or defeat the shared iteration) fall back to the scalar
        path one by one.
        """
        ts = np.asarray(ts, dtype=float)
        if ts.ndim != 1:
            raise ValueError("ts must be one-dimensional")
        out = np.empty(len(ts))
        if not len(ts):
            return out
        exponents = ts[:, None] * self.edge_phi[None, :]
        shifts = exponents.max(axis=1)
        entries = exponents - shifts[:, None]
        linear = entries.min(axis=1) > -700.0
        batch = np.flatnonzero(linear)
        if len(batch):
            n = self.n_vertices
            stack = np.zeros((len(batch), n, n))
            stack[:, self.src, self.dst] = np.exp(entries[batch])
            try:
                out[batch] = np.log(perron_roots(stack, tol=tol)) + shifts[batch]
            except NotPrimitiveError:
                linear[:] = False
        for i in np.flatnonzero(~linear):
            out[i] = self.pressure(float(ts[i]), tol=tol)
        return out

    def equilibrium(self, t: float) -> MarkovMeasure:
        entries, _, log_root, log_right, log_left = self._solve(t)
        log_stoch = np.full((self.n_vertices, self.n_vertices), -np.inf)
        log_stoch[self.src, self.dst] = (entries + log_right[self.dst]
                                         - log_root - log_right[self.src])
        stochastic = np.exp(log_stoch)
        stochastic /= stochastic.sum(axis=1, keepdims=True)
        log_stat = log_left + log_right
        stationary = np.exp(log_stat - log_stat.max())
        stationary /= stationary.sum()
        return MarkovMeasure(self.recoded, self.sft, tuple(self.words),
                             stochastic, stationary)

    def edge_masses(self, t: float) -> np.ndarray:
        """Equilibrium probability of each edge (i.e. of each (m+1)-word)."""
        entries, _, log_root, log_right, log_left = self._solve(t)
        log_masses = log_left[self.src] + entries + log_right[self.dst] - log_root
        return np.exp(log_masses - logsumexp(log_masses))

    def cylinder_gradient(self, t: float) -> np.ndarray:
        """Equilibrium masses of the depth-k cylinders, in canonical order."""
        masses = self.edge_masses(t)
        return np.bincount(self.edge_cyl, weights=masses, minlength=len(self.cyl_words))


def pressure(sft: Sft, phi: Potential, t: float) -> float:
    """Topological pressure of t*phi (in nats)."""
    return _TransferModel(sft, phi).pressure(float(t))


def pressures(sft: Sft, phi: Potential, ts) -> np.ndarray:
    """Pressure of t*phi for a whole array of t at once.

    Same values as pressure() in a loop, computed batched; parameters whose
    weights leave the linear float range fall back to the scalar log path.
    """
    return _TransferModel(sft, phi).pressures(ts)


def equilibrium_measure(sft: Sft, phi: Potential, t: float) -> MarkovMeasure:
    """The equilibrium (Gibbs) Markov measure of t*phi."""
    return _TransferModel(sft, phi).equilibrium(float(t))


def measure_entropy(measure: MarkovMeasure) -> float:
    """Entropy rate -sum_a pi(a) sum_b P(a,b) log P(a,b), with 0 log 0 = 0.

    Computed from the chain itself, independently of any pressure identity,
    so it can serve as a cross-check against P(t phi) - t * integral.
    """
    stoch = measure.stochastic
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(stoch > 0.0, stoch * np.log(np.where(stoch > 0.0, stoch, 1.0)), 0.0)
    return float(-(measure.stationary @ plogp.sum(axis=1)))


def measure_integral(measure: MarkovMeasure, phi: Potential) -> float:
    """Integral of a potential against a Markov measure.

    The potential's depth must fit inside one edge of the chain, i.e.
    depth <= block_length + 1.
    """
    if not same_sft(measure.base_sft, phi.sft):
        raise SftMismatchError("measure and potential live on different subshifts")
    k = phi.depth
    if k > measure.block_length + 1:
        raise SftMismatchError(
            f"potential depth {k} exceeds edge length {measure.block_length + 1} of the chain")
    total = 0.0
    words = measure.words
    stoch = measure.stochastic
    stat = measure.stationary
    rows, cols = np.nonzero(stoch > 0.0)
    for a, b in zip(rows, cols):
        edge_word = words[a] + (words[b][-1],)
        total += stat[a] * stoch[a, b] * phi.table[edge_word[:k]]
    return float(total)


def pressure_gradient(sft: Sft, phi: Potential, t: float) -> dict[tuple[int, ...], float]:
    """Per-cylinder derivative data of the pressure at t*phi.

    Entry w is the equilibrium measure of the cylinder [w]; equivalently the
    partial derivative of pressure with respect to the table entry of w,
    evaluated at the potential t*phi.  Entries are nonnegative and sum to 1.
    """
    model = _TransferModel(sft, phi)
    grad = model.cylinder_gradient(float(t))
    return {w: float(g) for w, g in zip(model.cyl_words, grad)}


def pressure_curve(sft: Sft, phi: Potential, t_grid) -> PressureCurve:
    """Pressure sampled on a sorted grid, validated convex and Lipschitz.

    The slopes of consecutive chords must be nondecreasing within 1e-9 and
    bounded by the sup norm of the potential within 1e-9.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2:
        raise ValueError("t_grid must be a 1-d grid with at least two points")
    if not (np.diff(t_grid) > 0).all():
        raise ValueError("t_grid must be strictly increasing")
    model = _TransferModel(sft, phi)
    values = np.array([model.pressure(t) for t in t_grid])
    slopes = np.diff(values) / np.diff(t_grid)
    if len(slopes) > 1 and np.min(np.diff(slopes)) < -1e-9:
        raise ValueError("pressure samples violate convexity beyond 1e-9")
    bound = phi.sup_norm() + 1e-9
    if np.max(np.abs(slopes)) > bound:
        raise ValueError("pressure samples violate the Lipschitz bound sup|phi|")
    return PressureCurve(t_grid, values, phi)


def orbit_measure(sft: Sft, orbit: PeriodicOrbit, block_length: int) -> MarkovMeasure:
    """The invariant measure supported on a periodic orbit, as a Markov chain.

    Needs the orbit's phases to carry distinct block_length-words, so that
    the chain is deterministic (entropy 0); raise otherwise.
    """
    phases = [orbit.point(i, block_length) for i in range(orbit.period)]
    if len(set(phases)) != orbit.period:
        raise ValueError(
            "orbit phases are not separated at this block length; increase it")
    words = admissible_words(sft, block_length)
    index = {w: i for i, w in enumerate(words)}
    n = len(words)
    support = np.zeros((n, n), dtype=np.int8)
    t = sft.transitions
    for i, w in enumerate(words):
        for b in range(sft.alphabet_size):
            if not t[w[-1], b]:
                continue
            successor = w[1:] + (b,) if block_length > 1 else (b,)
            if successor in index:
                support[i, index[successor]] = 1
    stochastic = np.zeros((n, n))
    stationary = np.zeros(n)
    for i in range(orbit.period):
        a = index[phases[i]]
        b = index[phases[(i + 1) % orbit.period]]
        stochastic[a, b] = 1.0
        stationary[a] = 1.0 / orbit.period
    # Unvisited states get an arbitrary deterministic row; they carry no mass.
    for a in range(n):
        if stochastic[a].sum() == 0.0:
            stochastic[a, np.argmax(support[a])] = 1.0
    return MarkovMeasure(build_sft(n, support), sft, tuple(words),
                         stochastic, stationary)


__all__ = [
    "MarkovMeasure", "PressureCurve", "pressure", "pressures",
    "equilibrium_measure", "measure_entropy", "measure_integral",
    "pressure_gradient", "pressure_curve", "orbit_measure",
]
