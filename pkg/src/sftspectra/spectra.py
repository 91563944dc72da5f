"""Forward multifractal analysis of Birkhoff averages.

Rotation sets come from maximum-cycle-mean computations on the recoded
weighted graph (Karp's algorithm), endpoint entropies from the critical
subgraph (the union of all extreme-mean cycles), and interior spectrum
values from the duality E(a) = inf_t (P(t phi) - t a).  Spectra are
compared with the Hausdorff distance between their polyline graphs and
its one-sided excesses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ._perron import perron_root
from .errors import EmptyGraphError, SftSpectraError
from .potentials import (PeriodicOrbit, Potential, affine_combine,
                         birkhoff_average, periodic_orbit, tabulate)
from .sft import Sft, full_shift, same_sft, topological_entropy
from .thermo import _TransferModel


@dataclass(frozen=True, eq=False)
class SpectrumGraph:
    """Sampled graph of an entropy spectrum: pairs (alpha, h(alpha)).

    Alphas are strictly increasing but not necessarily uniformly spaced;
    histogram-based estimates drop empty bins.
    """

    alphas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if a.ndim != 1 or v.shape != a.shape or len(a) == 0:
            raise EmptyGraphError("graph needs at least one (alpha, h) pair")
        if len(a) > 1 and not (np.diff(a) > 0).all():
            raise ValueError("alphas must be strictly increasing")
        if not (np.isfinite(a).all() and np.isfinite(v).all()):
            raise ValueError("graph data must be finite")
        if v.min() < -1e-12:
            raise ValueError(f"entropy values dip to {v.min():g}")
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "values", np.maximum(v, 0.0))

    def __len__(self) -> int:
        return len(self.alphas)


def spectrum_graph(alphas, values, check_concave: bool = True,
                   concavity_tol: float = 1e-9) -> SpectrumGraph:
    """Validated SpectrumGraph; concavity is checked against chords unless
    the caller opts out (raw histogram estimates are not concave)."""
    g = SpectrumGraph(np.asarray(alphas, dtype=float), np.asarray(values, dtype=float))
    if check_concave and len(g) > 2:
        a, v = g.alphas, g.values
        chord = v[:-2] + (v[2:] - v[:-2]) * (a[1:-1] - a[:-2]) / (a[2:] - a[:-2])
        worst = float((chord - v[1:-1]).max())
        if worst > concavity_tol:
            raise ValueError(f"graph fails concavity by {worst:g}")
    return g


@dataclass(frozen=True)
class RotationInterval:
    """Closed interval of achievable Birkhoff averages, with orbit witnesses
    attaining each end exactly."""

    alpha_min: float
    alpha_max: float
    argmin_cycle: PeriodicOrbit
    argmax_cycle: PeriodicOrbit


def _karp_max_mean(n: int, src: np.ndarray, dst: np.ndarray,
                   weights: np.ndarray) -> float:
    """Maximum mean weight over directed cycles, by Karp's recurrence.

    D[k][v] is the best weight of a k-edge walk from vertex 0 to v; the
    answer is max_v min_k (D[n][v] - D[k][v]) / (n - k).
    """
    neg = -np.inf
    d = np.full((n + 1, n), neg)
    d[0, 0] = 0.0
    for k in range(1, n + 1):
        relax = d[k - 1, src] + weights
        np.maximum.at(d[k], dst, relax)
    best = neg
    lengths = n - np.arange(n)
    for v in range(n):
        if d[n, v] == neg:
            continue
        finite = d[:n, v] > neg
        if not finite.any():
            continue
        ratio = np.min((d[n, v] - d[:n, v][finite]) / lengths[finite])
        best = max(best, ratio)
    if best == neg:
        raise SftSpectraError("graph has no cycle reachable from vertex 0")
    return float(best)


def _critical_edge_mask(n: int, src: np.ndarray, dst: np.ndarray,
                        reduced: np.ndarray, tol: float) -> np.ndarray:
    """Edges lying on some cycle of reduced weight ~0.

    reduced = weights - mean, so no cycle has positive total weight and
    longest paths are well defined.  An edge (u, v) is critical when the
    best path back from v to u closes a zero-weight cycle with it.
    """
    neg = -np.inf
    closure = np.full((n, n), neg)
    np.fill_diagonal(closure, 0.0)
    closure[src, dst] = np.maximum(closure[src, dst], reduced)
    for k in range(n):
        closure = np.maximum(closure, closure[:, k:k + 1] + closure[k:k + 1, :])
    return reduced + closure[dst, src] >= -tol


def _orbit_from_critical(sft: Sft, model: _TransferModel,
                         mask: np.ndarray) -> PeriodicOrbit:
    """Deterministically extract one cycle from the critical subgraph and
    return it as a canonical periodic orbit of the base shift."""
    succ: dict[int, int] = {}
    for e in np.flatnonzero(mask):
        u, v = int(model.src[e]), int(model.dst[e])
        if u not in succ or v < succ[u]:
            succ[u] = v
    if not succ:
        raise SftSpectraError("critical subgraph is empty")
    current = min(succ)
    seen: dict[int, int] = {}
    trail: list[int] = []
    while current not in seen:
        seen[current] = len(trail)
        trail.append(current)
        current = succ[current]
    cycle = trail[seen[current]:]
    symbols = tuple(model.words[v][0] for v in cycle)
    period = len(symbols)
    for d in range(1, period + 1):
        if period % d == 0 and symbols == symbols[:d] * (period // d):
            return periodic_orbit(sft, symbols[:d])
    raise AssertionError("unreachable: every word has a primitive root")


def _tolerance(weights: np.ndarray) -> float:
    return 1e-9 * max(1.0, float(np.max(np.abs(weights))) if len(weights) else 1.0)


def rotation_set(sft: Sft, phi: Potential) -> RotationInterval:
    """Interval of Birkhoff averages of phi, with exact orbit witnesses.

    The ends are maximum/minimum cycle means of the recoded edge-weighted
    graph; the returned alpha values are Birkhoff averages of the witness
    orbits, so catalog comparisons can demand exact equality.
    """
    model = _TransferModel(sft, phi)
    n = model.n_vertices
    tol = _tolerance(model.edge_phi)

    ends = {}
    for side, sign in (("max", 1.0), ("min", -1.0)):
        weights = sign * model.edge_phi
        mean = _karp_max_mean(n, model.src, model.dst, weights)
        mask = _critical_edge_mask(n, model.src, model.dst, weights - mean, tol)
        orbit = _orbit_from_critical(sft, model, mask)
        alpha = birkhoff_average(phi, orbit)
        if abs(alpha - sign * mean) > 10.0 * tol:
            raise SftSpectraError(
                f"cycle-mean witness drifted from Karp value by {abs(alpha - sign * mean):g}")
        ends[side] = (alpha, orbit)

    alpha_min, argmin = ends["min"]
    alpha_max, argmax = ends["max"]
    return RotationInterval(alpha_min, alpha_max, argmin, argmax)


def critical_subgraph_entropy(sft: Sft, phi: Potential, side: str = "max") -> float:
    """Topological entropy of the subgraph spanned by extreme-mean cycles.

    This is the spectrum's value at the corresponding rotation-set endpoint;
    a lone cycle gives 0.  Entropy of a strongly connected component is
    log(perron(B + I) - 1): the identity shift makes the component
    aperiodic without moving its Perron eigenvector.
    """
    if side not in ("max", "min"):
        raise ValueError("side must be 'max' or 'min'")
    sign = 1.0 if side == "max" else -1.0
    model = _TransferModel(sft, phi)
    n = model.n_vertices
    weights = sign * model.edge_phi
    mean = _karp_max_mean(n, model.src, model.dst, weights)
    mask = _critical_edge_mask(n, model.src, model.dst, weights - mean,
                               _tolerance(model.edge_phi))

    adjacency = np.zeros((n, n), dtype=np.int8)
    adjacency[model.src[mask], model.dst[mask]] = 1
    n_comp, labels = connected_components(csr_matrix(adjacency), directed=True,
                                          connection="strong")
    best = 0.0
    for c in range(n_comp):
        inside = labels == c
        block = adjacency[np.ix_(inside, inside)]
        if block.sum() == 0:
            continue
        shifted = block.astype(float) + np.eye(block.shape[0])
        root = perron_root(shifted) - 1.0
        if root > 1.0:
            best = max(best, float(np.log(root)))
    return best


def _golden_min(evaluate, a: float, b: float, width: float) -> float:
    """Minimum value of a unimodal function on [a, b] by golden section."""
    inv = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = b - inv * (b - a)
    x2 = a + inv * (b - a)
    f1, f2 = evaluate(x1), evaluate(x2)
    while b - a > width:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv * (b - a)
            f1 = evaluate(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv * (b - a)
            f2 = evaluate(x2)
    return min(f1, f2)


def _golden_min_many(model: _TransferModel, alphas: np.ndarray,
                     a: np.ndarray, b: np.ndarray, width: float) -> np.ndarray:
    """Per-alpha minimum of P(t) - t alpha over [a_i, b_i], all brackets
    narrowed in lock step so every golden step is one batched solve."""
    inv = (np.sqrt(5.0) - 1.0) / 2.0
    a = a.astype(float).copy()
    b = b.astype(float).copy()
    x1 = b - inv * (b - a)
    x2 = a + inv * (b - a)
    f1 = model.pressures(x1) - x1 * alphas
    f2 = model.pressures(x2) - x2 * alphas
    while (b - a).max() > width:
        left = f1 <= f2
        b = np.where(left, x2, b)
        a = np.where(left, a, x1)
        x2, f2 = np.where(left, x1, x2), np.where(left, f1, f2)
        x1, f1 = np.where(left, x1, x2), np.where(left, f1, f2)
        probe = np.where(left, b - inv * (b - a), a + inv * (b - a))
        fp = model.pressures(probe) - probe * alphas
        x1 = np.where(left, probe, x1)
        f1 = np.where(left, fp, f1)
        x2 = np.where(left, x2, probe)
        f2 = np.where(left, f2, fp)
    return np.minimum(f1, f2)


def entropy_spectrum(sft: Sft, phi: Potential, n_alpha: int,
                     t_max: float = 60.0) -> SpectrumGraph:
    """Entropy spectrum of Birkhoff averages over the rotation interval.

    Interior values use E(a) = inf over t in [-t_max, t_max] of
    P(t phi) - t a, refined by golden section around the coarse-grid
    minimizer.  When the minimizer sticks to the t boundary the range is
    extended by doubling (up to 2^14 t_max); a point still unresolved at
    the cap is served by the dual value there, which is affine in alpha
    with the most extreme slope present and so cannot break concavity.
    The two interval ends always carry their exact critical-subgraph
    entropies.  A degenerate rotation interval (constant potential)
    collapses to the single point (alpha, h_top).
    """
    if n_alpha < 3:
        raise ValueError("n_alpha must be at least 3")
    if t_max <= 0.0:
        raise ValueError("t_max must be positive")
    h_top = topological_entropy(sft)
    rot = rotation_set(sft, phi)
    scale = max(1.0, abs(rot.alpha_min), abs(rot.alpha_max))
    if rot.alpha_max - rot.alpha_min <= 1e-12 * scale:
        mid = 0.5 * (rot.alpha_min + rot.alpha_max)
        return spectrum_graph(np.array([mid]), np.array([h_top]))

    model = _TransferModel(sft, phi)
    n_coarse = 121
    t_coarse = np.linspace(-t_max, t_max, n_coarse)
    pressures = model.pressures(t_coarse)

    e_min = critical_subgraph_entropy(sft, phi, side="min")
    e_max = critical_subgraph_entropy(sft, phi, side="max")

    alphas = np.linspace(rot.alpha_min, rot.alpha_max, n_alpha)
    values = np.empty(n_alpha)
    values[0] = e_min
    values[-1] = e_max
    width = 4e-5 * (2.0 * t_max / (n_coarse - 1))

    # Doubling ladder for minimizers beyond the coarse range; pressures are
    # cached per side because they do not depend on alpha.  The dual is
    # convex in t, so the first rise brackets the minimum.
    ladder = t_max * 2.0 ** np.arange(1, 15)
    coarse_step = 2.0 * t_max / (n_coarse - 1)
    side_pressures: dict[float, list[float]] = {1.0: [], -1.0: []}

    def _beyond_range(alpha: float, sign: float, edge_dual: float) -> float:
        cached = side_pressures[sign]
        prev_d = edge_dual
        for m, t_mag in enumerate(ladder):
            if m == len(cached):
                cached.append(model.pressure(sign * t_mag))
            d = cached[m] - sign * t_mag * alpha
            if d >= prev_d:
                lo_mag = ladder[m - 2] if m >= 2 else (
                    t_max if m == 1 else t_max - coarse_step)
                a, b = sorted((sign * lo_mag, sign * t_mag))
                refined = _golden_min(lambda t: model.pressure(t) - t * alpha,
                                      a, b, 1e-4 * (b - a))
                return min(prev_d, d, refined)
            prev_d = d
        return prev_d

    inner_alphas = alphas[1:-1]
    dual_grid = pressures[None, :] - np.outer(inner_alphas, t_coarse)
    j_min = np.argmin(dual_grid, axis=1)
    interior = (j_min > 0) & (j_min < n_coarse - 1)
    inner_values = np.empty(n_alpha - 2)
    if interior.any():
        j_in = j_min[interior]
        refined = _golden_min_many(model, inner_alphas[interior],
                                   t_coarse[j_in - 1], t_coarse[j_in + 1], width)
        inner_values[interior] = np.minimum(
            dual_grid[interior, j_in], refined)
    for i in np.flatnonzero(~interior):
        j = j_min[i]
        sign = -1.0 if j == 0 else 1.0
        inner_values[i] = _beyond_range(float(inner_alphas[i]), sign,
                                        float(dual_grid[i, j]))
    values[1:-1] = inner_values
    np.clip(values, 0.0, None, out=values)
    if values.max() > h_top + 1e-9:
        raise SftSpectraError("spectrum exceeds the topological entropy")
    return spectrum_graph(alphas, values)


def _point_to_polyline(px: float, py: float, xs: np.ndarray, ys: np.ndarray) -> float:
    if len(xs) == 1:
        return float(np.hypot(px - xs[0], py - ys[0]))
    ax, ay = xs[:-1], ys[:-1]
    bx, by = xs[1:], ys[1:]
    dx, dy = bx - ax, by - ay
    length2 = dx * dx + dy * dy
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(length2 > 0.0, ((px - ax) * dx + (py - ay) * dy) / length2, 0.0)
    s = np.clip(s, 0.0, 1.0)
    cx, cy = ax + s * dx, ay + s * dy
    return float(np.min(np.hypot(px - cx, py - cy)))


def one_sided_excess(a: SpectrumGraph, b: SpectrumGraph) -> float:
    """sup over sample points of a of the distance to the polyline b."""
    if len(a) == 0 or len(b) == 0:
        raise EmptyGraphError("excess needs nonempty graphs")
    return max(_point_to_polyline(x, y, b.alphas, b.values)
               for x, y in zip(a.alphas, a.values))


def spectrum_distance(a: SpectrumGraph, b: SpectrumGraph) -> float:
    """Hausdorff distance between polyline graphs: the larger one-sided
    excess of sample points against the other polyline."""
    return max(one_sided_excess(a, b), one_sided_excess(b, a))


@dataclass(frozen=True)
class UscRow:
    t: float
    excess_upper: float   # e(graph of the perturbed spectrum, base graph)
    excess_lower: float   # e(base graph, perturbed graph)


@dataclass(frozen=True)
class UscReport:
    """Semicontinuity failure experiment on the full 2-shift.

    delta is the distance from the origin to the base spectrum graph; each
    perturbed spectrum keeps (0, 0) on its graph, so its upper excess stays
    at least delta while the lower excess shrinks with t.
    """

    delta: float
    rows: tuple[UscRow, ...]
    upper_ok: bool
    lower_monotone: bool
    base_graph: SpectrumGraph
    graphs: tuple[SpectrumGraph, ...]


def usc_failure_demo(sft: Sft, t_list, n_alpha: int = 201,
                     t_max: float = 60.0) -> UscReport:
    """Quantify the jump of the spectrum map along a potential family.

    The base potential charges -1 to the two-cylinder 11; its spectrum
    graph ends at (0, log golden-ratio), far from the origin.  Mixing in a
    t-fraction of the one-cylinder penalty on 1 makes the right endpoint
    collapse to (0, 0) for every t > 0, producing an upper excess bounded
    away from 0 no matter how small t is.
    """
    if not same_sft(sft, full_shift(2)):
        raise ValueError("the demo instance lives on the full 2-shift")
    t_list = [float(t) for t in t_list]
    if any(t < 0.0 or t > 1.0 for t in t_list):
        raise ValueError("mixing parameters must lie in [0, 1]")
    phi = tabulate(sft, 2, lambda w: -1.0 if w == (1, 1) else 0.0)
    psi = tabulate(sft, 1, lambda w: -1.0 if w == (1,) else 0.0)

    base = entropy_spectrum(sft, phi, n_alpha, t_max)
    delta = _point_to_polyline(0.0, 0.0, base.alphas, base.values)

    rows = []
    graphs = []
    for t in t_list:
        if t == 0.0:
            graph = base
            upper = lower = 0.0
        else:
            graph = entropy_spectrum(sft, affine_combine(phi, psi, t), n_alpha, t_max)
            upper = one_sided_excess(graph, base)
            lower = one_sided_excess(base, graph)
        rows.append(UscRow(t, upper, lower))
        graphs.append(graph)

    positive = sorted((r for r in rows if r.t > 0.0), key=lambda r: r.t, reverse=True)
    upper_ok = all(r.excess_upper >= delta - 1e-6 for r in positive)
    lowers = [r.excess_lower for r in positive]
    lower_monotone = all(b <= a + 1e-9 for a, b in zip(lowers, lowers[1:]))
    return UscReport(delta, tuple(rows), upper_ok, lower_monotone,
                     base, tuple(graphs))


__all__ = [
    "SpectrumGraph", "RotationInterval", "UscRow", "UscReport",
    "spectrum_graph", "rotation_set", "critical_subgraph_entropy",
    "entropy_spectrum", "one_sided_excess", "spectrum_distance",
    "usc_failure_demo",
]
