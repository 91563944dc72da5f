"""Inverse problems: potentials with a prescribed pressure function or
entropy spectrum, and families of pairwise non-cohomologous realizations.

The pressure realizer minimizes the sup mismatch max_t |P(t phi) - F(t)|
over depth-k tables, smoothing the max by log-sum-exp (sharpness 1e3) so
that exact per-cylinder gradients (t times the equilibrium cylinder mass)
drive a Barzilai-Borwein descent with Armijo backtracking.  Spectrum
targets go through the duality dictionary first: F := conjugate of -h,
realize the pressure, then score the result by the spectrum distance.
Non-cohomology of two realizations is certified by a pair of periodic
orbits on which the difference potential averages differently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .convex import CmsFunction, GridFunction, _check_convex, supporting_intercepts
from .errors import (ConvergenceError, HypothesisViolationError,
                     MaxEntropyMismatchError, SftMismatchError)
from .oracle import catalog_average_range, enumerate_orbits
from .potentials import PeriodicOrbit, Potential, constant_potential
from .sft import Sft, topological_entropy, same_sft
from .spectra import entropy_spectrum, rotation_set, spectrum_distance, spectrum_graph
from .thermo import _TransferModel

LSE_SHARPNESS = 1e3
MAX_DESCENT_STEPS = 2000
WITNESS_SEPARATION = 1e-6


@dataclass(frozen=True, eq=False)
class RealizationResult:
    """A realizing potential with its certificate numbers.

    target_error is the sup-norm mismatch on the comparison grid (pressure
    values for realize_pressure, spectrum distance for realize_spectrum);
    converged means it came in at or below the run's tolerance.  extras
    carries run diagnostics (per-seed errors, rotation intervals, ...).
    """

    potential: Potential
    target_error: float
    iterations: int
    converged: bool
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (self.target_error >= 0.0):
            raise ValueError("target_error must be nonnegative")


@dataclass(frozen=True, eq=False)
class CohomologyWitness:
    """Two periodic orbits separating the averages of a difference potential."""

    orbit1: PeriodicOrbit
    orbit2: PeriodicOrbit
    avg1: float
    avg2: float

    def __post_init__(self):
        if abs(self.avg1 - self.avg2) <= WITNESS_SEPARATION:
            raise ValueError("witness orbits must separate averages by more "
                             f"than {WITNESS_SEPARATION:g}")

    @property
    def separation(self) -> float:
        return abs(self.avg1 - self.avg2)


@dataclass(frozen=True, eq=False)
class ManyRealizations:
    """realize_many output: results plus the pairwise witness matrix.

    witnesses maps (i, j) with i < j to a CohomologyWitness or None;
    unresolved lists the pairs where no witness was found (the honest
    outcome when two realizations are cohomologous).
    """

    results: tuple[RealizationResult, ...]
    witnesses: dict
    unresolved: tuple[tuple[int, int], ...]


def center(phi: Potential) -> Potential:
    """Gauge fix: subtract the mean against the maximal-entropy measure.

    Spectra ignore coboundaries but not constants, so comparisons of
    recovered tables should happen in this gauge.
    """
    model = _TransferModel(phi.sft, phi)
    mean = float(model.edge_masses(0.0) @ model.edge_phi)
    return phi.shifted(-mean)


def _interpolate(f: GridFunction, t: np.ndarray) -> np.ndarray:
    return np.interp(t, f.x, f.values)


def check_pressure_hypotheses(sft: Sft, target: GridFunction, tol: float) -> None:
    """Realizability screen for a pressure target; raises naming the failure.

    Checks, in order: grid straddles 0; entropy normalization F(0) = h_top
    within tol; supporting-line intercepts bounded below by -tol (the upper
    bound follows from convexity plus the value at 0); and differentiability
    at the origin.  The last is resolved at grid scale: the slope jump at
    the grid point nearest 0 must not dwarf the jumps at its neighbors,
    since for a smooth convex function all three shrink together while a
    genuine kink keeps a fixed jump at 0 only.
    """
    x, v = target.x, target.values
    if len(x) < 3:
        raise ValueError("pressure target needs at least 3 grid points")
    if not (x[0] < 0.0 < x[-1]):
        raise HypothesisViolationError(
            "origin_in_span", 0.0, "target grid must straddle t = 0")
    _check_convex(v, 1e-8)
    h_top = topological_entropy(sft)
    at_zero = float(np.interp(0.0, x, v))
    gap = abs(at_zero - h_top)
    if gap > tol:
        raise HypothesisViolationError(
            "entropy_at_zero", gap,
            f"F(0) = {at_zero:.12g} but the topological entropy is {h_top:.12g}")
    low, _ = supporting_intercepts(target)
    if low < -tol:
        raise HypothesisViolationError(
            "intercept_bounds", -low,
            f"supporting intercepts reach {low:.6g}; entropies cannot be negative")
    slopes = np.diff(v) / np.diff(x)
    jumps = np.diff(slopes)
    i0 = int(np.argmin(np.abs(x)))
    if 2 <= i0 <= len(x) - 3:
        jump0 = float(jumps[i0 - 1])
        neighbors = float(jumps[i0 - 2] + jumps[i0])
        allowed = max(tol, 3.0 * neighbors + tol)
        if jump0 > allowed:
            raise HypothesisViolationError(
                "differentiable_at_zero", jump0 - allowed,
                f"slope jump {jump0:.6g} at the origin against {neighbors:.3g} "
                "at its neighbors indicates a genuine kink")


def _chebyshev_nodes(lo: float, hi: float, n: int) -> np.ndarray:
    k = np.arange(n)
    nodes = np.cos(np.pi * (2.0 * k + 1.0) / (2.0 * n))
    return np.sort(0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes)


def default_t_eval(target: GridFunction, n: int = 41) -> np.ndarray:
    """41 Chebyshev-spaced parameters on [-20, 20] clipped to the target span."""
    lo = max(float(target.x[0]), -20.0)
    hi = min(float(target.x[-1]), 20.0)
    return _chebyshev_nodes(lo, hi, n)


def _seed_tables(n_cyl: int) -> list[np.ndarray]:
    seeds = [np.zeros(n_cyl)]
    seeds.append(np.random.default_rng(20260819).uniform(-0.5, 0.5, n_cyl))
    seeds.append(np.random.default_rng(8191).uniform(-1.0, 1.0, n_cyl))
    return seeds


def _objective(model: _TransferModel, theta: np.ndarray, t_eval: np.ndarray,
               targets: np.ndarray, need_grad: bool):
    """Smoothed sup residual, the true sup residual, and its exact gradient."""
    m = model.reweighted(theta)
    residuals = m.pressures(t_eval) - targets
    scaled = LSE_SHARPNESS * np.abs(residuals)
    peak = scaled.max()
    weights = np.exp(scaled - peak)
    total = weights.sum()
    smooth = (peak + math.log(total)) / LSE_SHARPNESS
    true_err = float(np.abs(residuals).max())
    if not need_grad:
        return smooth, true_err, None
    weights /= total
    grad = np.zeros(len(theta))
    for i, t in enumerate(t_eval):
        if weights[i] < 1e-16 or residuals[i] == 0.0:
            continue
        sign = 1.0 if residuals[i] > 0.0 else -1.0
        grad += weights[i] * sign * t * m.cylinder_gradient(t)
    return smooth, true_err, grad


def _descend(model: _TransferModel, theta0: np.ndarray, t_eval: np.ndarray,
             targets: np.ndarray, tol: float):
    """BB-stepped gradient descent with Armijo backtracking on the smoothed
    objective; tracks the best iterate by true sup error."""
    theta = theta0.astype(float).copy()
    smooth, err, grad = _objective(model, theta, t_eval, targets, True)
    best_err, best_theta, best_it = err, theta.copy(), 0
    prev_theta = prev_grad = None
    accepted = 0
    stalled = 0
    while accepted < MAX_DESCENT_STEPS:
        if best_err <= tol or stalled >= 40:
            break
        gnorm2 = float(grad @ grad)
        if gnorm2 < 1e-30:
            break
        step = 1.0 / max(1.0, math.sqrt(gnorm2))
        if prev_theta is not None:
            d_theta = theta - prev_theta
            d_grad = grad - prev_grad
            denom = float(d_theta @ d_grad)
            if denom > 1e-30:
                step = float(d_theta @ d_theta) / denom
        step = min(max(step, 1e-12), 1e6)
        moved = False
        for _ in range(60):
            candidate = theta - step * grad
            c_smooth, c_err, _ = _objective(model, candidate, t_eval, targets, False)
            if c_smooth <= smooth - 1e-4 * step * gnorm2:
                moved = True
                break
            step *= 0.5
        if not moved:
            break
        prev_theta, prev_grad = theta, grad
        theta = candidate
        accepted += 1
        drop = smooth
        smooth, err, grad = _objective(model, theta, t_eval, targets, True)
        drop -= smooth
        if err < best_err:
            best_err, best_theta, best_it = err, theta.copy(), accepted
            stalled = 0
        elif drop < max(1e-13, 1e-9 * abs(smooth)):
            # Saddle or floating-point floor: the line search still finds
            # microscopic descent, but nothing usable is happening.
            stalled += 1
        else:
            stalled = 0
    return best_err, best_theta, accepted, best_it


def realize_pressure(sft: Sft, target: GridFunction, depth: int,
                     t_eval=None, tol: float = 1e-8,
                     init_tables=None) -> RealizationResult:
    """Depth-k potential whose pressure curve matches the target.

    Multi-start descent (three deterministic seeds, or the given
    init_tables) on the log-sum-exp smoothed sup mismatch over t_eval;
    the reported target_error is the unsmoothed sup.  A run that cannot
    reach tol returns its best table with converged False rather than
    raising.
    """
    check_pressure_hypotheses(sft, target, max(tol, 1e-8))
    if t_eval is None:
        t_grid = default_t_eval(target)
    else:
        t_grid = np.sort(np.asarray(t_eval, dtype=float))
        if len(t_grid) == 0 or not np.isfinite(t_grid).all():
            raise ValueError("t_eval must be nonempty and finite")
        if t_grid[0] < target.x[0] - 1e-12 or t_grid[-1] > target.x[-1] + 1e-12:
            raise ValueError("t_eval must lie inside the target grid span")
    targets = _interpolate(target, t_grid)
    model = _TransferModel(sft, constant_potential(sft, 0.0, depth))
    starts = (_seed_tables(len(model.cyl_words)) if init_tables is None
              else [np.asarray(a, dtype=float).copy() for a in init_tables])
    if not starts:
        raise ValueError("need at least one starting table")

    outcomes = []
    for theta0 in starts:
        if theta0.shape != (len(model.cyl_words),):
            raise ValueError("each starting table needs one value per cylinder")
        err, theta, accepted, best_it = _descend(model, theta0, t_grid, targets, tol)
        outcomes.append((err, tuple(theta), accepted, best_it))
    outcomes.sort(key=lambda o: (o[0], o[1]))
    err, theta, accepted, best_it = outcomes[0]
    table = {w: float(v) for w, v in zip(model.cyl_words, theta)}
    return RealizationResult(
        Potential(sft, depth, table), err, accepted, err <= tol,
        extras={"run_errors": tuple(o[0] for o in outcomes),
                "best_iteration": best_it,
                "t_eval": tuple(float(t) for t in t_grid)})


def _spectrum_target_graph(h: CmsFunction):
    return spectrum_graph(h.base.x, h.base.values, check_concave=False)


def _polyline_conjugate(alphas: np.ndarray, values: np.ndarray,
                        t_grid: np.ndarray, block: int = 256) -> np.ndarray:
    """Exact convex conjugate of the piecewise-linear interpolant of
    (alphas, values): max_i (t alpha_i + values_i), evaluated in chunks.

    Unlike the refined conjugate estimator this is free of estimation
    noise, so the result is grid-convex to machine precision; it conjugates
    the polyline itself, which is exactly what the spectrum distance
    compares against.
    """
    out = np.empty(len(t_grid))
    for start in range(0, len(t_grid), block):
        chunk = t_grid[start:start + block, None]
        out[start:start + block] = np.max(chunk * alphas[None, :] + values[None, :],
                                          axis=1)
    return out


def _score_against_spectrum(sft: Sft, h: CmsFunction, inner: RealizationResult,
                            tol: float, n_alpha: int = 2001) -> RealizationResult:
    realized = entropy_spectrum(sft, inner.potential, n_alpha)
    distance = spectrum_distance(realized, _spectrum_target_graph(h))
    interval = rotation_set(sft, inner.potential)
    extras = dict(inner.extras)
    extras.update({
        "pressure_error": inner.target_error,
        "rotation_interval": (interval.alpha_min, interval.alpha_max),
        "target_interval": (float(h.base.x[0]), float(h.base.x[-1])),
    })
    return RealizationResult(inner.potential, float(distance), inner.iterations,
                             distance <= tol, extras)


def realize_spectrum(sft: Sft, h: CmsFunction, depth: int, tol: float = 1e-4,
                     init_tables=None) -> RealizationResult:
    """Depth-k potential whose entropy spectrum approximates h.

    Goes through duality: the pressure target is the convex conjugate of
    -h (conjugating h's polyline exactly), realized by realize_pressure,
    and the returned target_error is the spectrum distance between the
    achieved and prescribed spectra (the inner pressure error is kept in
    extras).  A single-point h is realized exactly by the matching
    constant potential.  Since the polyline is the target, its sampling
    density bounds the achievable distance: even an exact realization
    differs from a coarse polyline by the chord sag of the sampling.
    """
    h_top = topological_entropy(sft)
    gap = abs(h.max_value - h_top)
    if gap > tol:
        raise MaxEntropyMismatchError(
            gap, f"spectrum peak {h.max_value:.12g} must equal the topological "
                 f"entropy {h_top:.12g}")
    if len(h.base.x) == 1:
        phi = constant_potential(sft, float(h.base.x[0]), depth)
        inner = RealizationResult(phi, 0.0, 0, True)
        return _score_against_spectrum(sft, h, inner, tol)
    # Dense enough that interpolating the target at the evaluation nodes
    # stays far below the spectrum tolerances in play.
    t_grid = np.linspace(-20.0, 20.0, 4001)
    conjugate = _polyline_conjugate(np.asarray(h.base.x), np.asarray(h.base.values),
                                    t_grid)
    pressure_target = GridFunction(t_grid, conjugate)
    inner = realize_pressure(sft, pressure_target, depth, tol=tol,
                             init_tables=init_tables)
    return _score_against_spectrum(sft, h, inner, tol)


def cohomology_witness(phi: Potential, psi: Potential,
                       max_period: int = 12) -> CohomologyWitness | None:
    """Periodic-orbit certificate that phi - psi is not constant-plus-coboundary.

    Scans all periodic orbits up to max_period for the extreme Birkhoff
    averages of the difference; a spread above 1e-6 yields the two
    attaining orbits, anything tighter yields None (consistent with a
    cohomologous difference, which averages identically everywhere).
    """
    if not same_sft(phi.sft, psi.sft):
        raise SftMismatchError("potentials live on different subshifts")
    catalog = enumerate_orbits(phi.sft, max_period)
    low, high, best_low, best_high = catalog_average_range(catalog, phi - psi)
    if high - low <= WITNESS_SEPARATION:
        return None
    return CohomologyWitness(best_low, best_high, low, high)


def _perturbation_site(model: _TransferModel, theta: np.ndarray,
                       t_eval: np.ndarray):
    """Index of a cylinder whose equilibrium mass stays below 1e-8 across
    all evaluation parameters, or None."""
    m = model.reweighted(theta)
    scores = np.full(len(theta), np.inf)
    for t in t_eval:
        scores = np.minimum(scores, m.cylinder_gradient(t))
    site = int(np.argmin(scores))
    return site if scores[site] < 1e-8 else None


def realize_many(sft: Sft, h: CmsFunction, depth: int, n_runs: int,
                 tol: float = 1e-4, seed: int = 100) -> ManyRealizations:
    """n_runs realizations of the same spectrum, pairwise non-cohomologous
    where certifiable.

    Every optimizer start is drawn from one Philox stream keyed by seed,
    so a run is reproducible from that single integer.  Pairs whose
    difference shows no periodic-average spread get one realization
    perturbed on a spectrum-inert cylinder (equilibrium mass below 1e-8 at
    every evaluation parameter), with the spectrum distance revalidated;
    if no such cylinder exists, or the pair is genuinely cohomologous, the
    pair is reported unresolved rather than forced.
    """
    if n_runs < 1:
        raise ValueError("need at least one run")
    n_cyl = len(_TransferModel(sft, constant_potential(sft, 0.0, depth)).cyl_words)
    rng = np.random.Generator(np.random.Philox(seed))
    results = []
    for _ in range(n_runs):
        # Every run gets its own asymmetric start; a zeros start can sit on
        # a symmetry-invariant saddle for symmetric targets.
        start = rng.uniform(-1.0, 1.0, n_cyl)
        results.append(realize_spectrum(sft, h, depth, tol, init_tables=[start]))
    bad = [j for j, r in enumerate(results) if not r.converged]
    if bad:
        raise ConvergenceError(f"runs {bad} did not reach the spectrum tolerance")

    def witness_matrix():
        return {(i, j): cohomology_witness(results[i].potential, results[j].potential)
                for i in range(n_runs) for j in range(i + 1, n_runs)}

    witnesses = witness_matrix()
    duplicates = sorted({j for (i, j), w in witnesses.items() if w is None})
    if duplicates:
        model = _TransferModel(sft, constant_potential(sft, 0.0, depth))
        target_graph = _spectrum_target_graph(h)
        for rank, j in enumerate(duplicates):
            theta = np.array([results[j].potential.table[w] for w in model.cyl_words])
            t_eval = np.asarray(results[j].extras.get(
                "t_eval", _chebyshev_nodes(-20.0, 20.0, 41)))
            site = _perturbation_site(model, theta, t_eval)
            if site is None:
                continue
            epsilon = max(tol / 4.0, 5e-6) * (rank + 1) / len(duplicates)
            for _ in range(4):
                bumped = theta.copy()
                bumped[site] += epsilon
                phi = Potential(sft, depth,
                                {w: float(v) for w, v in zip(model.cyl_words, bumped)})
                distance = float(spectrum_distance(
                    entropy_spectrum(sft, phi, 2001), target_graph))
                if distance <= tol:
                    extras = dict(results[j].extras)
                    extras.update({"perturbed_cylinder": model.cyl_words[site],
                                   "perturbation": epsilon})
                    results[j] = RealizationResult(
                        phi, distance, results[j].iterations, True, extras)
                    break
                epsilon *= 0.5
        witnesses = witness_matrix()

    unresolved = tuple(sorted(pair for pair, w in witnesses.items() if w is None))
    return ManyRealizations(tuple(results), witnesses, unresolved)


__all__ = [
    "RealizationResult", "CohomologyWitness", "ManyRealizations", "center",
    "check_pressure_hypotheses", "default_t_eval", "realize_pressure",
    "realize_spectrum", "realize_many", "cohomology_witness",
]
