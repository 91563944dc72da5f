"""Equilibrium-state paths with monotone entropy and their claim checks.

Two constructions: a one-parameter path that cools toward a single periodic
orbit (the equilibrium of s * orbit-distance potential, s >= 0), and a
two-sided path between two disjoint orbits driven by the centered
separation potential, reparametrized from t in [-1, 1] through
s = -tan(pi t / 2).  Every sample records integral, entropy, and pressure
and must satisfy the identity pressure = entropy + s * integral within
1e-9; the claim checker reports monotonicity and bound slacks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SftSpectraError
from .potentials import (PeriodicOrbit, Potential, birkhoff_average,
                         normalized_separation_potential,
                         orbit_distance_potential)
from .sft import Sft, topological_entropy
from .thermo import _TransferModel, measure_entropy

S_CLIP = 1e6


@dataclass(frozen=True)
class PathSample:
    """One equilibrium state along a path.

    t is the display parameter (the two-sided mixing parameter, or the
    compactified 1/(1+s) for one-sided paths); s is the inverse-temperature
    multiplier actually applied to the potential.
    """

    t: float
    s: float
    integral: float
    entropy: float
    pressure: float

    def __post_init__(self):
        gap = abs(self.pressure - self.entropy - self.s * self.integral)
        if gap > 1e-9:
            raise SftSpectraError(
                f"sample at s={self.s:g} breaks pressure = entropy + s*integral by {gap:g}")
        if self.entropy < -1e-12:
            raise SftSpectraError(f"negative entropy {self.entropy:g} at s={self.s:g}")


def _equilibrium_sample(model: _TransferModel, t: float, s: float) -> PathSample:
    masses = model.edge_masses(s)
    integral = float(masses @ model.edge_phi)
    entropy = measure_entropy(model.equilibrium(s))
    if entropy <= 0.0:
        entropy = 0.0
    return PathSample(t, s, integral, entropy, model.pressure(s))


def _orbit_sample(phi: Potential, orbit: PeriodicOrbit, t: float, s: float) -> PathSample:
    # Zero-temperature endpoint: the orbit measure has zero entropy and the
    # declared pressure closes the variational identity exactly.
    integral = birkhoff_average(phi, orbit)
    return PathSample(t, s, integral, 0.0, s * integral)


def single_sided_path(sft: Sft, orbit: PeriodicOrbit, depth: int,
                      s_grid) -> tuple[PathSample, ...]:
    """Cooling path toward one periodic orbit.

    The potential is the negated depth-capped distance to the orbit, whose
    unique maximizing measure sits on the orbit; raising s drains entropy
    while the integral climbs toward the orbit's average.  Samples are
    validated nonincreasing in entropy and nondecreasing in integral
    within 1e-9.
    """
    s_values = [float(s) for s in s_grid]
    if any(s < 0.0 for s in s_values):
        raise ValueError("s_grid must be nonnegative")
    if any(b <= a for a, b in zip(s_values, s_values[1:])):
        raise ValueError("s_grid must be strictly increasing")
    phi = orbit_distance_potential(sft, orbit, depth)
    model = _TransferModel(sft, phi)
    samples = tuple(_equilibrium_sample(model, 1.0 / (1.0 + s), s) for s in s_values)
    for a, b in zip(samples, samples[1:]):
        if b.entropy > a.entropy + 1e-9:
            raise SftSpectraError(f"entropy rises between s={a.s:g} and s={b.s:g}")
        if b.integral < a.integral - 1e-9:
            raise SftSpectraError(f"integral drops between s={a.s:g} and s={b.s:g}")
    return samples


def two_sided_path(sft: Sft, orbit_a: PeriodicOrbit, orbit_b: PeriodicOrbit,
                   depth: int, t_grid) -> tuple[PathSample, ...]:
    """Entropy-unimodal path from orbit A (t=-1) to orbit B (t=+1).

    The driving potential is the separation profile g (+1 near A, -1 near
    B) centered to zero mean against the maximal-entropy measure, so t=0
    is exactly the maximal-entropy equilibrium.  Interior parameters map
    through s = -tan(pi t / 2), capped at |s| = 1e6; |t| = 1 rows are taken
    directly from the orbit measures.  Interior parameters close to +-1
    push the solve into its (slower) log domain.
    """
    t_values = [float(t) for t in t_grid]
    if any(t < -1.0 or t > 1.0 for t in t_values):
        raise ValueError("t_grid must lie in [-1, 1]")
    if any(b <= a for a, b in zip(t_values, t_values[1:])):
        raise ValueError("t_grid must be strictly increasing")
    g = normalized_separation_potential(sft, orbit_a, orbit_b, depth)
    model_g = _TransferModel(sft, g)
    center = float(model_g.edge_masses(0.0) @ model_g.edge_phi)
    phi = g.shifted(-center)
    model = _TransferModel(sft, phi)

    samples = []
    for t in t_values:
        if t == -1.0:
            samples.append(_orbit_sample(phi, orbit_a, t, S_CLIP))
        elif t == 1.0:
            samples.append(_orbit_sample(phi, orbit_b, t, -S_CLIP))
        else:
            s = float(np.clip(-math.tan(math.pi * t / 2.0), -S_CLIP, S_CLIP))
            samples.append(_equilibrium_sample(model, t, s))
    samples = tuple(samples)

    peak = max(range(len(samples)), key=lambda i: samples[i].entropy)
    for i in range(len(samples) - 1):
        lo, hi = samples[i], samples[i + 1]
        if i < peak and hi.entropy < lo.entropy - 1e-9:
            raise SftSpectraError(f"entropy dips before the peak at t={hi.t:g}")
        if i >= peak and hi.entropy > lo.entropy + 1e-9:
            raise SftSpectraError(f"entropy rises after the peak at t={hi.t:g}")
    h_top = topological_entropy(sft)
    for sample in samples:
        if sample.t == 0.0 and abs(sample.entropy - h_top) > 1e-9:
            raise SftSpectraError("entropy at t=0 misses the topological entropy")
        if sample.t > 0.0 and sample.integral > 1e-9:
            raise SftSpectraError(f"positive integral {sample.integral:g} at t={sample.t:g}")
        if sample.t < 0.0 and sample.integral < -1e-9:
            raise SftSpectraError(f"negative integral {sample.integral:g} at t={sample.t:g}")
    return samples


@dataclass(frozen=True)
class ClaimCheck:
    claim_id: str
    passed: bool
    worst_slack: float
    witness_index: int | None
    detail: str


@dataclass(frozen=True)
class PathClaimReport:
    checks: tuple[ClaimCheck, ...]
    all_passed: bool

    def __iter__(self):
        return iter(self.checks)


def _monotone_check(values, direction: float, tol: float):
    """Worst signed slack of a monotonicity requirement; slack >= -tol passes."""
    worst = math.inf
    witness = None
    for i in range(len(values) - 1):
        slack = direction * (values[i + 1] - values[i])
        if slack < worst:
            worst, witness = slack, i + 1
    return worst, witness


def verify_path_claims(samples, h_top: float, alpha_max: float | None = None,
                       strict_single_sided: bool = False) -> PathClaimReport:
    """Slack report for the monotonicity and bound claims of a path.

    Samples are re-sorted by s.  alpha_max is the rotation-set maximum of
    the path potential; when omitted, the largest sampled integral stands
    in (which weakens the bound claim but never falsifies it).  The strict
    flag additionally demands strictly decreasing entropy between adjacent
    samples with a 1e-12 margin, for one-sided cooling paths.
    """
    ordered = sorted(samples, key=lambda p: p.s)
    integrals = [p.integral for p in ordered]
    entropies = [p.entropy for p in ordered]
    s_values = [p.s for p in ordered]
    checks = []
    tol = 1e-9

    if len(ordered) < 2:
        worst, witness = math.inf, None
    else:
        worst, witness = _monotone_check(integrals, +1.0, tol)
    checks.append(ClaimCheck("claim2_integral_monotone", worst >= -tol, worst, witness,
                             "integral nondecreasing in s"))

    worst, witness = math.inf, None
    for i in range(len(ordered) - 1):
        if s_values[i] < 0.0 < s_values[i + 1]:
            continue
        rising = s_values[i + 1] <= 0.0
        slack = (entropies[i + 1] - entropies[i]) * (1.0 if rising else -1.0)
        if slack < worst:
            worst, witness = slack, i + 1
    checks.append(ClaimCheck("claim3_entropy_unimodal", worst >= -tol, worst, witness,
                             "entropy nondecreasing for s<=0, nonincreasing for s>=0"))

    m = alpha_max if alpha_max is not None else (max(integrals) if integrals else 0.0)
    worst, witness = math.inf, None
    for i, p in enumerate(ordered):
        if p.s <= 0.0:
            continue
        gap = m - p.integral
        slack = min(gap, h_top / p.s - gap)
        if slack < worst:
            worst, witness = slack, i
    checks.append(ClaimCheck("claim4_pinning_bound", worst >= -tol, worst, witness,
                             f"0 <= M - integral <= h_top/s with M={m:.12g}"))

    worst, witness = math.inf, None
    detail = "entropy at the largest |s| is the side minimum"
    for side in (1.0, -1.0):
        side_idx = [i for i, p in enumerate(ordered) if side * p.s > 0.0]
        if not side_idx:
            continue
        extreme = max(side_idx, key=lambda i: abs(s_values[i]))
        slack = min(entropies[i] for i in side_idx) - entropies[extreme]
        if slack < worst:
            worst, witness = slack, extreme
            detail = (f"entropy at the largest |s| is the side minimum; "
                      f"limit proxy h={entropies[extreme]:.6g} at s={s_values[extreme]:g}")
    checks.append(ClaimCheck("claim5_entropy_vanishes", worst >= -tol, worst,
                             witness, detail))

    if strict_single_sided:
        # Strictness cannot be resolved once entropy reaches the numerical
        # zero floor, so pairs whose larger value is already <= 1e-12 are
        # exempt (claim 3 still pins them to [0, 1e-12]).
        worst, witness = math.inf, None
        for i in range(len(ordered) - 1):
            if entropies[i] <= 1e-12:
                continue
            slack = entropies[i] - entropies[i + 1] - 1e-12
            if slack < worst:
                worst, witness = slack, i + 1
        checks.append(ClaimCheck("lemma_strict_decrease", worst >= 0.0, worst, witness,
                                 "entropy strictly decreasing (margin 1e-12, "
                                 "above the resolution floor)"))

    return PathClaimReport(tuple(checks), all(c.passed for c in checks))


def equilibrium_modulus(sft: Sft, phi: Potential, s_values) -> tuple[float, np.ndarray]:
    """Weak-* continuity proxy along a parameter grid.

    Returns the largest ratio sup_w |mass_{i+1}(w) - mass_i(w)| / delta_s
    and the per-step ratios.  Reported, not asserted: a finite cylinder
    basis cannot verify the topological statement.
    """
    s_values = [float(s) for s in s_values]
    if any(b <= a for a, b in zip(s_values, s_values[1:])):
        raise ValueError("s_values must be strictly increasing")
    model = _TransferModel(sft, phi)
    masses = [model.cylinder_gradient(s) for s in s_values]
    ratios = np.array([
        float(np.max(np.abs(b - a))) / (s2 - s1)
        for a, b, s1, s2 in zip(masses, masses[1:], s_values, s_values[1:])
    ])
    return (float(ratios.max()) if len(ratios) else 0.0), ratios


__all__ = [
    "PathSample", "ClaimCheck", "PathClaimReport", "single_sided_path",
    "two_sided_path", "verify_path_claims", "equilibrium_modulus", "S_CLIP",
]
