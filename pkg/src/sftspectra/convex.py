"""Grid-based convex duality: Legendre transforms and entropy dictionaries.

All transforms work on uniformly sampled functions.  Suprema are taken over
grid points and then refined inside the winning cell: a parabola through the
three samples around the arg-extremum, capped by the chord-extension bound
that concavity of the objective implies.  The cap makes the refinement safe
on piecewise-linear data (where a fitted parabola would overshoot a kink)
while keeping second-order accuracy on smooth data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (MaxMismatchError, NegativeValuesError, NotConcaveError,
                     NotConvexError, NonUniqueMaximizerError,
                     SlopesNotStabilizedError)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real function sampled on a uniform strictly increasing grid.

    Transforms require at least 3 points; a single-point GridFunction is
    allowed as the degenerate output of a transform (conjugate of an affine
    function, spectrum of a constant potential).
    """

    x: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if x.ndim != 1 or v.shape != x.shape or len(x) == 0:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if len(x) > 1:
            steps = np.diff(x)
            if not (steps > 0).all():
                raise ValueError("grid must be strictly increasing")
            h = steps[0]
            if np.max(np.abs(steps - h)) > 1e-9 * max(h, 1.0):
                raise ValueError("grid must be uniform")
        if not (np.isfinite(x).all() and np.isfinite(v).all()):
            raise ValueError("grid data must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", v)

    @property
    def spacing(self) -> float:
        return float(self.x[1] - self.x[0]) if len(self.x) > 1 else 0.0


@dataclass(frozen=True, eq=False)
class CmsFunction:
    """A candidate multifractal spectrum: concave, nonnegative, unique max."""

    base: GridFunction
    maximizer_index: int
    max_value: float


def grid_function(x, values) -> GridFunction:
    return GridFunction(np.asarray(x, dtype=float), np.asarray(values, dtype=float))


def _require_transform_input(f: GridFunction):
    if len(f.x) < 3:
        raise ValueError("transforms need at least 3 grid points")


def _check_convex(values: np.ndarray, tol: float):
    second = values[:-2] - 2.0 * values[1:-1] + values[2:]
    worst = float(second.min()) if len(second) else 0.0
    if worst < -tol:
        raise NotConvexError(f"second differences dip to {worst:g} (tolerance {tol:g})")


def _cell_bound(g0, g_near, slope_in, slope_out):
    """Upper bound for the sup of a concave function over one grid cell.

    Cell coordinates u in [0, 1] run from the arg-max sample (value g0)
    toward the neighbor (value g_near).  Concavity gives two overestimating
    lines: A(u) = g0 + slope_in * u (the chord arriving at the arg-max from
    the opposite side, extended forward) and D(u) = g_near + slope_out *
    (u - 1) (the chord leaving the neighbor outward, extended backward).
    max_u min(A, D) is attained at u = 0, u = 1, or their crossing.
    """
    denom = slope_in - slope_out
    with np.errstate(divide="ignore", invalid="ignore"):
        u_cross = np.where(denom != 0.0, (g_near - slope_out - g0) / denom, np.nan)
    candidates = [
        np.minimum(g0, g_near - slope_out),              # u = 0
        np.minimum(g0 + slope_in, g_near),               # u = 1
    ]
    inside = np.isfinite(u_cross) & (u_cross >= 0.0) & (u_cross <= 1.0)
    crossing = np.where(inside, g0 + slope_in * np.where(inside, u_cross, 0.0), -np.inf)
    candidates.append(crossing)
    return np.maximum.reduce(candidates)


def _conjugate_block(x: np.ndarray, values: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    # Dense evaluation: rows are alphas, columns grid points.
    g = alphas[:, None] * x[None, :] - values[None, :]
    j = np.argmax(g, axis=1)
    n = len(x)
    rows = np.arange(len(alphas))
    best = g[rows, j]

    interior = (j >= 1) & (j <= n - 2)
    if not interior.any():
        return best
    ji = j[interior]
    ri = rows[interior]
    gm = g[ri, ji - 1]
    g0 = g[ri, ji]
    gp = g[ri, ji + 1]
    has_m2 = ji >= 2
    has_p2 = ji <= n - 3
    gm2 = g[ri, np.maximum(ji - 2, 0)]
    gp2 = g[ri, np.minimum(ji + 2, n - 1)]

    # Parabola through the three central points (u = -1, 0, 1).
    a = 0.5 * (gp + gm) - g0
    b = 0.5 * (gp - gm)
    concave_fit = a < 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        u_star = np.where(concave_fit, -b / (2.0 * a), np.inf)
        vertex = np.where(concave_fit, g0 - (b * b) / (4.0 * a), g0)
    estimate = np.where(np.abs(u_star) <= 1.0, vertex, g0)

    # Concavity cap over the two cells adjacent to the arg-max; the true
    # sup lies in their union, so it is at most the larger cell bound.
    # A missing outer sample leaves that cell without a departing chord, so
    # no refinement evidence exists there: the bound stays at the sample
    # value, which keeps kinks и ties exact instead of extending a chord
    # across the whole cell.
    right = np.where(has_p2, _cell_bound(g0, gp, g0 - gm, gp2 - gp), g0)
    left = np.where(has_m2, _cell_bound(g0, gm, g0 - gp, gm2 - gm), g0)
    cap = np.maximum(left, right)

    best[interior] = np.clip(estimate, g0, np.maximum(cap, g0))
    return best


def _conjugate_values(x: np.ndarray, values: np.ndarray, alphas: np.ndarray,
                      block: int = 512) -> np.ndarray:
    """sup_t (alpha t - F(t)) over the grid, with capped one-cell refinement."""
    out = np.empty(len(alphas))
    for start in range(0, len(alphas), block):
        stop = min(start + block, len(alphas))
        out[start:stop] = _conjugate_block(x, values, alphas[start:stop])
    return out


def legendre(f: GridFunction, convexity_tol: float = 1e-8,
             samples: int | None = None) -> GridFunction:
    """Legendre transform F*(a) = sup_t (a t - F(t)), sampled on the slope
    range of the input.

    An affine input collapses to a single-point GridFunction at its slope.
    """
    _require_transform_input(f)
    _check_convex(f.values, convexity_tol)
    slopes = np.diff(f.values) / np.diff(f.x)
    lo, hi = float(slopes[0]), float(slopes[-1])
    if hi - lo <= 1e-13 * max(1.0, abs(hi), abs(lo)):
        # Affine data: the conjugate is finite only at the common slope.
        slope = 0.5 * (lo + hi)
        intercept = float(f.values[0] - slope * f.x[0])
        return GridFunction(np.array([slope]), np.array([-intercept]))
    alphas = np.linspace(lo, hi, samples if samples is not None else len(f.x))
    return GridFunction(alphas, _conjugate_values(f.x, f.values, alphas))


def fenchel_roundtrip_error(f: GridFunction, interior_fraction: float = 0.9) -> float:
    """sup |F** - F| over the interior fraction of the grid."""
    _require_transform_input(f)
    # Oversampling the intermediate conjugate keeps the second sup from
    # losing accuracy where the conjugate's curvature blows up near the
    # ends of the slope range.
    star = legendre(f, samples=4 * len(f.x))
    if len(star.x) < 3:
        # Affine input: F** equals F everywhere.
        return 0.0
    double = legendre(star)
    margin = 0.5 * (1.0 - interior_fraction)
    lo = f.x[0] + margin * (f.x[-1] - f.x[0])
    hi = f.x[-1] - margin * (f.x[-1] - f.x[0])
    keep = (f.x >= lo - 1e-12) & (f.x <= hi + 1e-12) & \
           (f.x >= double.x[0]) & (f.x <= double.x[-1])
    back = np.interp(f.x[keep], double.x, double.values)
    return float(np.max(np.abs(back - f.values[keep])))


def supporting_intercepts(f: GridFunction) -> tuple[float, float]:
    """Range of intercepts F(t) - v t over the one-sided grid slopes v."""
    _require_transform_input(f)
    slopes = np.diff(f.values) / np.diff(f.x)
    # Each grid point supports with its left and right slope.
    left = f.values[1:] - slopes * f.x[1:]
    right = f.values[:-1] - slopes * f.x[:-1]
    intercepts = np.concatenate([left, right])
    return float(intercepts.min()), float(intercepts.max())


def validate_cms(h: GridFunction, declared_max: float, tol: float,
                 concavity_tol: float = 1e-9) -> CmsFunction:
    """Check the defining properties of a multifractal-spectrum candidate.

    Concave within concavity_tol, nonnegative, maximum strictly positive and
    within tol of declared_max, and a unique maximizer up to one grid cell
    of flatness (two adjacent samples may tie at the top).
    """
    v = h.values
    if len(v) > 2:
        second = v[:-2] - 2.0 * v[1:-1] + v[2:]
        worst = float(second.max())
        if worst > concavity_tol:
            raise NotConcaveError(f"second differences reach {worst:g}")
    if float(v.min()) < -1e-12:
        raise NegativeValuesError(f"spectrum dips to {float(v.min()):g}")
    i_max = int(np.argmax(v))
    top = float(v[i_max])
    if top <= 0.0:
        raise NegativeValuesError("spectrum maximum must be strictly positive")
    if abs(top - declared_max) > tol:
        raise MaxMismatchError(
            f"maximum {top:.12g} differs from declared {declared_max:.12g} beyond {tol:g}")
    ties = np.flatnonzero(v >= top - 1e-12)
    if len(ties) > 2 or (len(ties) == 2 and abs(int(ties[1]) - int(ties[0])) > 1):
        raise NonUniqueMaximizerError("flat top wider than one grid cell")
    cleaned = GridFunction(h.x, np.maximum(v, 0.0))
    return CmsFunction(cleaned, i_max, top)


def spectrum_from_pressure(f: GridFunction, slope_tol: float,
                           n_alpha: int | None = None) -> CmsFunction:
    """Entropy spectrum h(a) = inf_t (F(t) - t a) on the visible slope range.

    The domain [D-, D+] uses the boundary grid slopes; the outer tenth of
    the grid on each side must have settled (slope variation <= slope_tol),
    otherwise SlopesNotStabilized is raised.  Endpoint values inherit an
    error of order slope_tol, which is reported via the tolerance rather
    than resolved; sample a wider t range to shrink it.
    """
    _require_transform_input(f)
    _check_convex(f.values, 1e-8)
    slopes = np.diff(f.values) / np.diff(f.x)
    block = max(2, len(slopes) // 10)
    for side, chunk in (("left", slopes[:block]), ("right", slopes[-block:])):
        spread = float(chunk.max() - chunk.min())
        if spread > slope_tol:
            raise SlopesNotStabilizedError(
                f"{side} boundary slopes vary by {spread:g} (tolerance {slope_tol:g}); "
                "widen the t grid")
    d_minus, d_plus = float(slopes[0]), float(slopes[-1])
    if n_alpha is None:
        n_alpha = len(f.x)
    if d_plus - d_minus <= 1e-13 * max(1.0, abs(d_plus)):
        # Affine pressure data: single-point spectrum at the common slope.
        alpha = 0.5 * (d_minus + d_plus)
        value = float(np.min(f.values - alpha * f.x))
        base = GridFunction(np.array([alpha]), np.array([max(value, 0.0)]))
        return CmsFunction(base, 0, float(base.values[0]))
    alphas = np.linspace(d_minus, d_plus, n_alpha)
    # inf_t (F - t a) = -sup_t (a t - F).
    values = -_conjugate_values(f.x, f.values, alphas)
    clamp = 10.0 * slope_tol + 1e-12
    floor = float(values.min())
    if floor < -clamp:
        raise NegativeValuesError(
            f"spectrum dips to {floor:g}; target is not entropy-like")
    values = np.maximum(values, 0.0)
    top = float(values.max())
    return validate_cms(GridFunction(alphas, values), top, tol=np.inf)


def cms_from_samples(alphas, values, declared_max: float, tol: float) -> CmsFunction:
    """Convenience wrapper: validate raw samples as a CmsFunction."""
    return validate_cms(grid_function(alphas, values), declared_max, tol)


__all__ = [
    "GridFunction", "CmsFunction", "grid_function", "legendre",
    "fenchel_roundtrip_error", "supporting_intercepts", "validate_cms",
    "spectrum_from_pressure", "cms_from_samples",
]
