"""Perron root and Perron vectors of nonnegative primitive matrices.

Power iteration with Collatz-Wielandt enclosure: for a primitive matrix W
and a strictly positive vector v, the ratios (Wv)_i / v_i bracket the
spectral radius, and both brackets converge geometrically.  The iteration
starts from the all-ones vector and renormalizes by the max norm, so the
result is deterministic.

Iteration runs on W + cI with c = exp(maximum cycle mean of log W), found
by Karp's algorithm.  The diagonal boost leaves the Perron vector alone,
shifts the root by exactly c, and kills the rotating modes that stall the
enclosure when underflow leaves an effectively periodic support; since
c <= rho the recovery rho = rho(W + cI) - c never cancels.  When even the
boosted iteration cannot shrink the enclosure (spectral gap below fp), a
dense eigensolve takes over, accepted only if it lands inside the
enclosure already certified.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, NotPrimitiveError

DEFAULT_TOL = 1e-13
MAX_ITERATIONS = 100_000

# Slow-progress bailout: if a 500-sweep window shrinks the enclosure by less
# than 10%, the spectral gap is too small for power iteration to finish
# within budget and the dense solve takes over.
CHECK_EVERY = 500
MIN_SHRINK = 0.9

_VECTOR_FLOOR = 1e-280


def perron_root(matrix: np.ndarray, tol: float = DEFAULT_TOL,
                max_iterations: int = MAX_ITERATIONS) -> float:
    root, _ = _iterate(np.asarray(matrix, dtype=float), tol, max_iterations)
    return root


def perron_pair(matrix: np.ndarray, tol: float = DEFAULT_TOL,
                max_iterations: int = MAX_ITERATIONS) -> tuple[float, np.ndarray, np.ndarray]:
    """Spectral radius with right and left Perron vectors (max norm 1)."""
    w = np.asarray(matrix, dtype=float)
    root, right = _iterate(w, tol, max_iterations)
    _, left = _iterate(w.T, tol, max_iterations)
    return root, right, left


def log_perron_root(log_matrix: np.ndarray, tol: float = DEFAULT_TOL,
                    max_iterations: int = MAX_ITERATIONS) -> float:
    log_root, _ = _iterate_log(np.asarray(log_matrix, dtype=float), tol, max_iterations)
    return log_root


def log_perron_pair(log_matrix: np.ndarray, tol: float = DEFAULT_TOL,
                    max_iterations: int = MAX_ITERATIONS) -> tuple[float, np.ndarray, np.ndarray]:
    """perron_pair for a matrix given entrywise in logs (-inf off the support).

    Returns (log root, log right vector, log left vector), the vectors
    normalized to max 0.  Immune to underflow for arbitrarily wide exponent
    ranges thanks to max-plus balancing; the support pattern must still be
    primitive.
    """
    lw = np.asarray(log_matrix, dtype=float)
    log_root, log_right = _iterate_log(lw, tol, max_iterations)
    _, log_left = _iterate_log(lw.T, tol, max_iterations)
    return log_root, log_right, log_left


def perron_roots(stack: np.ndarray, tol: float = DEFAULT_TOL,
                 max_iterations: int = MAX_ITERATIONS) -> np.ndarray:
    """Spectral radii of a stack of nonnegative primitive matrices.

    One Collatz-Wielandt iteration runs over the whole batch, with the
    same per-matrix diagonal boost as the scalar path; members whose
    enclosure cannot close in the shared loop are finished one by one by
    the scalar solver.  Exists because optimizers evaluate pressure on
    hundreds of parameters against the same tiny recoded graph, where
    per-call overhead costs more than the arithmetic.
    """
    w = np.asarray(stack, dtype=float)
    if w.ndim != 3 or w.shape[1] != w.shape[2]:
        raise ValueError("stack must have shape (batch, n, n)")
    b, n = w.shape[0], w.shape[1]
    if b == 0:
        return np.empty(0)

    with np.errstate(divide="ignore"):
        lw = np.log(np.maximum(w, 0.0))
    mu = _max_cycle_means(lw)
    boost = np.where(np.isfinite(mu) & (mu < 700.0), np.exp(np.minimum(mu, 700.0)), 0.0)
    boosted = w + boost[:, None, None] * np.eye(n)

    v = np.ones((b, n))
    done = np.zeros(b, dtype=bool)
    fallback = np.zeros(b, dtype=bool)
    roots = np.zeros(b)
    best_width = np.full(b, np.inf)
    best_root = np.zeros(b)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for it in range(min(max_iterations, 5000)):
            u = np.einsum("bij,bj->bi", boosted, v)
            lost = (~done) & (~fallback) & (u.min(axis=1) <= 0.0)
            if lost.any():
                # Positivity lost to underflow; park the member on the
                # identity and finish it with the scalar solver later.
                fallback |= lost
                boosted[lost] = np.eye(n)
                u[lost] = 1.0
            ratios = u / v
            lo, hi = ratios.min(axis=1), ratios.max(axis=1)
            width = (hi - lo) / hi
            live = (~done) & (~fallback)
            improved = live & np.isfinite(width) & (width < best_width)
            best_width[improved] = width[improved]
            best_root[improved] = 0.5 * (lo + hi)[improved]
            finished = live & (width <= tol)
            roots[finished] = 0.5 * (lo + hi)[finished]
            done |= finished
            if (done | fallback).all():
                break
            v = u / u.max(axis=1, keepdims=True)
    # Plateau rule, as in the scalar path: a bracket that stopped shrinking
    # just above tol is still a certified enclosure.
    plateau = (~done) & (~fallback) & (best_width <= np.maximum(tol, 1e-11))
    roots[plateau] = best_root[plateau]
    done |= plateau
    for i in np.flatnonzero(~done):
        roots[i], _ = _iterate(w[i], tol, max_iterations)
        boost[i] = 0.0
    return roots - boost


def _max_cycle_means(lw: np.ndarray) -> np.ndarray:
    """Karp's maximum cycle mean for each member of a (b, n, n) log stack."""
    b, n = lw.shape[0], lw.shape[1]
    hist = np.empty((n + 1, b, n))
    hist[0] = 0.0
    for m in range(1, n + 1):
        hist[m] = np.max(hist[m - 1][:, :, None] + lw, axis=1)
    with np.errstate(invalid="ignore"):
        gaps = (hist[n][None] - hist[:n]) / (n - np.arange(n))[:, None, None]
    per_vertex = np.where(np.isfinite(hist[:n]), gaps, np.inf).min(axis=0)
    reachable = np.isfinite(hist[n]) & np.isfinite(per_vertex)
    per_vertex = np.where(reachable, per_vertex, -np.inf)
    return per_vertex.max(axis=1)


def _max_cycle_mean(lw: np.ndarray) -> float:
    """Karp's maximum cycle mean of the log-weight graph (-inf off edges)."""
    n = lw.shape[0]
    table = np.empty((n + 1, n))
    table[0] = 0.0
    for m in range(1, n + 1):
        table[m] = np.max(table[m - 1][:, None] + lw, axis=0)
    best = -np.inf
    with np.errstate(invalid="ignore"):
        gaps = (table[n][None, :] - table[:n]) / (n - np.arange(n))[:, None]
    for v in range(n):
        if table[n][v] == -np.inf:
            continue
        finite = gaps[:, v][np.isfinite(table[:n, v])]
        if len(finite):
            best = max(best, finite.min())
    return best


def _dense(w: np.ndarray) -> tuple[float, np.ndarray]:
    """Direct eigensolve, for matrices whose spectral gap defeats iteration.

    The Perron root is selected as the eigenvalue of largest real part: it
    is itself an eigenvalue and bounds every real part, whereas largest
    modulus can tie with a rotated partner when underflow leaves an
    effectively periodic support.  Entries of the true Perron vector below
    fp noise come out as noise; they are floored at a representable
    positive value so downstream logarithms stay finite.
    """
    values, vectors = np.linalg.eig(w)
    i = int(np.argmax(values.real))
    vec = np.real(vectors[:, i])
    lead = vec[int(np.argmax(np.abs(vec)))]
    if lead < 0.0:
        vec = -vec
    vec = np.maximum(vec, np.abs(vec).max() * _VECTOR_FLOOR)
    return float(values.real[i]), vec / vec.max()


def _iterate_log(lw: np.ndarray, tol: float, max_iterations: int) -> tuple[float, np.ndarray]:
    """Log-domain Perron data via max-plus balancing.

    The tropical eigenvector z of (lw - mu) conjugates the matrix so that
    every entry is at most one and the critical cycle sits exactly at one:
    the balanced spectral radius lies in [1, n] regardless of the exponent
    range of the input, entries that underflow after balancing are
    negligible relative to the critical cycle by construction, and the
    iteration itself runs in fast linear arithmetic.
    """
    n = lw.shape[0]
    if lw.shape != (n, n):
        raise ValueError("matrix must be square")
    if np.any(np.max(lw, axis=1) == -np.inf):
        raise NotPrimitiveError("a row has empty support")
    mu = _max_cycle_mean(lw)
    if not np.isfinite(mu):
        raise NotPrimitiveError("the support graph has no cycle")
    gauge = lw - mu
    closure = gauge.copy()
    for k in range(n):
        np.maximum(closure, closure[:, k:k + 1] + closure[k:k + 1, :],
                   out=closure)
    critical = int(np.argmax(np.diag(closure)))
    z = closure[:, critical].copy()
    z[critical] = 0.0
    if not np.all(np.isfinite(z)):
        raise NotPrimitiveError("support graph is not strongly connected")
    balanced = np.minimum(gauge + z[None, :] - z[:, None], 0.0)
    # The +I boost breaks periodic supports; it shifts the root by exactly
    # one and leaves the Perron vector alone.
    root_boosted, vec = _power_lin(np.exp(balanced) + np.eye(n), 0.5 * tol,
                                   max_iterations)
    log_vec = np.log(vec) + z
    return mu + math.log(root_boosted - 1.0), log_vec - log_vec.max()


def _iterate(w: np.ndarray, tol: float, max_iterations: int) -> tuple[float, np.ndarray]:
    n = w.shape[0]
    if w.shape != (n, n):
        raise ValueError("matrix must be square")
    if np.any(np.max(w, axis=1) <= 0.0):
        raise NotPrimitiveError("a row has no positive entry")
    with np.errstate(divide="ignore"):
        lw = np.log(np.maximum(w, 0.0))
    mu = _max_cycle_mean(lw)
    if np.isfinite(mu) and mu < 700.0:
        c = math.exp(mu)
        root, v = _power_lin(w + c * np.eye(n), 0.5 * tol, max_iterations)
        return root - c, v
    return _power_lin(w, tol, max_iterations)


def _power_lin(w: np.ndarray, tol: float, max_iterations: int) -> tuple[float, np.ndarray]:
    n = w.shape[0]
    v = np.ones(n)
    best_width = np.inf
    best = (np.inf, v)
    best_bounds = (0.0, np.inf)
    stall = 0
    checkpoint = np.inf
    for it in range(max_iterations):
        u = w @ v
        low = u.min()
        if low <= 0.0:
            raise NotPrimitiveError(
                "weighted transition matrix lost positivity during iteration "
                "(matrix not primitive, or parameter extreme enough to underflow)")
        ratios = u / v
        lo, hi = ratios.min(), ratios.max()
        width = (hi - lo) / hi
        root = 0.5 * (lo + hi)
        if width < best_width:
            best_width, best, stall = width, (root, u / u.max()), 0
            best_bounds = (lo, hi)
        else:
            stall += 1
        v = u / u.max()
        if width <= tol:
            return root, v
        # Floating-point plateau: the enclosure stops shrinking a little above
        # tol.  Accept the best bracket seen if it is already tight.
        if stall >= 20 and best_width <= max(tol, 1e-11):
            return best
        if (it + 1) % CHECK_EVERY == 0:
            if best_width > MIN_SHRINK * checkpoint:
                break
            checkpoint = best_width
    if best_width <= 1e-9:
        return best
    root_d, vec_d = _dense(w)
    band = 1e-9 * max(1.0, abs(best_bounds[1]))
    if best_bounds[0] - band <= root_d <= best_bounds[1] + band:
        return root_d, vec_d
    raise ConvergenceError(
        f"power iteration did not reach tolerance {tol:g} "
        f"(best enclosure width {best_width:g}) and the dense fallback "
        f"disagrees with the enclosure")
