"""Spectral-radius solver: closed-form oracles, scaling laws, batch parity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftspectra._perron import (log_perron_pair, log_perron_root, perron_pair,
                                perron_root, perron_roots)
from sftspectra.errors import NotPrimitiveError


def root_2x2(a, b, c, d):
    """Largest eigenvalue of [[a, b], [c, d]] for nonnegative entries."""
    mean = 0.5 * (a + d)
    return mean + math.hypot(0.5 * (a - d), math.sqrt(b * c))


def test_known_roots():
    assert perron_root(np.ones((2, 2))) == pytest.approx(2.0, abs=1e-13)
    golden = perron_root(np.array([[1.0, 1.0], [1.0, 0.0]]))
    assert golden == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-13)
    # Irreducible but periodic support still has a well-defined radius.
    assert perron_root(np.array([[0.0, 2.0], [8.0, 0.0]])) == pytest.approx(4.0, abs=1e-12)


def test_rejects_empty_row_support():
    with pytest.raises(NotPrimitiveError):
        perron_root(np.array([[1.0, 1.0], [0.0, 0.0]]))


positive = st.floats(1e-6, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(positive, positive, positive, positive)
def test_2x2_closed_form(a, b, c, d):
    w = np.array([[a, b], [c, d]])
    expected = root_2x2(a, b, c, d)
    assert perron_root(w) == pytest.approx(expected, rel=5e-13)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10_000))
def test_dense_oracle(n, seed):
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.1, 10.0, (n, n))
    expected = max(np.linalg.eigvals(w).real)
    assert perron_root(w) == pytest.approx(expected, rel=1e-11)


def test_pair_satisfies_eigen_equation():
    rng = np.random.default_rng(7)
    w = rng.uniform(0.5, 3.0, (5, 5))
    rho, v, u = perron_pair(w)
    assert (v > 0).all() and (u > 0).all()
    assert np.max(np.abs(w @ v - rho * v)) < 1e-10 * rho
    assert np.max(np.abs(u @ w - rho * u)) < 1e-10 * rho
    assert v.max() == pytest.approx(1.0)


def test_log_domain_shift_invariance():
    # Scaling every weight by e^c shifts the log root by exactly c.
    rng = np.random.default_rng(3)
    lw = rng.uniform(-5.0, 5.0, (4, 4))
    base = log_perron_root(lw)
    for c in (-600.0, -50.0, 200.0, 690.0):
        assert log_perron_root(lw + c) == pytest.approx(base + c, abs=1e-11)


def test_log_domain_handles_huge_ranges():
    # Entries spanning hundreds of orders of magnitude stay finite in the
    # log domain; the linear solver would overflow immediately.
    lw = np.array([[800.0, -700.0], [300.0, -900.0]])
    got = log_perron_root(lw)
    # Dominant term: the 1-cycle at exp(800).
    assert got == pytest.approx(800.0, abs=1e-10)
    rho, v, _ = log_perron_pair(lw)
    assert rho == got
    assert v.max() == pytest.approx(0.0)  # normalized in log space
    # Residual of the log eigen equation at moderate scale.
    mid = lw - rho
    lhs = np.logaddexp(mid[:, 0] + v[0], mid[:, 1] + v[1])
    assert np.max(np.abs(lhs - v)) < 1e-10


@settings(max_examples=100, deadline=None)
@given(st.floats(-300, 300), st.floats(-300, 300), st.floats(-300, 300),
       st.floats(-300, 300))
def test_log_matches_linear_when_both_represent(la, lb, lc, ld):
    lw = np.array([[la, lb], [lc, ld]])
    shift = lw.max()
    linear = math.log(perron_root(np.exp(lw - shift))) + shift
    assert log_perron_root(lw) == pytest.approx(linear, abs=1e-10)


def test_batched_matches_scalar():
    rng = np.random.default_rng(11)
    stack = rng.uniform(0.05, 20.0, (64, 3, 3))
    # A few members get harsh scale spreads.
    stack[0] *= 1e8
    stack[1] *= 1e-8
    stack[2, 0, 0] = 1e12
    batched = perron_roots(stack)
    singles = np.array([perron_root(m) for m in stack])
    assert np.max(np.abs(batched - singles) / singles) < 1e-11


def test_batched_shape_validation():
    with pytest.raises(ValueError):
        perron_roots(np.ones((3, 3)))


def test_tolerance_is_honored():
    w = np.array([[1.0, 1.0], [1.0, 0.0]])
    exact = (1 + math.sqrt(5)) / 2
    for tol in (1e-6, 1e-10, 1e-13):
        assert abs(perron_root(w, tol=tol) - exact) <= 10 * tol * exact
