"""Legendre transforms on grids, and the spectrum <-> pressure dictionary."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftspectra import (CmsFunction, GridFunction, MaxMismatchError,
                        NegativeValuesError, NonUniqueMaximizerError,
                        NotConcaveError, NotConvexError,
                        SlopesNotStabilizedError, cms_from_samples,
                        fenchel_roundtrip_error, grid_function, legendre,
                        spectrum_from_pressure, supporting_intercepts,
                        validate_cms)

from conftest import binary_entropy


def logistic_grid(lo=-10.0, hi=10.0, n=2001):
    t = np.linspace(lo, hi, n)
    return grid_function(t, np.logaddexp(0.0, t))


def test_grid_function_validation():
    with pytest.raises(ValueError):
        grid_function([0.0, 1.0, 0.5], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        grid_function([0.0, 1.0, 3.0], [1.0, 2.0, 3.0])  # non-uniform
    with pytest.raises(ValueError):
        grid_function([0.0, 1.0], [1.0, np.inf])
    g = grid_function([0.0, 0.5, 1.0], [3.0, 2.0, 1.9])
    assert g.spacing == 0.5


def test_legendre_of_quadratic_is_quadratic():
    # F(t) = t^2/2 is its own conjugate.
    t = np.linspace(-5.0, 5.0, 2001)
    star = legendre(grid_function(t, 0.5 * t * t))
    assert star.x[0] == pytest.approx(-5.0, abs=5e-3)
    assert star.x[-1] == pytest.approx(5.0, abs=5e-3)
    err = np.abs(star.values - 0.5 * star.x * star.x)
    assert err.max() < 1e-5


def test_legendre_of_logistic_is_negative_binary_entropy():
    star = legendre(logistic_grid())
    inner = (star.x > 0.02) & (star.x < 0.98)
    expected = -binary_entropy(star.x[inner])
    assert np.max(np.abs(star.values[inner] - expected)) < 2e-5


def test_legendre_rejects_concave_input():
    t = np.linspace(-1.0, 1.0, 101)
    with pytest.raises(NotConvexError):
        legendre(grid_function(t, -t * t))


def test_legendre_of_affine_collapses_to_a_point():
    t = np.linspace(0.0, 1.0, 11)
    star = legendre(grid_function(t, 2.0 * t + 3.0))
    assert len(star.x) == 1
    assert star.x[0] == pytest.approx(2.0)
    assert star.values[0] == pytest.approx(-3.0)


convex_slopes = st.lists(st.floats(-4.0, 4.0), min_size=3, max_size=40)


@settings(max_examples=60, deadline=None)
@given(convex_slopes, st.floats(-3.0, 3.0))
def test_tilt_shifts_the_conjugate_domain(slopes, a0):
    """Adding a0*t to F translates F* by a0 in its argument."""
    increments = np.sort(np.asarray(slopes))
    if increments[-1] - increments[0] < 0.1:
        return
    values = np.concatenate([[0.0], np.cumsum(increments)])
    t = np.linspace(0.0, 1.0, len(values))
    f = grid_function(t, values)
    tilted = grid_function(t, values + a0 * t)
    star = legendre(f)
    star_tilted = legendre(tilted)
    assert star_tilted.x[0] == pytest.approx(star.x[0] + a0, abs=1e-9)
    assert star_tilted.x[-1] == pytest.approx(star.x[-1] + a0, abs=1e-9)
    moved = np.interp(star.x + a0, star_tilted.x, star_tilted.values)
    assert np.max(np.abs(moved - star.values)) < 1e-7


@settings(max_examples=60, deadline=None)
@given(convex_slopes, st.floats(-5.0, 5.0))
def test_adding_a_constant_drops_through_the_conjugate(slopes, c):
    increments = np.sort(np.asarray(slopes))
    if increments[-1] - increments[0] < 0.1:
        return
    values = np.concatenate([[0.0], np.cumsum(increments)])
    t = np.linspace(-1.0, 1.0, len(values))
    star = legendre(grid_function(t, values))
    star_c = legendre(grid_function(t, values + c))
    assert np.max(np.abs(star_c.values - (star.values - c))) < 1e-9


@settings(max_examples=60, deadline=None)
@given(convex_slopes)
def test_biconjugate_never_exceeds_the_function(slopes):
    increments = np.sort(np.asarray(slopes))
    if increments[-1] - increments[0] < 0.1:
        return
    values = np.concatenate([[0.0], np.cumsum(increments)])
    f = grid_function(np.linspace(-2.0, 2.0, len(values)), values)
    double = legendre(legendre(f, samples=4 * len(f.x)))
    keep = (f.x >= double.x[0]) & (f.x <= double.x[-1])
    back = np.interp(f.x[keep], double.x, double.values)
    assert (back <= f.values[keep] + 1e-8).all()


def test_roundtrip_error_small_for_smooth_convex():
    assert fenchel_roundtrip_error(logistic_grid()) < 1e-4
    t = np.linspace(-3.0, 3.0, 1501)
    assert fenchel_roundtrip_error(grid_function(t, np.cosh(t))) < 1e-4


def test_supporting_intercepts_of_logistic():
    lo, hi = supporting_intercepts(logistic_grid(-15.0, 15.0, 3001))
    # Tangent intercepts of log(1+e^t) sweep (0, log 2].
    assert hi == pytest.approx(math.log(2.0), abs=1e-6)
    assert 0.0 <= lo < 1e-4


def test_validate_cms_accepts_binary_entropy():
    a = np.linspace(0.0, 1.0, 401)
    cms = validate_cms(grid_function(a, binary_entropy(a)), math.log(2.0), 1e-9)
    assert isinstance(cms, CmsFunction)
    assert cms.maximizer_index == 200
    assert cms.max_value == pytest.approx(math.log(2.0), abs=1e-12)


def test_validate_cms_rejections():
    a = np.linspace(0.0, 1.0, 101)
    with pytest.raises(NotConcaveError):
        validate_cms(grid_function(a, (a - 0.5) ** 2), 0.25, 1e-6)
    with pytest.raises(NegativeValuesError):
        validate_cms(grid_function(a, binary_entropy(a) - 0.1), math.log(2.0) - 0.1, 1e-6)
    with pytest.raises(MaxMismatchError):
        validate_cms(grid_function(a, binary_entropy(a)), 0.5, 1e-6)
    flat = np.minimum(binary_entropy(a), 0.6)
    with pytest.raises(NonUniqueMaximizerError):
        validate_cms(grid_function(a, flat), 0.6, 1e-6)


def test_cms_from_samples_matches_validate(full2):
    a = np.linspace(0.0, 1.0, 201)
    cms = cms_from_samples(a, binary_entropy(a), math.log(2.0), 1e-9)
    assert cms.max_value == pytest.approx(math.log(2.0), abs=1e-12)
    assert cms.base.values.min() >= 0.0


def test_spectrum_from_pressure_recovers_binary_entropy():
    f = logistic_grid(-40.0, 40.0, 4001)
    cms = spectrum_from_pressure(f, slope_tol=1e-3)
    got = cms.base
    expected = binary_entropy(got.x)
    inner = (got.x > 0.05) & (got.x < 0.95)
    assert np.max(np.abs(got.values[inner] - expected[inner])) < 1e-4
    assert cms.max_value == pytest.approx(math.log(2.0), abs=1e-6)


def test_spectrum_from_pressure_demands_settled_slopes():
    with pytest.raises(SlopesNotStabilizedError):
        spectrum_from_pressure(logistic_grid(-2.0, 2.0, 401), slope_tol=1e-3)
