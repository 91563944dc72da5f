"""Pressure, equilibrium chains, and the variational identities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftspectra import (SftMismatchError, birkhoff_average,
                        constant_potential, equilibrium_measure, lift,
                        measure_entropy, measure_integral, orbit_measure,
                        periodic_orbit, pressure, pressure_curve,
                        pressure_gradient, tabulate, topological_entropy)
from sftspectra import pressures as batch_pressures

from conftest import binary_entropy


def logistic(t):
    return float(np.logaddexp(0.0, t))


def test_pressure_closed_form(full2, first_symbol):
    for t in (-8.0, -1.0, 0.0, 0.5, 3.0, 10.0):
        assert pressure(full2, first_symbol, t) == pytest.approx(logistic(t), abs=1e-12)


def test_pressure_at_zero_is_entropy(full2, golden, three_letter):
    for sft in (full2, golden, three_letter):
        phi = constant_potential(sft, 0.7)
        assert pressure(sft, phi, 0.0) == pytest.approx(topological_entropy(sft), abs=1e-12)


def test_constant_shift_moves_pressure_linearly(golden):
    phi = tabulate(golden, 2, lambda w: 0.4 * w[0] - 1.1 * w[1])
    shifted = phi + constant_potential(golden, 2.5)
    for t in (-2.0, 0.3, 1.7):
        assert pressure(golden, shifted, t) == pytest.approx(
            pressure(golden, phi, t) + 2.5 * t, abs=1e-11)


def test_lift_leaves_pressure_alone(golden):
    phi = tabulate(golden, 2, lambda w: 0.9 * w[0] + 0.2 * w[1])
    lifted = lift(phi, 4)
    for t in (-1.0, 0.0, 2.2):
        assert pressure(golden, lifted, t) == pytest.approx(
            pressure(golden, phi, t), abs=1e-11)


def test_batch_pressures_match_scalar(golden):
    phi = tabulate(golden, 3, lambda w: w[0] - 0.7 * w[1] + 0.31 * w[2])
    ts = np.linspace(-30.0, 30.0, 101)
    batch = batch_pressures(golden, phi, ts)
    singles = np.array([pressure(golden, phi, t) for t in ts])
    assert np.max(np.abs(batch - singles)) < 1e-11


def test_equilibrium_is_bernoulli_on_full_shift(full2, first_symbol):
    # For phi = x0 the equilibrium chain is iid with P(1) = e^t/(1+e^t).
    for t in (-2.0, 0.0, 1.5):
        m = equilibrium_measure(full2, first_symbol, t)
        p = math.exp(t) / (1.0 + math.exp(t))
        assert np.max(np.abs(m.stochastic - np.array([[1 - p, p], [1 - p, p]]))) < 1e-12
        assert m.stationary == pytest.approx([1 - p, p], abs=1e-12)
        assert measure_entropy(m) == pytest.approx(float(binary_entropy(p)), abs=1e-12)
        assert measure_integral(m, first_symbol) == pytest.approx(p, abs=1e-12)


def test_variational_identity_at_equilibrium(golden):
    phi = tabulate(golden, 2, lambda w: 0.8 * w[0] - 0.5 * w[1])
    for t in (-3.0, 0.4, 2.0):
        m = equilibrium_measure(golden, phi, t)
        lhs = measure_entropy(m) + t * measure_integral(m, phi)
        assert lhs == pytest.approx(pressure(golden, phi, t), abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=5),
       st.floats(-4, 4))
def test_variational_principle_bounds_orbit_measures(golden, symbols, t):
    """P(t phi) >= h(mu) + t * integral(phi) for every orbit measure."""
    from sftspectra import OrbitNotAdmissibleError
    try:
        orb = periodic_orbit(golden, symbols)
    except OrbitNotAdmissibleError:
        return
    phi = tabulate(golden, 2, lambda w: 0.37 * w[0] - 0.61 * w[1])
    m = orbit_measure(golden, orb, max(orb.period, 2))
    value = measure_entropy(m) + t * measure_integral(m, phi)
    assert value <= pressure(golden, phi, t) + 1e-10


def test_orbit_measure_is_deterministic(full2, first_symbol):
    orb = periodic_orbit(full2, (0, 1, 1))
    m = orbit_measure(full2, orb, 3)
    assert measure_entropy(m) == pytest.approx(0.0, abs=1e-14)
    assert measure_integral(m, first_symbol) == pytest.approx(
        birkhoff_average(first_symbol, orb), abs=1e-14)
    with pytest.raises(ValueError):
        orbit_measure(full2, orb, 1)  # phases collide at block length 1


def test_gradient_is_a_probability_vector(golden):
    phi = tabulate(golden, 2, lambda w: 1.3 * w[0] + 0.2 * w[1])
    grad = pressure_gradient(golden, phi, 0.8)
    values = np.array(list(grad.values()))
    assert (values >= 0).all()
    assert values.sum() == pytest.approx(1.0, abs=1e-12)
    # Chain rule: sum of gradient entries times table entries equals dP/dt.
    slope = sum(g * phi.table[w[:phi.depth]] for w, g in grad.items())
    h = 1e-6
    fd = (pressure(golden, phi, 0.8 + h) - pressure(golden, phi, 0.8 - h)) / (2 * h)
    assert slope == pytest.approx(fd, abs=1e-7)


def test_pressure_curve_shape(full2, first_symbol):
    t = np.linspace(-5, 5, 41)
    curve = pressure_curve(full2, first_symbol, t)
    assert curve.values[20] == pytest.approx(math.log(2.0), abs=1e-12)
    slopes = np.diff(curve.values) / np.diff(curve.t_grid)
    assert (np.diff(slopes) >= -1e-9).all()
    assert np.max(np.abs(slopes)) <= first_symbol.sup_norm() + 1e-9
    with pytest.raises(ValueError):
        pressure_curve(full2, first_symbol, [1.0, 1.0, 2.0])


def test_foreign_potential_is_rejected(full2, golden, first_symbol):
    with pytest.raises(SftMismatchError):
        pressure(golden, first_symbol, 1.0)
    m = equilibrium_measure(golden, constant_potential(golden, 0.0), 0.0)
    with pytest.raises(SftMismatchError):
        measure_integral(m, first_symbol)
