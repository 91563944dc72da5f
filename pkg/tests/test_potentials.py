"""Locally constant potentials, periodic orbits, and their averages."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftspectra import (OrbitNotAdmissibleError, OrbitsIntersectError,
                        SftMismatchError, affine_combine, birkhoff_average,
                        constant_potential, lift,
                        normalized_separation_potential,
                        orbit_distance_potential, orbits_intersect,
                        periodic_orbit, tabulate)


def test_periodic_orbit_canonical_rotation(full2):
    orb = periodic_orbit(full2, (1, 0, 0))
    assert orb.word.symbols == (0, 0, 1)
    assert orb.period == 3
    assert orb.point(0, 5) == (0, 0, 1, 0, 0)
    assert orb.point(2, 4) == (1, 0, 0, 1)


def test_periodic_orbit_rejects_powers(full2):
    with pytest.raises(OrbitNotAdmissibleError):
        periodic_orbit(full2, (0, 1, 0, 1))


def test_periodic_orbit_rejects_bad_wraparound(golden):
    # 0 1 1 fails inside; 1 0 1 fails only across the seam.
    with pytest.raises(OrbitNotAdmissibleError):
        periodic_orbit(golden, (0, 1, 1))
    with pytest.raises(OrbitNotAdmissibleError):
        periodic_orbit(golden, (1, 0, 1))


def test_orbits_intersect_is_rotation_invariant(full2):
    assert orbits_intersect(periodic_orbit(full2, (0, 1, 1)),
                            periodic_orbit(full2, (1, 1, 0)))
    assert not orbits_intersect(periodic_orbit(full2, (0, 1)),
                                periodic_orbit(full2, (0, 0, 1)))


def test_potential_lookup_and_sup_norm(first_symbol):
    assert first_symbol((1, 0, 1)) == 1.0
    assert first_symbol((0,)) == 0.0
    assert first_symbol.sup_norm() == 1.0


def test_potential_table_is_complete(golden):
    phi = tabulate(golden, 3, lambda w: float(sum(w)))
    assert set(phi.table) == {(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 0, 1)}
    assert phi((1, 0, 1)) == 2.0


def test_arithmetic_matches_pointwise(full2, first_symbol):
    psi = tabulate(full2, 2, lambda w: float(w[0] - 2 * w[1]))
    combo = first_symbol * 3.0 + psi - constant_potential(full2, 0.5)
    for w in ((0, 0), (0, 1), (1, 0), (1, 1)):
        assert combo(w) == pytest.approx(3.0 * w[0] + (w[0] - 2.0 * w[1]) - 0.5)
    assert (-first_symbol)((1, 1)) == -1.0


def test_lift_preserves_values(golden):
    phi = tabulate(golden, 2, lambda w: 0.25 * w[0] - 1.5 * w[1])
    lifted = lift(phi, 4)
    assert lifted.depth == 4
    for w in lifted.table:
        assert lifted(w) == phi(w[:2])


def test_mismatched_subshifts_refuse_to_combine(full2, golden, first_symbol):
    other = constant_potential(golden, 1.0)
    with pytest.raises(SftMismatchError):
        _ = first_symbol + other


def test_affine_combine(full2, first_symbol):
    psi = constant_potential(full2, 2.0)
    mix = affine_combine(first_symbol, psi, 0.25)
    # (1-t) first + t second
    assert mix((1, 1)) == pytest.approx(0.75 * 1.0 + 0.25 * 2.0)
    assert mix((0, 0)) == pytest.approx(0.5)


def test_birkhoff_average_closed_forms(full2, first_symbol):
    assert birkhoff_average(first_symbol, periodic_orbit(full2, (0,))) == 0.0
    assert birkhoff_average(first_symbol, periodic_orbit(full2, (1,))) == 1.0
    orb = periodic_orbit(full2, (0, 0, 1))
    assert birkhoff_average(first_symbol, orb) == pytest.approx(1.0 / 3.0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=6),
       st.floats(-5, 5), st.floats(-5, 5))
def test_birkhoff_average_is_affine(full2, first_symbol, symbols, a, b):
    """Averaging along a fixed orbit is affine in the potential."""
    try:
        orb = periodic_orbit(full2, symbols)
    except OrbitNotAdmissibleError:
        return
    psi = tabulate(full2, 2, lambda w: float(w[0] * w[1]) - 0.3)
    left = birkhoff_average(first_symbol * a + psi * b, orb)
    right = a * birkhoff_average(first_symbol, orb) + b * birkhoff_average(psi, orb)
    assert left == pytest.approx(right, abs=1e-12)


def test_orbit_distance_potential_values(full2):
    orb = periodic_orbit(full2, (0, 1))
    phi = orbit_distance_potential(full2, orb, 3)
    # Orbit prefixes sit at the depth cap, total disagreement at -1.
    assert phi((0, 1, 0)) == -0.125
    assert phi((1, 0, 1)) == -0.125
    assert phi((1, 1, 0)) == -0.5  # best prefix "1" has length 1
    assert phi((0, 0, 0)) == -0.5
    for w, v in phi.table.items():
        assert -1.0 <= v <= -0.125


def test_orbit_distance_maximum_is_on_the_orbit(full2):
    orb = periodic_orbit(full2, (0, 1))
    phi = orbit_distance_potential(full2, orb, 3)
    best = max(birkhoff_average(phi, periodic_orbit(full2, w))
               for w in ((0,), (1,), (0, 1), (0, 0, 1), (0, 1, 1)))
    assert best == birkhoff_average(phi, orb) == -0.125


def test_separation_potential_signs(full2):
    a = periodic_orbit(full2, (0,))
    b = periodic_orbit(full2, (1,))
    g = normalized_separation_potential(full2, a, b, 3)
    assert g((0, 0, 0)) == 1.0
    assert g((1, 1, 1)) == -1.0
    assert abs(g((0, 1, 1))) < 1.0
    swapped = normalized_separation_potential(full2, b, a, 3)
    for w in g.table:
        assert swapped(w) == -g(w)


def test_separation_potential_rejects_equal_orbits(full2):
    a = periodic_orbit(full2, (0, 1))
    with pytest.raises(OrbitsIntersectError):
        normalized_separation_potential(full2, a, periodic_orbit(full2, (1, 0)), 2)


def test_foreign_orbit_rejected(golden):
    # The all-ones fixed point exists on the full shift only.
    from sftspectra import full_shift
    ones = periodic_orbit(full_shift(2), (1,))
    with pytest.raises(OrbitNotAdmissibleError):
        orbit_distance_potential(golden, ones, 2)
