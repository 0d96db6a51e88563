import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symindex.angles import Angle, best_fraction, snap_rational


def test_exact_reduces_into_zero_two():
    assert Angle.exact(5, 2).pi_frac == Fraction(1, 2)
    assert Angle.exact(-1, 3).pi_frac == Fraction(5, 3)
    assert Angle.exact(4).is_zero


def test_from_radians_snaps_small_denominators():
    a = Angle.from_radians(2 * math.pi / 3)
    assert a.is_exact and a.pi_frac == Fraction(2, 3)


def test_irrational_radian_stays_numeric_and_decided():
    a = Angle.from_radians(1.0)
    assert not a.is_exact
    assert not a.undecided
    assert a.record.q_max == 64


def test_near_rational_is_flagged_undecided():
    a = Angle.from_radians(math.pi / 2 + 1e-7)
    assert not a.is_exact and a.undecided


def test_fractional_parts_are_exact():
    a = Angle.exact(2, 3)
    assert a.frac_over_pi(3) == 0
    assert a.frac_over_pi(2) == Fraction(1, 3)
    assert a.frac_over_2pi(3) == 0
    assert a.resonates(3) and not a.resonates(2)


def test_period_matches_definition():
    assert Angle.exact(1, 2).period() == 4
    assert Angle.exact(2, 3).period() == 3
    assert Angle.exact(1).period() == 2
    assert Angle.from_radians(1.0).period() is None


def test_quarter_turn_points_are_exact():
    assert Angle.exact(1, 2).point() == 1j
    assert Angle.exact(1).point() == -1


def test_json_round_trip():
    for a in (Angle.exact(3, 4), Angle.from_radians(1.25)):
        assert Angle.from_json(a.to_json()) == a
    with pytest.raises(ValueError):
        Angle.from_json({"degrees": 3})


def test_snap_and_best_fraction():
    assert best_fraction(0.3333333333) == Fraction(1, 3)
    assert snap_rational(0.25) == Fraction(1, 4)
    assert isinstance(snap_rational(math.sqrt(2)), float)


@given(st.integers(-200, 200), st.integers(1, 64))
def test_conjugate_is_an_involution(p, q):
    a = Angle.exact(p, q)
    assert a.conj().conj() == a
    assert (a.pi_frac + a.conj().pi_frac) % 2 == 0


@given(st.integers(0, 127), st.integers(1, 64), st.integers(1, 50))
def test_times_agrees_with_resonance(p, q, m):
    a = Angle.exact(p, q)
    assert a.times(m).is_zero == a.resonates(m)
