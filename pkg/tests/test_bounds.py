"""Tests for the rate condition, capacity bounds and the family schedule."""

import math
from fractions import Fraction

import pytest

from awtp.codes.bounds import (
    alphabet_size,
    awtp_capacity_bound,
    awtp_capacity_bound_abstract,
    awtp_failure_bound,
    awtp_information_rate,
    awtp_rate_condition,
    family_schedule,
    schedule_check,
)
from awtp.errors import ParamError


class TestRateCondition:
    def test_reference_values(self):
        assert awtp_rate_condition(100, 10, Fraction(1, 2), Fraction(1, 10)) == Fraction(1990, 9009)
        assert awtp_rate_condition(16, 4, Fraction(1, 4), Fraction(1, 4)) == Fraction(-4, 195)

    def test_accepts_strings(self):
        assert awtp_rate_condition(100, 10, "1/2", "1/10") == Fraction(1990, 9009)

    def test_requires_u_above_v(self):
        with pytest.raises(ParamError):
            awtp_rate_condition(3, 3, Fraction(1, 2), 0)
        with pytest.raises(ParamError):
            awtp_rate_condition(10, 1, Fraction(1, 2), 0)

    def test_more_reads_tolerate_fewer_writes(self):
        low = awtp_rate_condition(100, 10, Fraction(1, 10), Fraction(1, 20))
        high = awtp_rate_condition(100, 10, Fraction(1, 10), Fraction(1, 5))
        assert high < low


class TestCapacityBound:
    def test_perfect_secrecy_is_exact(self):
        assert awtp_capacity_bound(Fraction(1, 8), Fraction(1, 2)) == Fraction(3, 8)
        assert awtp_capacity_bound("1/4", "1/4", 0, N=8, alphabet_bits=8) == Fraction(1, 2)

    def test_epsilon_correction(self):
        bound = awtp_capacity_bound(Fraction(1, 8), Fraction(1, 2), Fraction(1, 100), N=8, alphabet_bits=8)
        expected = 3 / 8 + 2 * 0.01 * (1 / 8) * 8 * math.log2(101) / 8
        assert float(bound) == pytest.approx(expected, rel=1e-9)
        assert bound > Fraction(3, 8)

    def test_abstract_variant(self):
        bound = awtp_capacity_bound_abstract(Fraction(1, 4), Fraction(1, 4), Fraction(1, 100))
        assert float(bound) == pytest.approx(0.5 + 0.02 * math.log2(100), rel=1e-9)
        assert awtp_capacity_bound_abstract(0, 0) == 1

    def test_negative_inputs(self):
        with pytest.raises(ParamError):
            awtp_capacity_bound(Fraction(-1, 8), 0)


class TestDeskQuantities:
    def test_information_rate_equals_R(self, desk_params):
        assert awtp_information_rate(desk_params) == Fraction(1, 30)

    def test_failure_bound(self, desk_params):
        assert awtp_failure_bound(desk_params) == Fraction(2 * 2197, 241**8)

    def test_alphabet(self, desk_params):
        assert alphabet_size(desk_params) == 241**30


class TestSchedule:
    def test_family_parameters(self):
        schedule = family_schedule(Fraction(1, 100))
        assert (schedule.u, schedule.v) == (10000, 100)
        assert schedule.xi == Fraction(13, 100)

    @pytest.mark.parametrize("xi1", [Fraction(1, 26), Fraction(2, 101), 0])
    def test_invalid_xi1(self, xi1):
        with pytest.raises(ParamError):
            family_schedule(xi1)

    @pytest.mark.parametrize("xi1", ["1/100", "1/200"])
    def test_schedule_meets_rate_condition(self, xi1):
        check = schedule_check(xi1, Fraction(1, 5), Fraction(1, 5))
        assert check.R == 1 - Fraction(2, 5) - 12 * Fraction(xi1)
        assert check.holds

    def test_no_rate_left(self):
        with pytest.raises(ParamError):
            schedule_check("1/100", Fraction(1, 2), Fraction(1, 2))
