"""Closed-form rate, capacity and failure bounds, in exact rational arithmetic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Union

from ..errors import ParamError

if TYPE_CHECKING:
    from .codec import AwtpParams

Rational = Union[Fraction, int, str]

LOG_DENOMINATOR_LIMIT = 10**12


def _fraction(value: Rational) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def awtp_rate_condition(u: int, v: int, R: Rational, rho_r: Rational) -> Fraction:
    """Largest admissible write fraction ρ_w for reliable decoding.

    ρ_w < v/(v+1) - v/(v+1) * (v/(v-1) * (uR + 3) + u ρ_r) / (u - v + 1).
    A negative value means no write budget is tolerated at these parameters.
    """
    if not u > v >= 2:
        raise ParamError(f"rate condition needs u > v >= 2, got u={u}, v={v}")
    R, rho_r = _fraction(R), _fraction(rho_r)
    share = Fraction(v, v + 1)
    slack = Fraction(v, v - 1) * (u * R + 3) + u * rho_r
    return share - share * slack / (u - v + 1)


def _log_fraction(value: float) -> Fraction:
    return Fraction(value).limit_denominator(LOG_DENOMINATOR_LIMIT)


def awtp_capacity_bound(
    rho_r: Rational,
    rho_w: Rational,
    eps: Rational = 0,
    N: int = 1,
    alphabet_bits: Rational = 1,
) -> Fraction:
    """Upper bound on the ε-secrecy capacity.

    1 - ρ_r - ρ_w + 2 ε ρ_r N log_|Σ|(1 + 1/ε), with log_|Σ| x = log2(x) / alphabet_bits.
    For ε = 0 the bound is the exact perfect-secrecy value 1 - ρ_r - ρ_w; otherwise
    the logarithm is rounded to a rational with denominator at most 10**12.
    """
    rho_r, rho_w, eps = _fraction(rho_r), _fraction(rho_w), _fraction(eps)
    if rho_r < 0 or rho_w < 0 or eps < 0:
        raise ParamError("read/write fractions and ε must be non-negative")
    base = 1 - rho_r - rho_w
    if eps == 0:
        return base
    log_term = _log_fraction(math.log2(1 + 1 / eps)) / _fraction(alphabet_bits)
    return base + 2 * eps * rho_r * N * log_term


def awtp_capacity_bound_abstract(rho_r: Rational, rho_w: Rational, eps: Rational = 0) -> Fraction:
    """Variant with a 2 ε log2(1/ε) correction and no dependence on N or |Σ|."""
    rho_r, rho_w, eps = _fraction(rho_r), _fraction(rho_w), _fraction(eps)
    base = 1 - rho_r - rho_w
    if eps == 0:
        return base
    return base + 2 * eps * _log_fraction(math.log2(1 / eps))


def awtp_failure_bound(P: "AwtpParams") -> Fraction:
    """(l + 1) (d_1)^v / q^N: chance that a wrong list candidate passes the AMD check."""
    return Fraction((P.ell + 1) * P.ses.list_bound, P.q**P.N)


def awtp_information_rate(P: "AwtpParams") -> Fraction:
    """log_|Σ| |M| / N, which equals R."""
    return Fraction(P.message_length, P.u * P.N)


def alphabet_size(P: "AwtpParams") -> int:
    return P.q**P.u


@dataclass(frozen=True)
class FamilySchedule:
    xi: Fraction
    xi1: Fraction
    u: int
    v: int


def family_schedule(xi1: Rational) -> FamilySchedule:
    """Parameters ξ = 13 ξ_1, v = 1/ξ_1, u = 1/ξ_1^2 of the capacity-achieving family."""
    xi1 = _fraction(xi1)
    if not 0 < xi1 < Fraction(1, 26) or (1 / xi1).denominator != 1:
        raise ParamError(f"ξ_1={xi1} must be 1/v for an integer v > 26")
    v = int(1 / xi1)
    return FamilySchedule(13 * xi1, xi1, v * v, v)


@dataclass(frozen=True)
class ScheduleCheck:
    schedule: FamilySchedule
    rho_r: Fraction
    rho_w: Fraction
    R: Fraction
    max_rho_w: Fraction

    @property
    def holds(self) -> bool:
        return self.rho_w < self.max_rho_w


def schedule_check(xi1: Rational, rho_r: Rational, rho_w: Rational) -> ScheduleCheck:
    """With R = 1 - ρ_r - ρ_w - 12 ξ_1, confirm ρ_w stays below the rate condition at (u, v)."""
    schedule = family_schedule(xi1)
    rho_r, rho_w = _fraction(rho_r), _fraction(rho_w)
    R = 1 - rho_r - rho_w - 12 * schedule.xi1
    if R <= 0:
        raise ParamError(f"ρ_r + ρ_w = {rho_r + rho_w} leaves no positive rate at ξ_1={schedule.xi1}")
    max_rho_w = awtp_rate_condition(schedule.u, schedule.v, R, rho_r)
    return ScheduleCheck(schedule, rho_r, rho_w, R, max_rho_w)
