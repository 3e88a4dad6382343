"""Systematic algebraic manipulation detection code over F_{q^m}.

A message x = (x_1, ..., x_l) is stored as (x, r, t) with r uniform and
t = r^(l+2) + sum_i x_i r^i. Any fixed additive offset on (x, r, t) passes
verification for at most l + 1 values of r.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..errors import LengthMismatch, ParamError, ScaleError
from .field import ExtField, ExtFieldElement, FieldArray, as_ints, ext_field, phi, phi_inv, prime_field

logger = logging.getLogger(__name__)

EXHAUSTIVE_FIELD_LIMIT = 32
EXHAUSTIVE_WORK_LIMIT = 50_000_000


@dataclass(frozen=True)
class AmdParams:
    ext: ExtField
    ell: int

    def __post_init__(self) -> None:
        if self.ell < 1:
            raise ParamError(f"AMD needs at least one message block, got ell={self.ell}")
        if (self.ell + 2) % self.ext.q == 0:
            raise ParamError(f"ell + 2 = {self.ell + 2} is divisible by q = {self.ext.q}")

    @property
    def m(self) -> int:
        return self.ext.m

    @property
    def length(self) -> int:
        """Serialized length over F_q."""
        return (self.ell + 2) * self.ext.m

    @property
    def security_bound(self) -> Fraction:
        return Fraction(self.ell + 1, self.ext.size)


def amd_params(q: int, m: int, ell: int) -> AmdParams:
    return AmdParams(ext_field(prime_field(q), m), ell)


@dataclass(frozen=True)
class AmdCodeword:
    x: tuple[ExtFieldElement, ...]
    r: ExtFieldElement
    t: ExtFieldElement

    def to_vector(self) -> FieldArray:
        """x blocks in ascending order, then r, then t, each as m coordinates."""
        GF = self.r.field.base.GF
        parts = [as_ints(phi_inv(e)) for e in (*self.x, self.r, self.t)]
        return GF(np.concatenate(parts))

    @classmethod
    def from_vector(cls, vec, params: AmdParams) -> "AmdCodeword":
        values = as_ints(vec).reshape(-1)
        if values.size != params.length:
            raise LengthMismatch(f"AMD codeword has length {params.length}, got {values.size}")
        m = params.m
        chunks = [phi(values[i * m : (i + 1) * m], params.ext) for i in range(params.ell + 2)]
        return cls(tuple(chunks[: params.ell]), chunks[-2], chunks[-1])


def amd_tag(x: Sequence[ExtFieldElement], r: ExtFieldElement, params: AmdParams) -> ExtFieldElement:
    if len(x) != params.ell:
        raise LengthMismatch(f"expected {params.ell} message blocks, got {len(x)}")
    tag = r ** (params.ell + 2)
    power = r
    for block in x:
        tag = tag + block * power
        power = power * r
    return tag


def amd_encode(
    x: Sequence[ExtFieldElement],
    rng: Optional[np.random.Generator],
    params: AmdParams,
    *,
    r: Optional[ExtFieldElement] = None,
) -> AmdCodeword:
    """Encode x with fresh coins drawn from ``rng``, or with an explicit ``r``."""
    if r is None:
        if rng is None:
            raise ParamError("amd_encode needs either an rng or explicit coins")
        r = params.ext.random(rng)
    return AmdCodeword(tuple(x), r, amd_tag(x, r, params))


def amd_verify(c: AmdCodeword, params: AmdParams) -> Optional[tuple[ExtFieldElement, ...]]:
    """Return x when the tag matches, None otherwise."""
    if len(c.x) != params.ell:
        return None
    if amd_tag(c.x, c.r, params) == c.t:
        return c.x
    return None


def amd_apply_offset(c: AmdCodeword, delta: AmdCodeword) -> AmdCodeword:
    if len(c.x) != len(delta.x):
        raise LengthMismatch("offset and codeword have different block counts")
    return AmdCodeword(
        tuple(a + b for a, b in zip(c.x, delta.x)),
        c.r + delta.r,
        c.t + delta.t,
    )


@dataclass(frozen=True)
class AmdPassStatistics:
    """Worst case, over every x and nonzero offset, of the number of r that pass."""

    field_size: int
    ell: int
    max_pass: int
    witness_x: tuple[int, ...]
    witness_offset: tuple[int, ...]
    checks: int

    @property
    def probability(self) -> Fraction:
        return Fraction(self.max_pass, self.field_size)

    @property
    def bound(self) -> Fraction:
        return Fraction(self.ell + 1, self.field_size)

    @property
    def within_bound(self) -> bool:
        return self.probability <= self.bound


def _digits(total: int, base: int, width: int) -> np.ndarray:
    index = np.arange(total, dtype=np.int64)
    digits = np.empty((total, width), dtype=np.int64)
    for i in range(width):
        index, digits[:, i] = np.divmod(index, base)
    return digits


def amd_pass_statistics(params: AmdParams, work_limit: int = EXHAUSTIVE_WORK_LIMIT) -> AmdPassStatistics:
    """Enumerate x, every offset (dx, dr, dt) != 0 and every r using table lookups."""
    Q, ell = params.ext.size, params.ell
    if Q > EXHAUSTIVE_FIELD_LIMIT:
        raise ScaleError(f"exhaustive AMD check needs q^m <= {EXHAUSTIVE_FIELD_LIMIT}, got {Q}")
    work = Q ** (2 * ell + 3)
    if work > work_limit:
        raise ScaleError(f"exhaustive AMD check needs {work} evaluations, limit is {work_limit}")

    add, mul = params.ext.lookup_tables
    neg = np.argmax(add == 0, axis=1)
    one = params.ext.one().index
    r_all = np.arange(Q)

    powers = [np.full(Q, one, dtype=np.int64)]
    for _ in range(ell + 2):
        powers.append(mul[powers[-1], r_all])

    blocks = Q**ell
    x_digits = _digits(blocks, Q, ell)
    tags = np.tile(powers[ell + 2], (blocks, 1))
    for i in range(ell):
        tags = add[tags, mul[x_digits[:, i][:, None], powers[i + 1][None, :]]]

    weights = Q ** np.arange(ell)
    shifted_r = add[r_all[:, None], r_all[None, :]]  # [dr, r] -> r + dr
    best, witness_x, witness_offset = -1, (), ()
    for x in range(blocks):
        base = tags[x]
        moved = (add[x_digits[x][None, :], x_digits] * weights).sum(axis=1)
        for dx in range(blocks):
            shifted = tags[moved[dx]][shifted_r]
            # passes for offset dt exactly when dt = tag(x + dx, r + dr) - tag(x, r)
            diff = add[shifted, neg[base][None, :]]
            counts = np.bincount((r_all[:, None] * Q + diff).ravel(), minlength=Q * Q).reshape(Q, Q)
            if dx == 0:
                counts[0, 0] = 0
            dr, dt = np.unravel_index(int(np.argmax(counts)), counts.shape)
            if counts[dr, dt] > best:
                best = int(counts[dr, dt])
                witness_x = tuple(int(d) for d in x_digits[x])
                witness_offset = (*(int(d) for d in x_digits[dx]), int(dr), int(dt))

    logger.debug("AMD exhaustive check over Q=%d ell=%d: max pass %d", Q, ell, best)
    return AmdPassStatistics(Q, ell, best, witness_x, witness_offset, work)
