"""The composed wiretap code: AMD -> subspace-evasive encoding -> folded Reed–Solomon.

Encoding a message m of length uRN:
    1. pad m with zeros to lN symbols and split it into l blocks of N symbols;
    2. AMD-encode the blocks over F_{q^N} with coins r, giving (x, r, t);
    3. pad (x, r, t) with zeros to n1 symbols and map it onto the evasive set (s, length n);
    4. append the uniform coins a (length u ρ_r N) to get k polynomial coefficients;
    5. FRS-encode into N symbols of u field elements.
Decoding list-decodes the FRS word, intersects the projected list with the evasive
set and keeps the unique candidate that passes AMD verification.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Literal, Optional

import numpy as np

from ..errors import AwtpError, InfeasibleError, LengthMismatch, ParamError
from .amd import AmdCodeword, AmdParams, amd_encode, amd_verify
from .bounds import Rational, awtp_rate_condition
from .evasive import SesParams, ses_encode, ses_intersect, ses_inverse, ses_setup
from .field import AffineSpace, FieldArray, PrimeField, as_ints, ext_field, phi, phi_inv, prime_field
from .frs import FrsCodeword, FrsParams, frs_agreement_threshold, frs_encode, frs_list_decode

logger = logging.getLogger(__name__)

RateMode = Literal["permissive", "strict"]


def _integral(value: Fraction, name: str) -> int:
    if value.denominator != 1:
        raise ParamError(f"{name} = {value} must be an integer")
    return int(value)


@dataclass(frozen=True)
class AwtpParams:
    q: int
    u: int
    v: int
    N: int
    R: Fraction
    rho_r: Fraction
    rho_w: Fraction
    mode: RateMode = "permissive"

    @property
    def F(self) -> PrimeField:
        return prime_field(self.q)

    @property
    def w(self) -> int:
        return self.v * self.v

    @property
    def ell(self) -> int:
        return math.ceil(self.u * self.R)

    @property
    def b(self) -> int:
        return -(-(self.ell * self.N + 2 * self.N) // (self.w - self.v))

    @property
    def n1(self) -> int:
        return (self.w - self.v) * self.b

    @property
    def n(self) -> int:
        return self.w * self.b

    @property
    def coin_length(self) -> int:
        return int(self.u * self.rho_r * self.N)

    @property
    def k(self) -> int:
        return self.n + self.coin_length

    @property
    def message_length(self) -> int:
        return int(self.u * self.R * self.N)

    @property
    def amd_length(self) -> int:
        return (self.ell + 2) * self.N

    @property
    def reads_max(self) -> int:
        return int(self.rho_r * self.N)

    @property
    def writes_max(self) -> int:
        return int(self.rho_w * self.N)

    @cached_property
    def amd(self) -> AmdParams:
        return AmdParams(ext_field(self.F, self.N), self.ell)

    @cached_property
    def ses(self) -> SesParams:
        return ses_setup(self.q, self.v, self.n1)

    @cached_property
    def frs(self) -> FrsParams:
        return FrsParams(self.F, self.u, self.N, self.k, self.v)

    def as_dict(self) -> dict[str, str]:
        """Decimal-string form used by parameter files and reports."""
        return {
            "q": str(self.q),
            "u": str(self.u),
            "v": str(self.v),
            "N": str(self.N),
            "R": str(self.R),
            "rho_r": str(self.rho_r),
            "rho_w": str(self.rho_w),
            "mode": self.mode,
        }

    def derived(self) -> dict[str, int]:
        return {
            "w": self.w,
            "ell": self.ell,
            "b": self.b,
            "n1": self.n1,
            "n": self.n,
            "k": self.k,
            "message_length": self.message_length,
            "coin_length": self.coin_length,
            "reads_max": self.reads_max,
            "writes_max": self.writes_max,
        }


def awtp_derive_params(
    q: int,
    u: int,
    v: int,
    N: int,
    R: Rational,
    rho_r: Rational,
    rho_w: Rational,
    mode: RateMode = "permissive",
) -> AwtpParams:
    """Validate a parameter set and derive every quantity of the composed code."""
    R, rho_r, rho_w = Fraction(R), Fraction(rho_r), Fraction(rho_w)
    if mode not in ("permissive", "strict"):
        raise ParamError(f"unknown rate mode {mode!r}")
    if min(u, N) < 1 or v < 2 or v > u:
        raise ParamError(f"need u >= v >= 2 and N >= 1, got u={u}, v={v}, N={N}")
    if not 0 < R <= 1:
        raise ParamError(f"rate R={R} must lie in (0, 1]")
    for name, value in (("rho_r", rho_r), ("rho_w", rho_w)):
        if not 0 <= value <= 1:
            raise ParamError(f"{name}={value} must lie in [0, 1]")
    _integral(u * R * N, "uRN")
    _integral(rho_r * N, "rho_r*N")
    _integral(rho_w * N, "rho_w*N")
    F = prime_field(q)
    if F.q <= N * u:
        raise ParamError(f"q={q} must exceed N*u={N * u}")

    params = AwtpParams(q, u, v, N, R, rho_r, rho_w, mode)
    if (params.ell + 2) % q == 0:
        raise ParamError(f"ell + 2 = {params.ell + 2} is divisible by q={q}")
    if params.k > u * N:
        raise InfeasibleError(f"k = n + u*rho_r*N = {params.k} exceeds u*N = {u * N}")

    if mode == "strict":
        limit = awtp_rate_condition(u, v, R, rho_r)
        if not rho_w < limit:
            raise ParamError(f"rho_w={rho_w} violates the rate condition rho_w < {limit}")
    else:
        threshold = frs_agreement_threshold(params.frs)
        if not N - rho_w * N > threshold:
            raise ParamError(
                f"agreement N - rho_w*N = {N - rho_w * N} does not exceed the list-decoding "
                f"threshold {threshold} (~{float(threshold):.3f})"
            )

    # build the component codes now so that their constraints surface here
    params.amd, params.ses, params.frs
    logger.debug("derived parameters %s from %s", params.derived(), params.as_dict())
    return params


@dataclass(frozen=True, eq=False)
class EncodingCoins:
    r_amd: FieldArray
    a: FieldArray

    @classmethod
    def draw(cls, P: AwtpParams, rng: np.random.Generator) -> "EncodingCoins":
        return cls(P.F.random(P.N, rng), P.F.random(P.coin_length, rng))

    def check(self, P: AwtpParams) -> None:
        if self.r_amd.size != P.N or self.a.size != P.coin_length:
            raise LengthMismatch(
                f"coins must have lengths ({P.N}, {P.coin_length}), got ({self.r_amd.size}, {self.a.size})"
            )


def _blocks(values: FieldArray, P: AwtpParams) -> tuple:
    return tuple(phi(values[i * P.N : (i + 1) * P.N], P.amd.ext) for i in range(P.ell))


def awtp_inner_word(m, r_amd, P: AwtpParams) -> FieldArray:
    """The evasive-set point s carried by message m under AMD coins r."""
    GF = P.F.GF
    message = P.F(m).reshape(-1)
    if message.size != P.message_length:
        raise LengthMismatch(f"message has length {P.message_length}, got {message.size}")
    x = GF(np.concatenate([as_ints(message), np.zeros(P.ell * P.N - P.message_length, dtype=np.int64)]))
    codeword = amd_encode(_blocks(x, P), None, P.amd, r=phi(P.F(r_amd), P.amd.ext))
    padded = np.concatenate([as_ints(codeword.to_vector()), np.zeros(P.n1 - P.amd_length, dtype=np.int64)])
    return ses_encode(padded, P.ses)


def awtp_encode_word(s, coins: EncodingCoins, P: AwtpParams) -> FrsCodeword:
    """Folded codeword for an inner word s already computed by awtp_inner_word."""
    coins.check(P)
    coefficients = P.F.GF(np.concatenate([as_ints(s), as_ints(coins.a)]))
    return frs_encode(coefficients, P.frs)


def awtp_encode(m, coins: EncodingCoins, P: AwtpParams) -> FrsCodeword:
    return awtp_encode_word(awtp_inner_word(m, coins.r_amd, P), coins, P)


@dataclass
class DecodeResult:
    """Outcome of one decoding attempt with per-stage diagnostics."""

    message: Optional[FieldArray] = None
    reason: str = ""
    frs_dim: Optional[int] = None
    projected_dim: Optional[int] = None
    candidates: list[FieldArray] = field(default_factory=list)
    accepted: int = 0

    @property
    def ok(self) -> bool:
        return self.message is not None

    @property
    def status(self) -> str:
        return "ok" if self.ok else "bottom"


def _accept(s: FieldArray, P: AwtpParams) -> Optional[FieldArray]:
    inner = as_ints(ses_inverse(s, P.ses))
    if np.any(inner[P.amd_length :]):
        return None
    codeword = AmdCodeword.from_vector(inner[: P.amd_length], P.amd)
    blocks = amd_verify(codeword, P.amd)
    if blocks is None:
        return None
    x = np.concatenate([as_ints(phi_inv(block)) for block in blocks])
    if np.any(x[P.message_length :]):
        return None
    return P.F.GF(x[: P.message_length])


def awtp_decode_verbose(y, P: AwtpParams) -> DecodeResult:
    """Decode y to a unique message, recording why when the answer is ⊥.

    Malformed input (wrong shape, non-numeric symbols) is reported as ⊥, never raised.
    """
    result = DecodeResult()
    try:
        word = P.F(y)
        if word.shape != (P.N, P.u):
            result.reason = f"received word has shape {word.shape}, expected ({P.N}, {P.u})"
            logger.warning("decode returned bottom: %s", result.reason)
            return result

        space = frs_list_decode(word, P.frs)
        if space is None:
            result.reason = "no polynomial of degree < k explains the received word"
            logger.info("decode returned bottom: %s", result.reason)
            return result
        result.frs_dim = space.dim

        projected: AffineSpace = space.restrict(slice(0, P.n))
        result.projected_dim = projected.dim
        result.candidates = ses_intersect(P.ses, projected)
        logger.debug(
            "decode: frs dim %d, projected dim %d, %d evasive candidates",
            space.dim,
            projected.dim,
            len(result.candidates),
        )

        accepted = [m for m in (_accept(s, P) for s in result.candidates) if m is not None]
        result.accepted = len(accepted)
    except (AwtpError, ValueError, TypeError, ArithmeticError) as exc:
        result.reason = f"{type(exc).__name__}: {exc}"
        logger.warning("decode returned bottom: %s", result.reason)
        return result

    if len(accepted) == 1:
        result.message = accepted[0]
        return result
    result.reason = "no candidate passed verification" if not accepted else f"{len(accepted)} candidates passed verification"
    logger.info("decode returned bottom: %s", result.reason)
    return result


def awtp_decode(y, P: AwtpParams) -> Optional[FieldArray]:
    """The unique verified message, or None (⊥)."""
    return awtp_decode_verbose(y, P).message
