"""Folded Reed–Solomon codes with a linear-algebraic list decoder.

A message f = (f_0, ..., f_{k-1}) is the polynomial f(X) = sum f_i X^i. Symbol j
of the codeword is the u-tuple (f(γ^{ju}), ..., f(γ^{ju+u-1})) for a generator γ
of F_q^*. Decoding interpolates Q(X, Y_1..Y_v) = A_0(X) + sum_i A_i(X) Y_i through
every window of v consecutive values inside a symbol, then solves
Q(X, f(X), f(γX), ..., f(γ^{v-1}X)) = 0 for f, which is an affine space of
dimension at most v - 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

import galois
import numpy as np

from ..errors import DegenerateError, InfeasibleError, InternalError, LengthMismatch, ParamError
from .field import (
    AffineSpace,
    FieldArray,
    PrimeField,
    as_ints,
    fp_generator,
    nullspace,
    prime_field,
    solve_affine,
    vandermonde,
)

logger = logging.getLogger(__name__)

FrsCodeword = FieldArray


@dataclass(frozen=True, eq=False)
class FrsParams:
    F: PrimeField
    u: int
    N: int
    k: int
    v: int

    def __post_init__(self) -> None:
        if self.F.q <= self.N * self.u:
            raise ParamError(f"q={self.F.q} must exceed N*u={self.N * self.u}")
        if not 1 <= self.v <= self.u:
            raise ParamError(f"interpolation parameter v={self.v} must lie in [1, u={self.u}]")
        if self.k < 1:
            raise ParamError(f"message length k={self.k} must be positive")
        if self.k > self.u * self.N:
            raise InfeasibleError(f"k={self.k} exceeds u*N={self.u * self.N}")

    @cached_property
    def gamma(self) -> FieldArray:
        return fp_generator(self.F)

    @cached_property
    def points(self) -> FieldArray:
        """γ^0, ..., γ^{uN-1}."""
        return vandermonde(self.gamma.reshape(1), self.u * self.N).reshape(-1)

    @cached_property
    def generator_matrix(self) -> FieldArray:
        return vandermonde(self.points, self.k)

    @property
    def n0(self) -> int:
        """Number of interpolation constraints."""
        return self.N * (self.u - self.v + 1)


def frs_params(q: int, u: int, N: int, k: int, v: int) -> FrsParams:
    return FrsParams(prime_field(q), u, N, k, v)


def frs_encode(f, P: FrsParams) -> FrsCodeword:
    coeffs = P.F(f).reshape(-1)
    if coeffs.size != P.k:
        raise LengthMismatch(f"message polynomial has {P.k} coefficients, got {coeffs.size}")
    return (P.generator_matrix @ coeffs).reshape(P.N, P.u)


def frs_unfold(c: FrsCodeword) -> FieldArray:
    """The underlying Reed–Solomon evaluation vector of length uN."""
    return c.reshape(-1)


def frs_choose_D(P: FrsParams) -> int:
    """Smallest D with more interpolation unknowns than constraints."""
    v, k, n0 = P.v, P.k, P.n0
    D = max(0, (n0 - v - k) // (v + 1) + 1)
    assert (v + 1) * D + v + k > n0
    assert D == 0 or (v + 1) * (D - 1) + v + k <= n0
    if D + k - 1 >= n0:
        raise InfeasibleError(f"degree budget D+k-1={D + k - 1} leaves no room below n0={n0} constraints")
    return D


@dataclass(frozen=True, eq=False)
class InterpolationPoly:
    """Q = A_0(X) + sum_i A_i(X) Y_i with deg A_0 <= D + k - 1 and deg A_i <= D."""

    a0: FieldArray
    a: FieldArray
    D: int

    @property
    def v(self) -> int:
        return self.a.shape[0]

    @property
    def vector(self) -> FieldArray:
        GF = type(self.a0)
        return GF(np.concatenate([as_ints(self.a0), as_ints(self.a).reshape(-1)]))

    def is_zero(self) -> bool:
        return not (np.any(as_ints(self.a0)) or np.any(as_ints(self.a)))

    def evaluate(self, x: FieldArray, ys: FieldArray) -> FieldArray:
        """Q at points x (shape (n,)) with Y-values ys (shape (n, v))."""
        GF = type(self.a0)
        total = galois.Poly(self.a0, order="asc")(x)
        for i in range(self.v):
            total = total + galois.Poly(self.a[i], order="asc")(x) * GF(ys[:, i])
        return total

    def composed(self, f: FieldArray, gamma: FieldArray) -> galois.Poly:
        """Q(X, f(X), f(γX), ..., f(γ^{v-1}X)) as a polynomial in X."""
        GF = type(self.a0)
        step = vandermonde(gamma.reshape(1), f.size).reshape(-1)
        scale = GF.Ones(f.size)
        result = galois.Poly(self.a0, order="asc")
        for i in range(self.v):
            shifted = galois.Poly(f * scale, order="asc")
            result = result + galois.Poly(self.a[i], order="asc") * shifted
            scale = scale * step
        return result


def interpolation_points(y: FrsCodeword, P: FrsParams) -> tuple[FieldArray, FieldArray]:
    """The n0 points (x, y_t, ..., y_{t+v-1}) one interpolation constraint is imposed at."""
    windows = P.u - P.v + 1
    index = (np.arange(P.N)[:, None] * P.u + np.arange(windows)[None, :]).reshape(-1)
    xs = P.points[index]
    ys = P.F.GF(np.stack([as_ints(y).reshape(-1)[index + i] for i in range(P.v)], axis=1))
    return xs, ys


def interpolation_matrix(y: FrsCodeword, P: FrsParams, D: int) -> FieldArray:
    """n0 x ((v+1)D + v + k) system whose nullspace holds the interpolation polynomials."""
    xs, ys = interpolation_points(y, P)
    powers = vandermonde(xs, D + P.k)
    low = powers[:, : D + 1]
    parts = [as_ints(powers)] + [as_ints(ys[:, i][:, None] * low) for i in range(P.v)]
    return P.F.GF(np.hstack(parts))


def frs_interpolate(y: FrsCodeword, P: FrsParams, D: Optional[int] = None) -> InterpolationPoly:
    y = P.F(y)
    if y.shape != (P.N, P.u):
        raise LengthMismatch(f"received word must have shape ({P.N}, {P.u}), got {y.shape}")
    if D is None:
        D = frs_choose_D(P)
    basis = nullspace(interpolation_matrix(y, P, D))
    if basis.shape[1] == 0:
        raise InternalError("interpolation system has only the trivial solution")
    solution = basis[:, 0]
    width = D + P.k
    return InterpolationPoly(solution[:width].copy(), solution[width:].reshape(P.v, D + 1).copy(), D)


def _valuation(coeffs: np.ndarray) -> int:
    nonzero = np.flatnonzero(coeffs)
    return int(nonzero[0]) if nonzero.size else coeffs.shape[-1]


def frs_solve_message_space(Q: InterpolationPoly, P: FrsParams) -> Optional[AffineSpace]:
    """Every f of degree < k with Q(X, f(X), ..., f(γ^{v-1}X)) ≡ 0, or None if there is none.

    Matching the coefficient of X^s gives
        A_0[s] + sum_{l} B_{s-l}(γ^l) f_l = 0,    B_r(Y) = sum_i A_i[r] Y^{i-1},
    a lower-triangular system with diagonal B_0(γ^s). It is solved by forward
    substitution; an f_s with a vanishing diagonal becomes a free parameter and its
    equation a linear constraint on the parameters.
    """
    q, k = P.F.q, P.k
    a0 = as_ints(Q.a0)
    a = as_ints(Q.a)
    D = Q.D

    shift = min(_valuation(row) for row in a)
    if shift > D:
        raise DegenerateError("interpolation polynomial has no Y terms")
    if _valuation(a0) < shift:
        logger.debug("A_0 has lower X-valuation than every A_i: no message fits")
        return None
    if shift:
        a = np.hstack([a[:, shift:], np.zeros((Q.v, shift), dtype=np.int64)])
        a0 = np.concatenate([a0[shift:], np.zeros(shift, dtype=np.int64)])

    # B[r, l] = B_r(γ^l)
    G = as_ints(vandermonde(P.points[: Q.v], k))
    B = (a.T @ G) % q

    width = 1 + k
    E = np.zeros((k, width), dtype=np.int64)
    params = 0
    constraints: list[np.ndarray] = []
    for s in range(D + k):
        lo = max(0, s - D)
        ls = np.arange(lo, min(s, k))
        acc = np.zeros(width, dtype=np.int64)
        acc[0] = a0[s] if s < a0.size else 0
        if ls.size:
            acc = (acc + (B[s - ls, ls][:, None] * E[ls]).sum(axis=0)) % q
        if s >= k:
            constraints.append(acc)
            continue
        diagonal = int(B[0, s])
        if diagonal:
            E[s] = (-acc * pow(diagonal, -1, q)) % q
        else:
            params += 1
            E[s, params] = 1
            constraints.append(acc)

    GF = P.F.GF
    E = E[:, : 1 + params]
    C = np.array(constraints, dtype=np.int64).reshape(-1, width)[:, : 1 + params]
    if params == 0:
        if np.any(C[:, 0] % q):
            return None
        return AffineSpace.point(GF(E[:, 0]))

    space = solve_affine(GF(C[:, 1:]), GF((-C[:, 0]) % q))
    if space is None:
        return None
    lift = GF(E[:, 1:])
    offset = GF(E[:, 0]) + (lift @ space.z)
    if space.dim == 0:
        return AffineSpace.point(offset)
    return AffineSpace(lift @ space.M, offset).reduced()


def frs_list_decode(y: FrsCodeword, P: FrsParams) -> Optional[AffineSpace]:
    """Affine space containing every message whose codeword agrees with y above the threshold."""
    D = frs_choose_D(P)
    Q = frs_interpolate(y, P, D)
    space = frs_solve_message_space(Q, P)
    if space is not None and space.dim > P.v - 1:
        raise InternalError(f"list-decoding space has dimension {space.dim} > v - 1 = {P.v - 1}")
    return space


def frs_agreement_threshold(P: FrsParams) -> Fraction:
    """Agreement (in symbols) above which the list contains the transmitted message."""
    rate = Fraction(P.k, P.N)
    return P.N * (Fraction(1, P.v + 1) + Fraction(P.v, P.v + 1) * rate / (P.u - P.v + 1))


def frs_agreement(c: FrsCodeword, y: FrsCodeword) -> int:
    """Number of symbols on which c and y coincide."""
    return int(np.sum(np.all(as_ints(c) == as_ints(y), axis=1)))
