"""Explicit subspace-evasive set built from a product of small varieties.

Coordinates are cut into blocks of width w = v**2. A block x lies in the set when
    f_i(x) = sum_j A[i, j] * x_j ** d_j = 0    for i = 1..v,
with A strongly regular and v of the degrees invertible modulo q - 1. Those v
coordinates (J) are then determined by the remaining w - v free ones, which gives
an explicit bijection F_q^(w-v) -> block variety.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import DimensionError, LengthMismatch, ParamError, ScaleError
from .field import (
    AffineSpace,
    FieldArray,
    PrimeField,
    as_ints,
    coefficient_grid,
    fp_generator,
    inverse,
    matrix_rank,
    prime_field,
    solve_affine,
)

logger = logging.getLogger(__name__)

SesPoint = FieldArray


def _admissible_degrees(q: int, v: int, w: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Smallest w distinct degrees >= 2 containing v values coprime to q - 1.

    Returns the degrees in descending order and the positions of the v coprime
    degrees that determine a block.
    """
    cap = 4 * w + v**v
    invertible: list[int] = []
    others: list[int] = []
    for d in range(2, cap + 1):
        if len(invertible) < v and math.gcd(d, q - 1) == 1:
            invertible.append(d)
        else:
            others.append(d)
        if len(invertible) == v and len(others) >= w - v:
            break
    else:
        raise ParamError(f"no admissible degree set for q={q}, v={v} below {cap}")
    degrees = tuple(sorted(invertible + others[: w - v], reverse=True))
    determined = tuple(degrees.index(d) for d in invertible)
    return degrees, tuple(sorted(determined))


def is_strongly_regular(A: FieldArray, order: int) -> bool:
    """Every r x r minor of A, 1 <= r <= order, is nonsingular."""
    rows, cols = A.shape
    for r in range(1, order + 1):
        for row_set in itertools.combinations(range(rows), r):
            for col_set in itertools.combinations(range(cols), r):
                if matrix_rank(A[np.ix_(row_set, col_set)]) < r:
                    return False
    return True


@dataclass(frozen=True, eq=False)
class SesParams:
    F: PrimeField
    v: int
    w: int
    degrees: tuple[int, ...]
    J: tuple[int, ...]
    A: FieldArray
    blocks: int
    inverse_exponents: tuple[int, ...] = field(default=())

    @property
    def free(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.w) if j not in self.J)

    @property
    def n1(self) -> int:
        return (self.w - self.v) * self.blocks

    @property
    def n(self) -> int:
        return self.w * self.blocks

    @property
    def d1(self) -> int:
        return self.degrees[0]

    @property
    def list_bound(self) -> int:
        """Upper bound on |S ∩ H| for affine H of dimension <= v."""
        return self.d1**self.v

    @cached_property
    def A_J_inverse(self) -> FieldArray:
        return inverse(self.A[:, list(self.J)])


def ses_setup(q: int, v: int, n1: int) -> SesParams:
    F = prime_field(q)
    if v < 2:
        raise ParamError(f"v={v} must be >= 2")
    w = v * v
    if q <= w:
        raise ParamError(f"q={q} must exceed w={w} to give {w} distinct nonzero evaluation points")
    if n1 < 0 or n1 % (w - v) != 0:
        raise ParamError(f"n1={n1} is not a multiple of w - v = {w - v}")

    degrees, J = _admissible_degrees(q, v, w)
    g = fp_generator(F)
    gammas = F.GF([int(g**j) for j in range(w)])
    A = F.GF.Ones((v, w))
    A[0] = gammas
    for i in range(1, v):
        A[i] = A[i - 1] * gammas
    if not is_strongly_regular(A, v):
        raise ParamError(f"evaluation matrix over F_{q} is not strongly regular")

    inverse_exponents = tuple(pow(degrees[j], -1, q - 1) for j in J)
    params = SesParams(F, v, w, degrees, J, A, n1 // (w - v), inverse_exponents)
    logger.debug("subspace-evasive setup q=%d v=%d degrees=%s J=%s blocks=%d", q, v, degrees, J, params.blocks)
    return params


def _encode_rows(inputs: FieldArray, P: SesParams) -> FieldArray:
    """Map rows of free coordinates (rows x (w - v)) to full variety blocks (rows x w)."""
    GF = P.F.GF
    rows = inputs.shape[0]
    out = GF.Zeros((rows, P.w))
    free = list(P.free)
    out[:, free] = inputs
    rhs = GF.Zeros((rows, P.v))
    for position, j in enumerate(free):
        rhs = rhs - (inputs[:, position] ** P.degrees[j])[:, None] * P.A[:, j]
    y = rhs @ P.A_J_inverse.T
    for i, j in enumerate(P.J):
        out[:, j] = y[:, i] ** P.inverse_exponents[i]
    return out


def _power_mod(x: np.ndarray, e: int, q: int) -> np.ndarray:
    result = np.ones_like(x)
    base = x % q
    while e:
        if e & 1:
            result = result * base % q
        base = base * base % q
        e >>= 1
    return result


def _residuals(blocks: FieldArray, P: SesParams) -> np.ndarray:
    """f_i evaluated on every row (rows x v), as plain integers mod q."""
    q = P.F.q
    if q >= 1 << 31:
        GF = P.F.GF
        total = GF.Zeros((blocks.shape[0], P.v))
        for j in range(P.w):
            total = total + (blocks[:, j] ** P.degrees[j])[:, None] * P.A[:, j]
        return as_ints(total)
    x = as_ints(blocks)
    A = as_ints(P.A)
    total = np.zeros((x.shape[0], P.v), dtype=np.int64)
    for j in range(P.w):
        total = (total + _power_mod(x[:, j], P.degrees[j], q)[:, None] * A[:, j]) % q
    return total


def _on_variety(blocks: FieldArray, P: SesParams) -> np.ndarray:
    return ~np.any(_residuals(blocks, P) != 0, axis=1)


def ses_encode(vec, P: SesParams) -> SesPoint:
    values = P.F(vec).reshape(-1)
    if values.size != P.n1:
        raise ParamError(f"subspace-evasive input has length {P.n1}, got {values.size}")
    if P.blocks == 0:
        return P.F.GF.Zeros(0)
    return _encode_rows(values.reshape(P.blocks, P.w - P.v), P).reshape(-1)


def ses_encode_many(inputs, P: SesParams) -> FieldArray:
    """Row-wise ses_encode of an array of shape (rows, n1)."""
    values = P.F(inputs)
    if values.ndim != 2 or values.shape[1] != P.n1:
        raise ParamError(f"expected rows of length {P.n1}, got shape {values.shape}")
    rows = values.shape[0]
    if P.blocks == 0:
        return P.F.GF.Zeros((rows, 0))
    encoded = _encode_rows(values.reshape(rows * P.blocks, P.w - P.v), P)
    return encoded.reshape(rows, P.n)


def ses_inverse(s, P: SesParams) -> FieldArray:
    values = P.F(s).reshape(-1)
    if values.size != P.n:
        raise LengthMismatch(f"subspace-evasive point has length {P.n}, got {values.size}")
    return values.reshape(P.blocks, P.w)[:, list(P.free)].reshape(-1)


def ses_contains(P: SesParams, x) -> bool:
    values = P.F(x).reshape(-1)
    if values.size != P.n:
        return False
    if P.blocks == 0:
        return True
    return bool(np.all(_on_variety(values.reshape(P.blocks, P.w), P)))


def ses_contains_many(P: SesParams, X) -> np.ndarray:
    """Membership of every row of X (shape (rows, n))."""
    values = P.F(X)
    rows = values.shape[0]
    if P.blocks == 0:
        return np.ones(rows, dtype=bool)
    hits = _on_variety(values.reshape(rows * P.blocks, P.w), P)
    return hits.reshape(rows, P.blocks).all(axis=1)


def _block_solutions(image: AffineSpace, P: SesParams, chunk: int) -> list[FieldArray]:
    found = []
    for candidates in image.points(chunk):
        hits = _on_variety(candidates, P)
        found.extend(candidates[i] for i in np.flatnonzero(hits))
    return found


def ses_intersect(P: SesParams, H: AffineSpace, chunk: int = 1 << 15) -> list[SesPoint]:
    """All points of S inside the affine space H, found block by block.

    The parametrization of H is substituted into one block at a time: every value
    the block can take inside H is tested against the block variety, and each
    surviving value pins down an affine slice of the parameters that is carried to
    the next block.
    """
    if H.ambient != P.n:
        raise LengthMismatch(f"affine space lives in F_q^{H.ambient}, expected F_q^{P.n}")
    H = H.reduced()
    if H.dim > P.v:
        raise DimensionError(f"affine space has dimension {H.dim} > v = {P.v}")

    states = [H]
    for t in range(P.blocks):
        rows = slice(t * P.w, (t + 1) * P.w)
        next_states: list[AffineSpace] = []
        for state in states:
            L, c0 = state.M[rows], state.z[rows]
            for block in _block_solutions(state.restrict(rows), P, chunk):
                if state.dim == 0:
                    next_states.append(state)
                    continue
                params = solve_affine(L, block - c0)
                if params is None:
                    continue
                if params.dim == 0:
                    next_states.append(AffineSpace.point(state.at(params.z)))
                else:
                    next_states.append(AffineSpace(state.M @ params.M, state.at(params.z)).reduced())
        states = next_states
        logger.debug("block %d: %d parameter slices remain", t, len(states))
        if not states:
            return []

    seen: dict[tuple[int, ...], SesPoint] = {}
    for state in states:
        if state.dim != 0:
            # not reached for a reduced H, whose columns are independent
            for point_chunk in state.points(chunk):
                for point in point_chunk:
                    seen.setdefault(tuple(as_ints(point).tolist()), point)
            continue
        seen.setdefault(tuple(as_ints(state.z).tolist()), state.z)
    return list(seen.values())


def ses_points(P: SesParams, cap: int = 1_000_000) -> tuple[FieldArray, FieldArray]:
    """Enumerate S: every input of length n1 (rows, little-endian digit order) and its point."""
    size = P.F.q**P.n1
    if size > cap:
        raise ScaleError(f"|S| = {size} exceeds the enumeration cap {cap}")
    inputs = P.F.GF(next(coefficient_grid(P.F.q, P.n1, chunk=size)))
    return inputs, ses_encode_many(inputs, P)


def ses_intersect_oracle(P: SesParams, H: AffineSpace, cap: int = 1_000_000) -> list[SesPoint]:
    _, points = ses_points(P, cap)
    return [points[i] for i in np.flatnonzero(H.contains_many(points))]
