"""Prime fields, extension fields and dense linear algebra over F_q.

Vectors and matrices are ``galois.FieldArray`` instances of the prime field; the
elimination kernel works on their integer view with widening (int64) products,
so q is expected to stay below 2**31 for the fast path.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Literal, Sequence, Union

import galois
import numpy as np

from ..errors import ContextMismatch, FieldError, LengthMismatch, ParamError, ZeroInverse

logger = logging.getLogger(__name__)

FieldArray = galois.FieldArray


def as_ints(values) -> np.ndarray:
    """Plain integer copy of a FieldArray (or anything array-like)."""
    array = np.asarray(values)
    if isinstance(array, galois.FieldArray):
        array = array.view(np.ndarray)
    return np.array(array, dtype=np.int64)


@dataclass(frozen=True)
class PrimeField:
    """F_q for prime q, wrapping the cached ``galois.GF(q)`` array class."""

    q: int

    def __post_init__(self) -> None:
        if self.q < 2 or not galois.is_prime(self.q):
            raise ParamError(f"q={self.q} is not prime")

    @cached_property
    def GF(self) -> type[galois.FieldArray]:
        return galois.GF(self.q)

    def __call__(self, values) -> FieldArray:
        return self.GF(np.mod(as_ints(values), self.q))

    def zeros(self, shape) -> FieldArray:
        return self.GF.Zeros(shape)

    def random(self, shape, rng: np.random.Generator) -> FieldArray:
        return self.GF(rng.integers(0, self.q, size=shape))

    def random_nonzero(self, shape, rng: np.random.Generator) -> FieldArray:
        return self.GF(rng.integers(1, self.q, size=shape))


@lru_cache(maxsize=None)
def prime_field(q: int) -> PrimeField:
    return PrimeField(q)


def fp_inv(a, F: PrimeField) -> FieldArray:
    value = int(a) % F.q
    if value == 0:
        raise ZeroInverse("0 has no multiplicative inverse")
    return F.GF(pow(value, -1, F.q))


@lru_cache(maxsize=None)
def _smallest_primitive_root(q: int) -> int:
    if q == 2:
        return 1
    return int(galois.primitive_root(q, method="min"))


def fp_generator(F: PrimeField) -> FieldArray:
    """Smallest generator of F_q^*."""
    return F.GF(_smallest_primitive_root(F.q))


def find_irreducible(F: PrimeField, m: int) -> galois.Poly:
    """Lexicographically smallest monic irreducible polynomial of degree m."""
    if m < 1:
        raise ParamError(f"extension degree m={m} must be >= 1")
    if m == 1:
        return galois.Poly([1, 0], field=F.GF)
    poly = galois.irreducible_poly(F.q, m, method="min")
    return galois.Poly(as_ints(poly.coeffs), field=F.GF)


def _poly_to_coeffs(poly: galois.Poly, m: int) -> tuple[int, ...]:
    ascending = as_ints(poly.coeffs)[::-1]
    coeffs = [0] * m
    for i, c in enumerate(ascending[:m]):
        coeffs[i] = int(c)
    return tuple(coeffs)


@dataclass(frozen=True)
class ExtField:
    """F_{q^m} = F_q[X]/(modulus); ``modulus`` holds ascending coefficients, monic."""

    base: PrimeField
    m: int
    modulus: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.modulus) != self.m + 1 or self.modulus[-1] != 1:
            raise ParamError(f"modulus must be monic of degree {self.m}")
        if self.m > 1 and not self.modulus_poly.is_irreducible():
            raise ParamError(f"modulus {self.modulus_poly} is reducible over F_{self.base.q}")

    @cached_property
    def modulus_poly(self) -> galois.Poly:
        return galois.Poly(list(self.modulus), field=self.base.GF, order="asc")

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def size(self) -> int:
        return self.q**self.m

    def element(self, coeffs: Sequence[int]) -> "ExtFieldElement":
        if len(coeffs) != self.m:
            raise LengthMismatch(f"expected {self.m} coefficients, got {len(coeffs)}")
        return ExtFieldElement(self, tuple(int(c) % self.q for c in coeffs))

    def zero(self) -> "ExtFieldElement":
        return ExtFieldElement(self, (0,) * self.m)

    def one(self) -> "ExtFieldElement":
        return ExtFieldElement(self, (1,) + (0,) * (self.m - 1))

    def random(self, rng: np.random.Generator) -> "ExtFieldElement":
        return self.element(rng.integers(0, self.q, size=self.m).tolist())

    def from_index(self, index: int) -> "ExtFieldElement":
        coeffs = []
        for _ in range(self.m):
            index, digit = divmod(index, self.q)
            coeffs.append(digit)
        return ExtFieldElement(self, tuple(coeffs))

    def elements(self) -> Iterator["ExtFieldElement"]:
        for index in range(self.size):
            yield self.from_index(index)

    @cached_property
    def lookup_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Addition and multiplication tables indexed by ``ExtFieldElement.index``."""
        if self.size > 1024:
            raise ParamError(f"lookup tables limited to fields of size <= 1024, got {self.size}")
        elements = list(self.elements())
        add = np.empty((self.size, self.size), dtype=np.int64)
        mul = np.empty((self.size, self.size), dtype=np.int64)
        for i, a in enumerate(elements):
            for j, b in enumerate(elements[i:], start=i):
                add[i, j] = add[j, i] = (a + b).index
                mul[i, j] = mul[j, i] = (a * b).index
        return add, mul


@lru_cache(maxsize=None)
def ext_field(F: PrimeField, m: int) -> ExtField:
    return ExtField(F, m, _poly_to_coeffs(find_irreducible(F, m), m + 1))


@dataclass(frozen=True)
class ExtFieldElement:
    field: ExtField
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.field.m:
            raise LengthMismatch(f"expected {self.field.m} coefficients, got {len(self.coeffs)}")

    @property
    def poly(self) -> galois.Poly:
        return galois.Poly(list(self.coeffs), field=self.field.base.GF, order="asc")

    @property
    def index(self) -> int:
        value = 0
        for c in reversed(self.coeffs):
            value = value * self.field.q + c
        return value

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def vector(self) -> FieldArray:
        return self.field.base.GF(list(self.coeffs))

    def _same_field(self, other: "ExtFieldElement") -> None:
        if not isinstance(other, ExtFieldElement) or other.field != self.field:
            raise ContextMismatch("operands belong to different extension fields")

    def __add__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        self._same_field(other)
        q = self.field.q
        return ExtFieldElement(self.field, tuple((a + b) % q for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        return self + (-other)

    def __neg__(self) -> "ExtFieldElement":
        q = self.field.q
        return ExtFieldElement(self.field, tuple((-a) % q for a in self.coeffs))

    def __mul__(self, other: "ExtFieldElement") -> "ExtFieldElement":
        self._same_field(other)
        if self.is_zero() or other.is_zero():
            return self.field.zero()
        product = (self.poly * other.poly) % self.field.modulus_poly
        return ExtFieldElement(self.field, _poly_to_coeffs(product, self.field.m))

    def __pow__(self, exponent: int) -> "ExtFieldElement":
        if exponent < 0:
            raise FieldError("negative exponents are not supported")
        if exponent == 0:
            return self.field.one()
        if self.is_zero():
            return self.field.zero()
        result = pow(self.poly, exponent, self.field.modulus_poly)
        return ExtFieldElement(self.field, _poly_to_coeffs(result, self.field.m))


def ext_arith(
    a: ExtFieldElement,
    b: Union[ExtFieldElement, int],
    op: Literal["add", "mul", "pow"],
) -> ExtFieldElement:
    if op == "add":
        return a + b  # type: ignore[operator]
    if op == "mul":
        return a * b  # type: ignore[operator]
    if op == "pow":
        if isinstance(b, ExtFieldElement):
            raise ContextMismatch("pow takes an integer exponent")
        return a**b
    raise ValueError(f"unknown operation {op!r}")


def phi(vec, E: ExtField) -> ExtFieldElement:
    """Map a length-m vector to F_{q^m}; vec[i] is the coefficient of X^i."""
    values = as_ints(vec).reshape(-1)
    if values.size != E.m:
        raise LengthMismatch(f"phi expects a vector of length {E.m}, got {values.size}")
    return E.element(values.tolist())


def phi_inv(element: ExtFieldElement) -> FieldArray:
    return element.vector()


# --- linear algebra -------------------------------------------------------------------------


def _rref(a: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    a = a.copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = np.flatnonzero(a[r:, c])
        if candidates.size == 0:
            continue
        p = r + int(candidates[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        inv = pow(int(a[r, c]), -1, q)
        a[r, c:] = (a[r, c:] * inv) % q
        column = a[:, c].copy()
        column[r] = 0
        hit = np.flatnonzero(column)
        if hit.size:
            a[hit, c:] = (a[hit, c:] - np.outer(column[hit], a[r, c:])) % q
        pivots.append(c)
        r += 1
    return a, pivots


def row_reduce(A: FieldArray) -> tuple[FieldArray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    GF = type(A)
    reduced, pivots = _rref(as_ints(A), GF.order)
    return GF(reduced), pivots


def matrix_rank(A: FieldArray) -> int:
    if A.size == 0:
        return 0
    return len(_rref(as_ints(A), type(A).order)[1])


def inverse(A: FieldArray) -> FieldArray:
    GF = type(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise LengthMismatch(f"cannot invert a {A.shape} matrix")
    augmented = np.hstack([as_ints(A), np.eye(n, dtype=np.int64)])
    reduced, pivots = _rref(augmented, GF.order)
    if pivots[:n] != list(range(n)):
        raise FieldError("matrix is singular")
    return GF(reduced[:, n:])


def vandermonde(points: FieldArray, ncols: int) -> FieldArray:
    """V[i, j] = points[i] ** j."""
    GF = type(points)
    V = GF.Ones((points.shape[0], ncols))
    for j in range(1, ncols):
        V[:, j] = V[:, j - 1] * points
    return V


def coefficient_grid(q: int, d: int, chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    """All vectors of {0..q-1}^d in lexicographic chunks, as int arrays of shape (n, d)."""
    total = q**d
    for start in range(0, total, chunk):
        index = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = np.empty((index.size, d), dtype=np.int64)
        for i in range(d):
            index, digits[:, i] = np.divmod(index, q)
        yield digits


@dataclass(frozen=True, eq=False)
class AffineSpace:
    """{M b + z : b in F_q^d} with M a k x d matrix."""

    M: FieldArray
    z: FieldArray

    def __post_init__(self) -> None:
        if self.M.ndim != 2 or self.M.shape[0] != self.z.shape[0]:
            raise LengthMismatch(f"M {self.M.shape} does not match z {self.z.shape}")

    @classmethod
    def point(cls, z: FieldArray) -> "AffineSpace":
        return cls(type(z).Zeros((z.shape[0], 0)), z)

    @classmethod
    def full(cls, GF: type[galois.FieldArray], k: int) -> "AffineSpace":
        return cls(GF.Identity(k), GF.Zeros(k))

    @property
    def GF(self) -> type[galois.FieldArray]:
        return type(self.z)

    @property
    def dim(self) -> int:
        return self.M.shape[1]

    @property
    def ambient(self) -> int:
        return self.z.shape[0]

    @cached_property
    def _basis(self) -> tuple[FieldArray, list[int]]:
        if self.dim == 0:
            return self.GF.Zeros((0, self.ambient)), []
        reduced, pivots = row_reduce(self.M.T)
        return reduced[: len(pivots)], pivots

    def reduced(self) -> "AffineSpace":
        """Canonical form: basis columns in reduced echelon form, z zero on the pivots."""
        basis, pivots = self._basis
        if not pivots:
            return AffineSpace.point(self.z.copy())
        z = self.z - self.z[pivots] @ basis
        return AffineSpace(basis.T.copy(), z)

    def restrict(self, rows) -> "AffineSpace":
        """Projection onto the selected coordinates, re-reduced."""
        return AffineSpace(self.M[rows], self.z[rows]).reduced()

    def at(self, b) -> FieldArray:
        if self.dim == 0:
            return self.z.copy()
        return self.M @ self.GF(as_ints(b)) + self.z

    def contains_many(self, X: FieldArray) -> np.ndarray:
        X = self.GF(as_ints(X)).reshape(-1, self.ambient)
        residual = X - self.z
        basis, pivots = self._basis
        if pivots:
            residual = residual - residual[:, pivots] @ basis
        return ~np.any(as_ints(residual) != 0, axis=1)

    def contains(self, x) -> bool:
        return bool(self.contains_many(self.GF(as_ints(x)).reshape(1, -1))[0])

    def points(self, chunk: int = 1 << 16) -> Iterator[FieldArray]:
        """Enumerate all q**dim points in chunks of shape (n, ambient)."""
        if self.dim == 0:
            yield self.z.reshape(1, -1).copy()
            return
        for digits in coefficient_grid(self.GF.order, self.dim, chunk):
            yield self.GF(digits) @ self.M.T + self.z

    def same_as(self, other: "AffineSpace") -> bool:
        a, b = self.reduced(), other.reduced()
        return (
            a.M.shape == b.M.shape
            and np.array_equal(as_ints(a.M), as_ints(b.M))
            and np.array_equal(as_ints(a.z), as_ints(b.z))
        )


def solve_affine(A: FieldArray, b: FieldArray) -> AffineSpace | None:
    """Solution set of A x = b as a reduced AffineSpace, or None when inconsistent."""
    GF = type(A)
    q = GF.order
    rows, cols = A.shape
    if as_ints(b).reshape(-1).shape[0] != rows:
        raise LengthMismatch(f"A has {rows} rows but b has length {np.size(b)}")
    augmented = np.hstack([as_ints(A), as_ints(b).reshape(-1, 1)])
    reduced, pivots = _rref(augmented, q)
    if pivots and pivots[-1] == cols:
        return None
    x0 = np.zeros(cols, dtype=np.int64)
    x0[pivots] = reduced[: len(pivots), cols]
    free = [j for j in range(cols) if j not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    if free:
        basis[free, np.arange(len(free))] = 1
        if pivots:
            basis[pivots, :] = (-reduced[: len(pivots)][:, free]) % q
    return AffineSpace(GF(basis), GF(x0)).reduced()


def nullspace(A: FieldArray) -> FieldArray:
    """Column basis (cols x d) of {x : A x = 0}."""
    space = solve_affine(A, type(A).Zeros(A.shape[0]))
    assert space is not None
    return space.M
