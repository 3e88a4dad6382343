"""Tests for prime/extension field arithmetic and linear algebra over F_q."""

import numpy as np
import pytest

from awtp.codes.field import (
    AffineSpace,
    as_ints,
    coefficient_grid,
    ext_arith,
    ext_field,
    find_irreducible,
    fp_generator,
    fp_inv,
    inverse,
    matrix_rank,
    nullspace,
    phi,
    phi_inv,
    prime_field,
    row_reduce,
    solve_affine,
    vandermonde,
)
from awtp.errors import ContextMismatch, FieldError, LengthMismatch, ParamError, ZeroInverse


class TestPrimeField:
    def test_rejects_composite_order(self):
        with pytest.raises(ParamError):
            prime_field(15)

    def test_call_reduces_modulo_q(self, F13):
        assert as_ints(F13([13, 14, -1])).tolist() == [0, 1, 12]

    def test_inverse(self, F13):
        assert int(fp_inv(3, F13)) == 9
        assert int(fp_inv(16, F13)) == 9

    def test_zero_has_no_inverse(self, F13):
        with pytest.raises(ZeroInverse):
            fp_inv(0, F13)
        with pytest.raises(ZeroDivisionError):
            fp_inv(26, F13)

    def test_generator_is_smallest_primitive_root(self):
        assert int(fp_generator(prime_field(13))) == 2
        assert int(fp_generator(prime_field(11))) == 2
        assert int(fp_generator(prime_field(2))) == 1

    def test_generator_spans_the_multiplicative_group(self):
        F = prime_field(241)
        g = int(fp_generator(F))
        assert len({pow(g, i, 241) for i in range(240)}) == 240

    def test_random_stays_in_range(self, F13, rng):
        values = as_ints(F13.random((50,), rng))
        assert values.min() >= 0 and values.max() < 13
        assert np.all(as_ints(F13.random_nonzero((50,), rng)) != 0)


class TestExtensionField:
    def test_degree_one_is_the_prime_field(self):
        assert find_irreducible(prime_field(5), 1).degree == 1

    def test_gf4_modulus(self):
        E = ext_field(prime_field(2), 2)
        assert E.modulus == (1, 1, 1)
        assert E.size == 4

    def test_gf4_multiplication(self):
        E = ext_field(prime_field(2), 2)
        X = E.element([0, 1])
        assert (X * X).coeffs == (1, 1)
        assert (X**3) == E.one()

    def test_nonzero_elements_have_order_dividing_group_size(self):
        E = ext_field(prime_field(5), 2)
        for element in E.elements():
            if not element.is_zero():
                assert element ** (E.size - 1) == E.one()

    def test_additive_inverse(self):
        E = ext_field(prime_field(7), 3)
        a = E.element([3, 5, 6])
        assert (a + (-a)).is_zero()
        assert (a - a).is_zero()

    def test_index_round_trip(self):
        E = ext_field(prime_field(3), 3)
        assert [E.from_index(i).index for i in range(E.size)] == list(range(E.size))

    def test_operands_from_different_fields(self):
        a = ext_field(prime_field(5), 2).one()
        b = ext_field(prime_field(7), 2).one()
        with pytest.raises(ContextMismatch):
            _ = a + b
        with pytest.raises(ContextMismatch):
            ext_arith(a, a, "pow")

    def test_negative_exponent(self):
        E = ext_field(prime_field(5), 2)
        with pytest.raises(FieldError):
            _ = E.one() ** -1

    def test_ext_arith_dispatch(self):
        E = ext_field(prime_field(5), 2)
        a, b = E.element([1, 2]), E.element([3, 4])
        assert ext_arith(a, b, "add") == a + b
        assert ext_arith(a, b, "mul") == a * b
        assert ext_arith(a, 3, "pow") == a * a * a

    def test_reducible_modulus_is_rejected(self):
        from awtp.codes.field import ExtField

        with pytest.raises(ParamError):
            ExtField(prime_field(5), 2, (4, 0, 1))  # X^2 - 1

    def test_phi_round_trip(self):
        E = ext_field(prime_field(11), 4)
        vec = prime_field(11)([1, 0, 7, 3])
        assert as_ints(phi_inv(phi(vec, E))).tolist() == [1, 0, 7, 3]
        with pytest.raises(LengthMismatch):
            phi(vec[:3], E)

    def test_lookup_tables_match_arithmetic(self):
        E = ext_field(prime_field(3), 2)
        add, mul = E.lookup_tables
        a, b = E.from_index(5), E.from_index(7)
        assert add[5, 7] == (a + b).index
        assert mul[5, 7] == (a * b).index
        assert np.all(mul[0] == 0)

    @pytest.mark.property
    def test_ext_arith_obeys_field_laws(self):
        from hypothesis import given, settings, strategies as st

        E = ext_field(prime_field(11), 4)
        coeffs = st.lists(st.integers(0, 10), min_size=4, max_size=4)

        @settings(max_examples=60, deadline=None)
        @given(coeffs, coeffs, coeffs, st.integers(0, 30), st.integers(0, 30))
        def check(x, y, z, m, n):
            a, b, c = E.element(x), E.element(y), E.element(z)
            assert ext_arith(ext_arith(a, b, "add"), c, "add") == ext_arith(a, ext_arith(b, c, "add"), "add")
            assert ext_arith(ext_arith(a, b, "mul"), c, "mul") == ext_arith(a, ext_arith(b, c, "mul"), "mul")
            assert ext_arith(a, ext_arith(b, c, "add"), "mul") == ext_arith(
                ext_arith(a, b, "mul"), ext_arith(a, c, "mul"), "add"
            )
            assert ext_arith(a, m + n, "pow") == ext_arith(ext_arith(a, m, "pow"), ext_arith(a, n, "pow"), "mul")

        check()

    @pytest.mark.property
    def test_phi_is_linear(self):
        from hypothesis import given, settings, strategies as st

        F = prime_field(11)
        E = ext_field(F, 4)
        coeffs = st.lists(st.integers(0, 10), min_size=4, max_size=4)

        @settings(max_examples=60, deadline=None)
        @given(coeffs, coeffs, st.integers(0, 10))
        def check(x, y, scalar):
            u, v = F(x), F(y)
            assert phi(u + v, E) == phi(u, E) + phi(v, E)
            assert phi(F(scalar) * u, E) == E.element([scalar, 0, 0, 0]) * phi(u, E)

        check()


class TestLinearAlgebra:
    def test_inverse_round_trip(self, F13):
        A = F13([[1, 2, 3], [0, 1, 4], [5, 6, 0]])
        assert np.array_equal(as_ints(A @ inverse(A)), np.eye(3, dtype=np.int64))

    def test_singular_matrix(self, F13):
        with pytest.raises(FieldError):
            inverse(F13([[1, 2], [2, 4]]))

    def test_non_square_matrix(self, F13):
        with pytest.raises(LengthMismatch):
            inverse(F13([[1, 2, 3], [4, 5, 6]]))

    def test_row_reduce_pivots(self, F13):
        reduced, pivots = row_reduce(F13([[0, 2, 4], [0, 1, 2], [1, 0, 1]]))
        assert pivots == [0, 1]
        assert as_ints(reduced[0]).tolist() == [1, 0, 1]
        assert as_ints(reduced[1]).tolist() == [0, 1, 2]

    def test_rank(self, F13):
        assert matrix_rank(F13([[1, 2], [2, 4]])) == 1
        assert matrix_rank(F13.zeros((2, 0))) == 0

    def test_nullspace(self, F13):
        A = F13([[1, 2, 3, 4], [2, 4, 6, 8]])
        basis = nullspace(A)
        assert basis.shape == (4, 3)
        assert not np.any(as_ints(A @ basis))

    def test_solve_affine_consistent(self, F13):
        A = F13([[1, 1, 0], [0, 1, 1]])
        b = F13([3, 5])
        space = solve_affine(A, b)
        assert space is not None and space.dim == 1
        for chunk in space.points():
            assert np.all(as_ints(chunk @ A.T) == as_ints(b))

    def test_solve_affine_inconsistent(self, F13):
        assert solve_affine(F13([[1, 1], [1, 1]]), F13([1, 2])) is None

    def test_solve_affine_length_mismatch(self, F13):
        with pytest.raises(LengthMismatch):
            solve_affine(F13([[1, 1]]), F13([1, 2]))

    @pytest.mark.property
    def test_solve_affine_matches_exhaustive_search(self):
        F7 = prime_field(7)
        rng = np.random.default_rng(11)
        grid = np.concatenate(list(coefficient_grid(7, 5)))
        for _ in range(5):
            A = F7.random((3, 5), rng)
            while matrix_rank(A) < 3:
                A = F7.random((3, 5), rng)
            b = A @ F7.random(5, rng)
            space = solve_affine(A, b)
            assert space is not None and space.dim == 2
            expected = np.all((grid @ as_ints(A).T) % 7 == as_ints(b), axis=1)
            assert expected.sum() == 7**2
            assert np.array_equal(space.contains_many(F7(grid)), expected)

    def test_solve_affine_inconsistent_matches_exhaustive_search(self):
        F7 = prime_field(7)
        A = F7([[1, 2, 0, 3, 4], [0, 1, 5, 6, 1], [1, 3, 5, 2, 5]])
        b = F7([1, 2, 4])
        assert solve_affine(A, b) is None
        grid = np.concatenate(list(coefficient_grid(7, 5)))
        assert not np.any(np.all((grid @ as_ints(A).T) % 7 == as_ints(b), axis=1))

    def test_vandermonde(self, F13):
        V = vandermonde(F13([2, 3]), 4)
        assert as_ints(V).tolist() == [[1, 2, 4, 8], [1, 3, 9, 1]]

    def test_coefficient_grid_order(self):
        rows = np.concatenate(list(coefficient_grid(3, 2, chunk=4)))
        assert rows.shape == (9, 2)
        assert rows[:4].tolist() == [[0, 0], [1, 0], [2, 0], [0, 1]]
        assert len({tuple(r) for r in rows.tolist()}) == 9

    @pytest.mark.property
    def test_inverse_property(self):
        from hypothesis import given, settings, strategies as st

        F = prime_field(13)

        @settings(max_examples=40, deadline=None)
        @given(st.lists(st.integers(0, 12), min_size=16, max_size=16))
        def check(entries):
            A = F(np.array(entries).reshape(4, 4))
            if matrix_rank(A) < 4:
                with pytest.raises(FieldError):
                    inverse(A)
            else:
                assert np.array_equal(as_ints(inverse(A) @ A), np.eye(4, dtype=np.int64))

        check()


class TestAffineSpace:
    def test_point_space(self, F13):
        z = F13([1, 2, 3])
        space = AffineSpace.point(z)
        assert space.dim == 0
        assert space.contains(z)
        assert not space.contains(F13([1, 2, 4]))

    def test_points_enumerates_every_member(self, F13):
        M = F13([[1, 0], [0, 1], [1, 1]])
        space = AffineSpace(M, F13([0, 0, 5]))
        points = np.concatenate([as_ints(c) for c in space.points()])
        assert points.shape == (169, 3)
        assert np.all(space.contains_many(F13(points)))

    def test_reduced_is_canonical(self, F13):
        M = F13([[1], [2], [3]])
        a = AffineSpace(M, F13([0, 0, 0]))
        b = AffineSpace(M * F13(5), M[:, 0] * F13(4))
        assert a.same_as(b)

    def test_dependent_columns_collapse(self, F13):
        M = F13([[1, 2], [1, 2], [0, 0]])
        assert AffineSpace(M, F13.zeros(3)).reduced().dim == 1

    def test_restrict(self, F13):
        space = AffineSpace(F13([[1], [0], [0]]), F13([0, 4, 5]))
        restricted = space.restrict([1, 2])
        assert restricted.dim == 0
        assert as_ints(restricted.z).tolist() == [4, 5]

    def test_shape_mismatch(self, F13):
        with pytest.raises(LengthMismatch):
            AffineSpace(F13.zeros((3, 1)), F13.zeros(2))
