import random

import pytest
from hypothesis import given, settings, strategies as st

from rotohull.abelian import FGAbelianGroup
from rotohull.intlinalg import (
    IntChainComplex,
    IntMatrix,
    cokernel,
    column_hnf,
    complex_cohomology,
    invariant_factors,
    kernel_basis,
    lattice_membership,
    lattices_equal,
    nullspace_mod_p,
    rank_mod_p,
    rational_nullspace_rank,
    rational_rank,
    smith_normal_form,
    solve_columns,
)

M = IntMatrix.from_rows


def random_matrix(rng, nrows, ncols, bound=20):
    return M(
        [[rng.randint(-bound, bound) for _ in range(ncols)] for _ in range(nrows)],
        ncols=ncols,
    )


def random_unimodular(rng, n, steps=None):
    u = IntMatrix.identity(n).to_lists()
    for _ in range(steps if steps is not None else 3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            u[i][k] += c * u[j][k]
    return M(u, ncols=n)


class TestSmithNormalForm:
    def test_identity(self):
        factors, _, _ = smith_normal_form(IntMatrix.identity(3))
        assert factors == [1, 1, 1]

    def test_small_example(self):
        # d1 = gcd of entries, d1*d2 = |det|.
        a = M([[2, 4], [6, 8]])
        factors, u, v = smith_normal_form(a)
        assert factors == [2, 4]
        assert u * a * v == IntMatrix.diagonal([2, 4])
        assert abs(u.det()) == 1 and abs(v.det()) == 1

    def test_zero_matrix(self):
        factors, _, _ = smith_normal_form(IntMatrix.zero(2, 3))
        assert factors == []

    def test_empty_matrix(self):
        factors, u, v = smith_normal_form(IntMatrix.zero(0, 4))
        assert factors == []
        assert v == IntMatrix.identity(4)

    def test_round_trip_randomised(self):
        rng = random.Random(7)
        for _ in range(200):
            n, m = rng.randint(1, 8), rng.randint(1, 8)
            a = random_matrix(rng, n, m)
            factors, u, v = smith_normal_form(a)
            d = u * a * v
            expect = [
                [factors[i] if i == j and i < len(factors) else 0 for j in range(m)]
                for i in range(n)
            ]
            assert d == M(expect, ncols=m)
            assert abs(u.det()) == 1
            assert abs(v.det()) == 1
            for d1, d2 in zip(factors, factors[1:]):
                assert d2 % d1 == 0

    def test_round_trip_larger_sizes(self):
        rng = random.Random(30)
        for _ in range(3):
            n, m = rng.randint(20, 30), rng.randint(20, 30)
            a = random_matrix(rng, n, m)
            factors, u, v = smith_normal_form(a)
            assert u * a * v == M(
                [
                    [factors[i] if i == j and i < len(factors) else 0 for j in range(m)]
                    for i in range(n)
                ],
                ncols=m,
            )


class TestCokernel:
    def test_single_relation(self):
        assert cokernel(M([[2]])) == FGAbelianGroup(0, (2,))

    def test_no_relations(self):
        assert cokernel(IntMatrix(3, 0, ((), (), ()))) == FGAbelianGroup(3)

    def test_rectangular(self):
        a = M([[2, 0], [0, 4], [0, 0]])
        assert cokernel(a) == FGAbelianGroup(1, (2, 4))

    def test_unimodular_invariance(self):
        rng = random.Random(11)
        for _ in range(25):
            n, m = rng.randint(1, 6), rng.randint(1, 6)
            a = random_matrix(rng, n, m, bound=9)
            p = random_unimodular(rng, n)
            q = random_unimodular(rng, m)
            assert cokernel(a) == cokernel(p * a * q)


class TestKernel:
    def test_identity(self):
        assert kernel_basis(IntMatrix.identity(4)).ncols == 0

    def test_antidiagonal(self):
        k = kernel_basis(M([[1, 1]]))
        assert k.ncols == 1
        v = k.column(0)
        assert v in ((1, -1), (-1, 1))

    def test_saturation(self):
        # ker [[2,4]] is spanned by (2,-1); (1,-1/2) is not integral.
        k = kernel_basis(M([[2, 4]]))
        assert k.ncols == 1
        assert tuple(map(abs, k.column(0))) == (2, 1)

    def test_rank_nullity(self):
        rng = random.Random(13)
        for _ in range(50):
            n, m = rng.randint(1, 7), rng.randint(1, 7)
            a = random_matrix(rng, n, m)
            k = kernel_basis(a)
            assert k.ncols + rational_rank(a) == m
            if k.ncols:
                assert (a * k).is_zero

    def test_kernel_saturated_randomised(self):
        # A vector in the rational kernel with integer entries must lie in
        # the integer span of the computed basis.
        rng = random.Random(17)
        for _ in range(30):
            n, m = rng.randint(1, 6), rng.randint(2, 6)
            a = random_matrix(rng, n, m, bound=6)
            k = kernel_basis(a)
            if k.ncols == 0:
                continue
            coeffs = [rng.randint(-3, 3) for _ in range(k.ncols)]
            v = k.apply(coeffs)
            assert lattice_membership(k, v) is not None


class TestLattices:
    def test_membership_examples(self):
        b = IntMatrix.diagonal([2, 2])
        assert lattice_membership(b, (2, 0)) == (1, 0)
        assert lattice_membership(b, (1, 0)) is None
        b2 = M([[2, 1], [0, 3]])
        assert lattice_membership(b2, (3, 3)) == (1, 1)

    def test_membership_round_trip(self):
        rng = random.Random(19)
        for _ in range(40):
            n, m = rng.randint(1, 6), rng.randint(1, 6)
            b = random_matrix(rng, n, m, bound=7)
            c = [rng.randint(-4, 4) for _ in range(m)]
            v = b.apply(c)
            sol = lattice_membership(b, v)
            assert sol is not None
            assert b.apply(sol) == v

    def test_hnf_canonical(self):
        rng = random.Random(23)
        for _ in range(40):
            n, m = rng.randint(1, 5), rng.randint(1, 5)
            b = random_matrix(rng, n, m, bound=8)
            q = random_unimodular(rng, m)
            assert column_hnf(b) == column_hnf(b * q)
            assert lattices_equal(b, b * q)

    def test_solve_columns(self):
        b = M([[2, 1], [0, 3]])
        t = M([[3, 2], [3, 0]])
        x = solve_columns(b, t)
        assert b * x == t


class TestModP:
    def test_rank(self):
        assert rank_mod_p(M([[2, 0], [0, 3]]), 2) == 1
        assert rank_mod_p(M([[2, 0], [0, 3]]), 3) == 1
        assert rank_mod_p(IntMatrix.identity(5), 7) == 5

    def test_nullspace(self):
        basis = nullspace_mod_p(M([[1, 1]]), 2)
        assert basis == [(1, 1)]
        a = M([[2, 4], [6, 8]])
        for v in nullspace_mod_p(a, 2):
            assert all(x % 2 == 0 for x in a.apply(v))


class TestRationalRank:
    def test_examples(self):
        assert rational_nullspace_rank(IntMatrix.identity(3)) == 0
        assert rational_nullspace_rank(IntMatrix.zero(4, 4)) == 4
        assert rational_nullspace_rank(M([[1, 1], [1, 1]])) == 1

    def test_fraction_entries(self):
        from fractions import Fraction

        singular = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(1, 1)]]
        assert rational_nullspace_rank(singular) == 1
        regular = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(2, 1)]]
        assert rational_nullspace_rank(regular) == 0


class TestComplexCohomology:
    def test_zero_differential(self):
        cx = IntChainComplex((IntMatrix.zero(1, 1),))
        assert complex_cohomology(cx) == [FGAbelianGroup(1), FGAbelianGroup(1)]

    def test_multiplication_by_two(self):
        cx = IntChainComplex((M([[2]]),))
        assert complex_cohomology(cx) == [FGAbelianGroup(0), FGAbelianGroup(0, (2,))]

    def test_rejects_nonzero_composite(self):
        with pytest.raises(ValueError):
            IntChainComplex((M([[1]]), M([[1]])))

    def test_euler_characteristic_mod_p(self):
        # Random 3-term complexes: second map lands in the kernel of the
        # first, so the composite vanishes over Z and hence over F2.
        rng = random.Random(29)
        for _ in range(20):
            n0, n1 = rng.randint(1, 5), rng.randint(1, 5)
            d1 = random_matrix(rng, n1, n0, bound=4)
            k = kernel_basis(d1)
            if k.ncols == 0:
                continue
            cols = []
            for _ in range(rng.randint(1, 3)):
                coeffs = [rng.randint(-2, 2) for _ in range(k.ncols)]
                cols.append(k.apply(coeffs))
            d0 = IntMatrix.from_columns(cols, nrows=n0)
            dims = complex_cohomology(IntChainComplex((d0, d1), ring="F2"))
            c_dims = [d0.ncols, n0, n1]
            assert sum((-1) ** i * d for i, d in enumerate(dims)) == sum(
                (-1) ** i * d for i, d in enumerate(c_dims)
            )


@given(
    st.lists(
        st.lists(st.integers(min_value=-20, max_value=20), min_size=3, max_size=3),
        min_size=2,
        max_size=5,
    )
)
@settings(max_examples=60, deadline=None)
def test_snf_round_trip_property(rows):
    a = M(rows, ncols=3)
    factors, u, v = smith_normal_form(a)
    d = u * a * v
    for i in range(a.nrows):
        for j in range(3):
            expect = factors[i] if i == j and i < len(factors) else 0
            assert d.rows[i][j] == expect


@given(
    st.lists(
        st.lists(st.integers(min_value=-9, max_value=9), min_size=4, max_size=4),
        min_size=2,
        max_size=4,
    )
)
@settings(max_examples=60, deadline=None)
def test_kernel_rank_nullity_property(rows):
    a = M(rows, ncols=4)
    assert kernel_basis(a).ncols + rational_rank(a) == 4
