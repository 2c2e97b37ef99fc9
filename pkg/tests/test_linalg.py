import random
from fractions import Fraction

import pytest

from obstruct.linalg import (ComplexConsistencyError, Field, InputError, NO_SOLUTION, SparseMatrix,
                             kernel_basis, left_kernel_witness, rank, solve_linear, subquotient_dims)


def dense_rank(rows, p):
    """Plain Gaussian elimination, used as an independent oracle."""
    m = [[Fraction(x) if p == 0 else x % p for x in r] for r in rows]
    rk = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        inv = 1 / m[rk][c] if p == 0 else pow(m[rk][c], -1, p)
        for i in range(len(m)):
            if i != rk and m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
                if p:
                    m[i] = [a % p for a in m[i]]
        rk += 1
    return rk


def random_matrix(rng, r, c, p, density=0.5):
    return [[rng.randrange(-3, 4) if rng.random() < density else 0 for _ in range(c)] for _ in range(r)]


def test_field_parse():
    assert Field.parse("Q") == Field(0)
    assert Field.parse("GF(7)").characteristic == 7
    assert Field.parse("gf3") == Field(3)
    with pytest.raises(InputError):
        Field.parse("GF(4)")
    with pytest.raises(InputError):
        Field.parse("R")


def test_coerce():
    assert Field(3).coerce("1/2") == 2
    assert Field(0).coerce("3/6") == Fraction(1, 2)
    assert Field(0).coerce("4/2") == 2
    with pytest.raises(InputError):
        Field(0).coerce(0.5)


def test_identity_solve():
    F = Field(0)
    m = SparseMatrix.identity(3, F)
    x, ker = solve_linear(m, [1, 2, 3])
    assert x == {0: 1, 1: 2, 2: 3}
    assert ker == []


def test_inconsistent_system_has_witness():
    F = Field(2)
    m = SparseMatrix.from_dense([[1, 1], [1, 1]], F)
    x, ker = solve_linear(m, {0: 1})
    assert x is NO_SOLUTION
    assert len(ker) == 1
    y = left_kernel_witness(m, {0: 1})
    assert y is not None
    # y . M = 0 and y . b != 0
    assert all(sum(y.get(i, 0) * m.to_dense()[i][j] for i in range(2)) % 2 == 0 for j in range(2))
    assert y.get(0, 0) % 2 == 1


def test_zero_matrix_kernel():
    m = SparseMatrix(2, 3, Field(5))
    assert len(kernel_basis(m)) == 3
    assert rank(m) == 0


def test_rhs_length_checked():
    with pytest.raises(InputError):
        solve_linear(SparseMatrix.identity(2, Field(0)), [1, 2, 3])


@pytest.mark.parametrize("p", [0, 2, 3, 5])
def test_rank_and_solutions_against_dense_oracle(p):
    rng = random.Random(p + 11)
    F = Field(p)
    for _ in range(30):
        r, c = rng.randrange(1, 7), rng.randrange(1, 7)
        rows = random_matrix(rng, r, c, p)
        m = SparseMatrix.from_dense(rows, F)
        assert rank(m) == dense_rank(rows, p)
        ker = kernel_basis(m)
        assert len(ker) == c - dense_rank(rows, p)
        for v in ker:
            assert all(F.reduce(x) == 0 for x in m.apply(v).values())
        b = [rng.randrange(-2, 3) for _ in range(r)]
        x, _ = solve_linear(m, b)
        augmented = [row + [bi] for row, bi in zip(rows, b)]
        solvable = dense_rank(augmented, p) == dense_rank(rows, p)
        assert (x is not NO_SOLUTION) == solvable
        if x is not NO_SOLUTION:
            got = m.apply(x)
            assert all(F.reduce(got.get(i, 0) - b[i]) == 0 for i in range(r))
        else:
            y = left_kernel_witness(m, {i: v for i, v in enumerate(b) if v})
            assert y is not None


def test_subquotient_requires_complex():
    F = Field(0)
    a = SparseMatrix.identity(2, F)
    with pytest.raises(ComplexConsistencyError):
        subquotient_dims(a, a)
    with pytest.raises(InputError):
        subquotient_dims(SparseMatrix(1, 2, F), SparseMatrix(3, 1, F))


@pytest.mark.parametrize("p", [0, 2, 3])
def test_subquotient_dims_random(p):
    rng = random.Random(100 + p)
    F = Field(p)
    for _ in range(15):
        n_mid = rng.randrange(1, 6)
        d_in = SparseMatrix.from_dense(random_matrix(rng, n_mid, rng.randrange(1, 5), p), F)
        # d_out kills the image of d_in: rows from the left kernel of d_in
        left = kernel_basis(d_in.transpose())
        rows = [[v.get(j, 0) for j in range(n_mid)] for v in left[: rng.randrange(0, len(left) + 1)]]
        d_out = SparseMatrix.from_dense(rows, F, cols=n_mid) if rows else SparseMatrix(0, n_mid, F)
        sq = subquotient_dims(d_out, d_in)
        r_out = dense_rank(rows, p) if rows else 0
        r_in = dense_rank(d_in.to_dense(), p)
        assert sq.dim_kernel == n_mid - r_out
        assert sq.dim_image == r_in
        assert sq.dim_quotient == n_mid - r_out - r_in
        assert len(sq.representatives) == sq.dim_quotient
