"""Splitting a matrix zero out of a hermitian-square factor."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from hermfact.errors import (
    NotAZero,
    NotIsotropic,
    OddDimension,
    OddDimensionReal,
)
from hermfact.linalg import conj_transpose, dot_b, mat_mul, span_dim
from hermfact.matrix import COMPLEX, REAL, PolyMatrix, eval_left
from hermfact.poly import UniPoly
from hermfact.scalars import Scalar
from hermfact.splitoff import isotropic_completion, split_matrix_zero

from .test_linalg import cayley_unitary, rand_scalar

T = UniPoly.t()
ONE = Scalar.one()
ZERO = Scalar.zero()
I = Scalar.i()


def pmat(entries, field=COMPLEX):
    return PolyMatrix([[UniPoly.coerce(e) for e in row] for row in entries], field)


def t_identity(n, field=COMPLEX):
    return PolyMatrix.diagonal([T] * n, field)


# ---------------------------------------------------------------------------
# isotropic_completion
# ---------------------------------------------------------------------------


def test_completion_from_empty_dim2():
    basis = isotropic_completion([], 2)
    assert basis == [(ONE, I)]


def test_completion_keeps_given_vector():
    v = (ONE, -I)
    assert isotropic_completion([v], 2) == [v]


def test_completion_extends_dim4():
    v = (ONE, I, ZERO, ZERO)
    basis = isotropic_completion([v], 4)
    assert basis == [v, (ZERO, ZERO, ONE, I)]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_completion_invariants(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 4, 6])
    seeds = []
    # seed with one random isotropic vector when possible: a*(e_i + i*e_j)
    if rng.random() < 0.5:
        a = rand_scalar(rng)
        if not a.is_zero:
            i, j = rng.sample(range(n), 2)
            v = [ZERO] * n
            v[i], v[j] = a, a * I
            seeds = [tuple(v)]
    basis = isotropic_completion(seeds, n)
    assert len(basis) == n // 2
    for u in basis:
        for w in basis:
            assert dot_b(u, w).is_zero
    assert span_dim(list(basis)) == n // 2


def test_completion_rejects_non_isotropic():
    with pytest.raises(NotIsotropic):
        isotropic_completion([(ONE, ZERO)], 2)


def test_completion_rejects_odd_dimension():
    with pytest.raises(OddDimension):
        isotropic_completion([], 3)


# ---------------------------------------------------------------------------
# split_matrix_zero
# ---------------------------------------------------------------------------


def normal_with_spectrum(rng, n, z, field):
    """Random exact normal matrix whose eigenvalues all lie in {z, conj(z)}."""
    if field is REAL:
        assert n % 2 == 0
        W = cayley_unitary(rng, n, complex_ok=False)
        rot = [
            [Scalar(z.re), Scalar(z.im)],
            [Scalar(-z.im), Scalar(z.re)],
        ]
        D = [[ZERO] * n for _ in range(n)]
        for b in range(n // 2):
            for i in range(2):
                for j in range(2):
                    D[2 * b + i][2 * b + j] = rot[i][j]
    else:
        W = cayley_unitary(rng, n, complex_ok=True)
        eigs = [z if rng.random() < 0.5 else z.conj() for _ in range(n)]
        eigs[0] = z
        D = [[eigs[i] if i == j else ZERO for j in range(n)] for i in range(n)]
    return mat_mul(mat_mul(W, D), conj_transpose(W))


def planted_zero_factor(rng, n, z, field):
    """Q = (t*Id - A0) * P0 for a random normal A0 with spectrum in {z, conj z}."""
    complex_ok = field is COMPLEX
    A0 = PolyMatrix.from_constant(normal_with_spectrum(rng, n, z, field), field)
    P0 = PolyMatrix(
        [
            [
                UniPoly([rand_scalar(rng, complex_ok) for _ in range(rng.randint(1, 3))])
                for _ in range(n)
            ]
            for _ in range(n)
        ],
        field,
    )
    return (t_identity(n, field) - A0) * P0


def check_split(Q, z, step):
    n = Q.cols
    lead = t_identity(n) - step.A
    # reconstruction: Q = (t*Id - A) * P
    assert lead * step.P == Q
    grid = step.A.constant_grid()
    Ah = conj_transpose(grid)
    # A is normal
    assert mat_mul(grid, Ah) == mat_mul(Ah, grid)
    # (t*Id - A)* (t*Id - A) = (t - z)*(t - z) * Id
    factor = (T - UniPoly.constant(z)).star() * (T - UniPoly.constant(z))
    assert lead.star() * lead == PolyMatrix.diagonal([factor] * n, COMPLEX)
    # A annihilates Q on the left
    assert eval_left(Q, step.A).is_zero()
    # minimal polynomial of A divides (t - z)(t - conj z)
    zbar = z.conj()
    m1 = [[grid[i][j] - (z if i == j else ZERO) for j in range(n)] for i in range(n)]
    m2 = [[grid[i][j] - (zbar if i == j else ZERO) for j in range(n)] for i in range(n)]
    assert all(x.is_zero for row in mat_mul(m1, m2) for x in row)


def test_split_diagonal_example():
    Q = pmat([[T - UniPoly.constant(I), 0], [0, T + UniPoly.constant(I)]])
    step = split_matrix_zero(Q, I)
    assert step.A.constant_grid() == [[I, ZERO], [ZERO, -I]]
    assert step.P == PolyMatrix.identity(2, COMPLEX)
    check_split(Q, I, step)


def test_split_real_rotation_example():
    Q = pmat([[UniPoly.one(), T], [-T, UniPoly.one()]], REAL)
    step = split_matrix_zero(Q, I)
    assert step.A.constant_grid() == [[ZERO, ONE], [-ONE, ZERO]]
    assert step.P == pmat([[0, 1], [-1, 0]])
    check_split(Q, I, step)


def test_split_one_by_one():
    z = Scalar(2, 1)
    Q = pmat([[(T - UniPoly.constant(z)) * (T + UniPoly.one())]])
    step = split_matrix_zero(Q, z)
    assert step.A.constant_grid() == [[z]]
    assert step.P == pmat([[T + UniPoly.one()]])
    check_split(Q, z, step)


def test_split_real_point():
    # at a real zero A = z*Id regardless of the kernel geometry
    Q = pmat([[T, T * T], [UniPoly.zero(), T]], REAL)
    step = split_matrix_zero(Q, Scalar.zero())
    assert step.A.constant_grid() == [[ZERO, ZERO], [ZERO, ZERO]]
    assert step.P == pmat([[1, T], [0, 1]])
    check_split(Q, Scalar.zero(), step)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_split_planted_complex(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    z = Scalar(Fraction(rng.randint(-2, 2)), Fraction(rng.randint(1, 2)))
    Q = planted_zero_factor(rng, n, z, COMPLEX)
    step = split_matrix_zero(Q, z)
    check_split(Q, z, step)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10**6))
def test_split_planted_real(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 4])
    z = Scalar(Fraction(rng.randint(-2, 2)), Fraction(rng.randint(1, 2)))
    Q = planted_zero_factor(rng, n, z, REAL)
    step = split_matrix_zero(Q, z)
    assert all(x.is_real for row in step.A.constant_grid() for x in row)
    check_split(Q, z, step)


def test_split_rejects_nonzero_point():
    with pytest.raises(NotAZero):
        split_matrix_zero(PolyMatrix.identity(2, COMPLEX), Scalar.zero())


def test_split_rejects_real_odd_dimension():
    Q = pmat([[T * T + UniPoly.one()]], REAL)
    with pytest.raises(OddDimensionReal):
        split_matrix_zero(Q, I)
