"""Exact scalar linear algebra: echelon forms, projections, unitary completion."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from hermfact.errors import PreconditionViolated
from hermfact.linalg import (
    column_space_basis,
    conj_transpose,
    dot_h,
    extend_to_unitary,
    identity_grid,
    inverse_grid,
    is_unitary_grid,
    is_zero_grid,
    mat_add,
    mat_eq,
    mat_mul,
    mat_sub,
    nullspace,
    projection_onto,
    rref,
    solve,
)
from hermfact.scalars import Scalar


def rand_scalar(rng, complex_ok=True):
    return Scalar(
        Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
        Fraction(rng.randint(-4, 4), rng.randint(1, 3)) if complex_ok else Fraction(0),
    )


def rand_grid(rng, m, n, complex_ok=True):
    return [[rand_scalar(rng, complex_ok) for _ in range(n)] for _ in range(m)]


def cayley_unitary(rng, n, complex_ok=True):
    """Random rational unitary via the Cayley transform of a skew-hermitian K."""
    K = rand_grid(rng, n, n, complex_ok)
    Kh = conj_transpose(K)
    K = [[(K[i][j] - Kh[i][j]) / Scalar.coerce(2) for j in range(n)] for i in range(n)]
    return mat_mul(mat_sub(identity_grid(n), K), inverse_grid(mat_add(identity_grid(n), K)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_rank_nullity_and_nullspace(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 4), rng.randint(1, 4)
    A = rand_grid(rng, m, n)
    R, pivots = rref(A)
    ns = nullspace(A)
    assert len(R) + len(ns) == n
    for v in ns:
        assert is_zero_grid(mat_mul(A, [[x] for x in v]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_solve_consistency(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 4), rng.randint(1, 4)
    A = rand_grid(rng, m, n)
    x0 = [rand_scalar(rng) for _ in range(n)]
    b = [row[0] for row in mat_mul(A, [[x] for x in x0])]
    x = solve(A, b)
    assert x is not None
    assert [row[0] for row in mat_mul(A, [[v] for v in x])] == b


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_projection_identities(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    k = rng.randint(0, n)
    vectors = [tuple(rand_scalar(rng) for _ in range(n)) for _ in range(k)]
    P = projection_onto(vectors, n)
    assert mat_eq(mat_mul(P, P), P)
    assert mat_eq(conj_transpose(P), P)
    for v in vectors:
        img = [row[0] for row in mat_mul(P, [[x] for x in v])]
        assert tuple(img) == v


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_unitary_completion(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    U0 = cayley_unitary(rng, n, complex_ok=rng.random() < 0.5)
    assert is_unitary_grid(U0)
    k = rng.randint(1, n)
    cols = [tuple(U0[i][j] for i in range(n)) for j in range(k)]
    U = extend_to_unitary(cols, n)
    assert is_unitary_grid(U)
    for j in range(k):
        assert all(U[i][j] == cols[j][i] for i in range(n))


def test_unitary_completion_negated_axis():
    # y = -e_1 exercises the reflection special case of the Cayley step
    n = 3
    y = (Scalar.coerce(-1), Scalar.zero(), Scalar.zero())
    U = extend_to_unitary([y], n)
    assert is_unitary_grid(U)
    assert U[0][0] == Scalar.coerce(-1)


def test_unitary_completion_rejects_bad_input():
    with pytest.raises(PreconditionViolated):
        extend_to_unitary([(Scalar.coerce(2), Scalar.zero())], 2)
    with pytest.raises(PreconditionViolated):
        extend_to_unitary(
            [(Scalar.one(), Scalar.zero()), (Scalar.one(), Scalar.zero())], 2
        )


def test_column_space_basis_echelon():
    g = [[Scalar.coerce(2), Scalar.coerce(4)], [Scalar.coerce(1), Scalar.coerce(2)]]
    basis = column_space_basis(g)
    assert basis == [(Scalar.one(), Scalar(Fraction(1, 2)))]
