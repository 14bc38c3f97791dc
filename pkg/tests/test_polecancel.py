"""Pole cancellation, identity stripping, and subring membership."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from hermfact.errors import (
    NotPolynomialGram,
    PreconditionViolated,
    RootsNotInField,
)
from hermfact.matrix import (
    COMPLEX,
    REAL,
    PolyMatrix,
    equivalent_factorizations,
)
from hermfact.poly import RatFn, UniPoly
from hermfact.polecancel import (
    SubringSpec,
    cancel_poles,
    check_unitary_over,
    lcd,
    strip_identity,
)
from hermfact.scalars import Scalar

from .test_linalg import cayley_unitary, rand_scalar

T = UniPoly.t()
ONE = UniPoly.one()
ZERO = UniPoly.zero()
I = Scalar.i()


def const(x):
    return UniPoly.constant(Scalar.coerce(x))


def random_poly_entry(rng, complex_ok, max_degree=2):
    return UniPoly([rand_scalar(rng, complex_ok) for _ in range(rng.randint(1, max_degree + 1))])


def planted_polynomial(rng, n, field):
    complex_ok = field is COMPLEX
    return PolyMatrix(
        [[random_poly_entry(rng, complex_ok) for _ in range(n)] for _ in range(n)],
        field,
    )


def blaschke(z):
    """(t - z)/(t - conj z): a rational unitary scalar with a pole at conj z."""
    return RatFn(T - UniPoly.constant(z), T - UniPoly.constant(z.conj()))


def complex_unitary_twist(rng, n):
    """W diag(b_1, ..., b_n) W* with Blaschke-type diagonal entries."""
    W = PolyMatrix.from_constant(cayley_unitary(rng, n), COMPLEX)
    diag = []
    for _ in range(n):
        if rng.random() < 0.4:
            diag.append(RatFn.one())
        else:
            z = Scalar(Fraction(rng.randint(-2, 2)), Fraction(rng.choice([-2, -1, 1, 2])))
            diag.append(blaschke(z))
    return W * PolyMatrix.diagonal(diag, COMPLEX) * W.star()

def rotation_gadget(a, b):
    """C = [[a, -b], [b, a]] satisfies C^T C = (a^2 + b^2) Id."""
    return PolyMatrix([[a, -b], [b, a]], REAL)


def real_orthogonal_twist(rng, n):
    """Embedded C' C^{-1} for two two-squares pairs of d = (t-c)^2 + e^2."""
    c = Fraction(rng.randint(-2, 2))
    e = Fraction(rng.choice([1, 2]))
    a, b = T - const(c), const(e)
    C = rotation_gadget(a, b)
    Cp = rotation_gadget(b, -a) if rng.random() < 0.5 else rotation_gadget(b, a)
    V = Cp * C.inverse()
    if n > 2:
        V = V.block_diag(PolyMatrix.identity(n - 2, REAL))
    W = PolyMatrix.from_constant(cayley_unitary(rng, n, complex_ok=False), REAL)
    return W * V * W.star()


# ---------------------------------------------------------------------------
# lcd
# ---------------------------------------------------------------------------


def test_lcd_polynomial_input():
    assert lcd(PolyMatrix([[T]], REAL)) == ONE


def test_lcd_single_denominator():
    S = PolyMatrix([[RatFn(T - UniPoly.constant(I), T + UniPoly.constant(I))]], COMPLEX)
    assert lcd(S) == T + UniPoly.constant(I)


def test_lcd_combines_denominators():
    d1 = T + UniPoly.constant(I)
    d2 = d1 * (T - const(2))
    S = PolyMatrix([[RatFn(ONE, d1), RatFn(ONE, d2)]], COMPLEX)
    assert lcd(S) == d2


# ---------------------------------------------------------------------------
# cancel_poles
# ---------------------------------------------------------------------------


def check_cancellation(S, U, Q):
    n = S.rows
    assert U.star() * U == PolyMatrix.identity(n, COMPLEX)
    assert U * S == Q
    assert Q.is_polynomial()
    assert Q.star() * Q == S.star() * S
    # denominators of U divide a power of lcd(S) * star(lcd(S))
    a = lcd(S)
    power = (a * a.star()) ** (2 * n * max(1, a.degree()))
    assert all(RatFn.coerce(e).den.divides(power) for e in U.entries())
    # degree preservation
    assert Q.det() * Q.det().star() == (S.star() * S).det()


def test_cancel_polynomial_is_identity():
    S = PolyMatrix([[T, ONE], [ZERO, T]], REAL)
    U, Q = cancel_poles(S)
    assert U == PolyMatrix.identity(2, REAL)
    assert Q == S


def test_cancel_single_blaschke():
    S = PolyMatrix([[RatFn(T - UniPoly.constant(I), T + UniPoly.constant(I))]], COMPLEX)
    U, Q = cancel_poles(S)
    assert U == PolyMatrix([[RatFn(T + UniPoly.constant(I), T - UniPoly.constant(I))]], COMPLEX)
    assert Q == PolyMatrix([[ONE]], COMPLEX)
    check_cancellation(S, U, Q)


def test_cancel_repeated_pole():
    b = blaschke(Scalar(0, 1))
    S = PolyMatrix([[b * b, RatFn.zero()], [RatFn.zero(), RatFn.one()]], COMPLEX)
    U, Q = cancel_poles(S)
    check_cancellation(S, U, Q)


def test_cancel_real_odd_size_with_quadratic_pole():
    # rational orthogonal twist with poles at roots of t^2 + 1, size 3 (odd)
    C = rotation_gadget(T, ONE)
    Cp = rotation_gadget(ONE, T)
    V = (Cp * C.inverse()).block_diag(PolyMatrix.identity(1, REAL))
    Q0 = PolyMatrix([[ONE, T, ZERO], [ZERO, ONE, T], [T, ZERO, ONE]], REAL)
    S = V * Q0
    assert lcd(S) == T * T + ONE
    U, Q = cancel_poles(S)
    assert Q.field == REAL
    assert all(RatFn.coerce(e).is_real() for e in U.entries())
    assert Q.star() * Q == Q0.star() * Q0
    check_cancellation(S, U, Q)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_cancel_planted_complex_twists(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    Q0 = planted_polynomial(rng, n, COMPLEX)
    S = complex_unitary_twist(rng, n) * Q0
    U, Q = cancel_poles(S)
    check_cancellation(S, U, Q)
    assert Q.star() * Q == Q0.star() * Q0


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6))
def test_cancel_planted_real_twists(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    Q0 = planted_polynomial(rng, n, REAL)
    S = real_orthogonal_twist(rng, n) * Q0
    U, Q = cancel_poles(S)
    assert Q.field == REAL
    check_cancellation(S, U, Q)
    assert Q.star() * Q == Q0.star() * Q0


def test_cancel_rejects_nonpolynomial_gram():
    with pytest.raises(NotPolynomialGram):
        cancel_poles(PolyMatrix([[RatFn(ONE, T)]], REAL))


def test_cancel_rejects_roots_outside_field_complex():
    g = T * T - UniPoly.constant(I)
    S = PolyMatrix([[RatFn(g.star(), g)]], COMPLEX)
    assert (S.star() * S) == PolyMatrix.identity(1, COMPLEX)
    with pytest.raises(RootsNotInField):
        cancel_poles(S)


def test_cancel_rejects_roots_outside_field_real():
    # d = t^4 + 1 factors over neither Q nor Q(i)
    C = rotation_gadget(T * T, ONE)
    Cp = rotation_gadget(ONE, T * T)
    S = Cp * C.inverse()
    assert S.star() * S == PolyMatrix.identity(2, REAL)
    with pytest.raises(RootsNotInField):
        cancel_poles(S)


# ---------------------------------------------------------------------------
# strip_identity
# ---------------------------------------------------------------------------


def test_strip_block_diagonal_unchanged():
    Q = PolyMatrix([[ONE, T], [ZERO, T * T + ONE]], REAL)
    P = Q.block_diag(PolyMatrix.identity(2, REAL))
    assert strip_identity(P, 2) == Q


def test_strip_twisted_block():
    Q = PolyMatrix([[ONE, T], [ZERO, T * T + ONE]], REAL)
    rng = random.Random(7)
    W = PolyMatrix.from_constant(cayley_unitary(rng, 3, complex_ok=False), REAL)
    P = W * Q.block_diag(PolyMatrix.identity(1, REAL))
    Q2 = strip_identity(P, 1)
    M = Q.star() * Q
    assert Q2.star() * Q2 == M
    assert equivalent_factorizations(Q2, Q, M)


def test_strip_rejects_non_block_gram():
    P = PolyMatrix([[ONE, ZERO], [ZERO, T]], REAL)
    with pytest.raises(PreconditionViolated):
        strip_identity(P, 1)


# ---------------------------------------------------------------------------
# check_unitary_over / SubringSpec
# ---------------------------------------------------------------------------


def test_constant_rotation_in_semi_local():
    rot = PolyMatrix.from_constant(
        [
            [Scalar(Fraction(3, 5)), Scalar(Fraction(-4, 5))],
            [Scalar(Fraction(4, 5)), Scalar(Fraction(3, 5))],
        ],
        REAL,
    )
    assert check_unitary_over(rot, SubringSpec.semi_local(T * T + ONE))


def test_pole_on_modulus_is_rejected():
    U = PolyMatrix([[RatFn(T + UniPoly.constant(I), T - UniPoly.constant(I))]], COMPLEX)
    assert not check_unitary_over(U, SubringSpec.semi_local(T * T + ONE))
    assert check_unitary_over(U, SubringSpec.full_function_field())
    assert not check_unitary_over(U, SubringSpec.polynomial_ring())


def test_non_unitary_is_rejected():
    U = PolyMatrix([[RatFn(T - const(2), T - const(3))]], REAL)
    assert not check_unitary_over(U, SubringSpec.full_function_field())


def test_subring_validation():
    with pytest.raises(PreconditionViolated):
        SubringSpec("semi-local")  # missing modulus
    with pytest.raises(PreconditionViolated):
        SubringSpec("polynomial", T)
    with pytest.raises(PreconditionViolated):
        SubringSpec("weird")


def test_subring_star_invariance():
    assert SubringSpec.semi_local(T * T + ONE).star_invariant
    assert not SubringSpec.semi_local(T - UniPoly.constant(I)).star_invariant
    assert SubringSpec.polynomial_ring().star_invariant
    assert SubringSpec.full_function_field().star_invariant


def test_subrings_contain_polynomials():
    for ring in (
        SubringSpec.full_function_field(),
        SubringSpec.semi_local(T * T + ONE),
        SubringSpec.polynomial_ring(),
    ):
        assert ring.contains(T * T - const(3))
        assert ring.contains(RatFn.one())


def test_injectivity_over_semi_local():
    # a unitary matching two polynomial factorizations of the same M is
    # unitary over the semi-local ring at det M, and in fact constant
    rng = random.Random(11)
    Q1 = planted_polynomial(rng, 2, COMPLEX)
    while Q1.det().is_zero:
        Q1 = planted_polynomial(rng, 2, COMPLEX)
    U0 = PolyMatrix.from_constant(cayley_unitary(rng, 2), COMPLEX)
    Q2 = U0 * Q1
    M = Q1.star() * Q1
    U = Q2 * Q1.inverse()
    assert U.is_constant()
    d = M.det()
    if isinstance(d, RatFn):
        d = d.to_poly()
    assert check_unitary_over(U, SubringSpec.semi_local(d.monic()))
