"""Semi-local rings: membership, residues, Hensel lifting, diagonalization."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from hermfact.errors import (
    Degenerate,
    PreconditionViolated,
    ResidueFieldNotQuadraticallyClosed,
    SearchExhausted,
)
from hermfact.matrix import COMPLEX, REAL, PolyMatrix, smith_normal_form
from hermfact.poly import RatFn, UniPoly
from hermfact.scalars import Scalar
from hermfact.semilocal import (
    SemiLocalRing,
    diagonalize_semilocal,
    pivot_search,
    poly_crt,
    quad_form,
)

from .util import rationals

T = UniPoly.t()
ONE = UniPoly.one()
ZERO = UniPoly.zero()
I = Scalar.i()


def const(x):
    return UniPoly.constant(Scalar.coerce(x))


def ring_of(*factors, field=REAL):
    m = ONE
    for f in factors:
        m = m * f
    return SemiLocalRing(m, field)


# -- construction -------------------------------------------------------------


class TestRingConstruction:
    def test_modulus_is_normalized_monic(self):
        r = SemiLocalRing(T.scale(Scalar.coerce(3)))
        assert r.modulus == T

    def test_primes_are_the_monic_irreducible_factors(self):
        r = ring_of(T * T, T * T + 1)
        assert sorted(p.sort_key() for p in r.primes) == sorted(
            p.sort_key() for p in [T, T * T + 1]
        )

    def test_zero_modulus_rejected(self):
        with pytest.raises(PreconditionViolated):
            SemiLocalRing(ZERO)

    def test_real_lane_rejects_complex_modulus(self):
        with pytest.raises(PreconditionViolated):
            SemiLocalRing(T - UniPoly.constant(I), REAL)

    def test_complex_lane_accepts_gaussian_modulus(self):
        r = SemiLocalRing((T - UniPoly.constant(I)) * (T + UniPoly.constant(I)), COMPLEX)
        assert len(r.primes) == 2

    def test_constant_modulus_has_no_primes(self):
        r = SemiLocalRing(const(5))
        assert not r.primes
        assert r.is_unit(RatFn(ONE, T))  # everything is a unit


# -- membership and valuation ---------------------------------------------------


class TestMembership:
    def test_polynomials_always_belong(self):
        r = ring_of(T)
        assert r.contains(T * T + T + 1)

    def test_pole_at_prime_excluded(self):
        r = ring_of(T)
        assert not r.contains(RatFn(ONE, T))

    def test_pole_away_from_modulus_allowed(self):
        r = ring_of(T)
        assert r.contains(RatFn(T * T * T, T + 1))

    def test_unit_requires_coprime_numerator(self):
        r = ring_of(T)
        assert not r.is_unit(RatFn(T))
        assert r.is_unit(RatFn(T + 1))
        assert not r.is_unit(RatFn.zero())

    def test_valuation_examples(self):
        r = ring_of(T)
        assert r.valuation(RatFn(T * T * T, T + 1), T) == 3
        assert r.valuation(RatFn(ONE, T * T), T) == -2
        assert r.valuation(RatFn(T + 1), T) == 0

    def test_valuation_of_zero_undefined(self):
        r = ring_of(T)
        with pytest.raises(PreconditionViolated):
            r.valuation(RatFn.zero(), T)

    @given(k=st.integers(min_value=-4, max_value=4), c=rationals)
    def test_membership_iff_no_negative_valuation(self, k, c):
        r = ring_of(T, T - 1)
        f = RatFn(T + const(2 + c if c != -2 else 3)) * RatFn(T) ** k
        assert r.contains(f) == all(r.valuation(f, p) >= 0 for p in r.primes)


class TestModulusPart:
    def test_splits_off_monic_prime_powers(self):
        r = ring_of(T)
        f = RatFn((T * T).scale(Scalar.coerce(2)) * (T + 1), T * T + 1)
        part = r.modulus_part(f)
        assert part == RatFn(T * T)
        assert part * r.unit_part(f) == f

    def test_negative_powers_go_to_the_denominator(self):
        r = ring_of(T)
        f = RatFn(T + 1, T * T * T)
        assert r.modulus_part(f) == RatFn(ONE, T * T * T)

    def test_unit_part_is_a_unit(self):
        r = ring_of(T, T - 1)
        f = RatFn((T * (T - 1) ** 2).scale(Scalar.coerce(Fraction(7, 3))), (T + 1) ** 3)
        assert r.is_unit(r.unit_part(f))


class TestReduceMod:
    def test_inverts_the_denominator(self):
        r = ring_of(T)
        f = RatFn(ONE, T + 1)  # 1/(1+t) = 1 - t + t^2 - ... mod t^3
        assert r.reduce_mod(f, T ** 3) == UniPoly([1, -1, 1])

    def test_noninvertible_denominator_rejected(self):
        r = ring_of(T)
        with pytest.raises(PreconditionViolated):
            r.reduce_mod(RatFn(ONE, T), T ** 2)


# -- residue fields and Hensel lifting ---------------------------------------------


class TestResidueSqrt:
    def test_linear_prime_evaluates(self):
        r = ring_of(T - 4)
        s = r.residue_sqrt(RatFn(T), T - 4)  # sqrt(4) in the residue field
        assert s is not None and (s * s - T) % (T - 4) == ZERO

    def test_linear_prime_imaginary_root_rejected_on_real_lane(self):
        r = ring_of(T)
        assert r.residue_sqrt(RatFn(const(-1)), T) is None

    def test_linear_prime_imaginary_root_found_on_complex_lane(self):
        r = SemiLocalRing(T, COMPLEX)
        s = r.residue_sqrt(RatFn(const(-1)), T)
        assert s is not None and (s * s + 1) % T == ZERO

    def test_quadratic_prime_sqrt_of_minus_one(self):
        r = ring_of(T * T + 1)
        s = r.residue_sqrt(RatFn(const(-1)), T * T + 1)
        assert s == T  # t^2 = -1 in the residue field

    def test_quadratic_prime_generic_element(self):
        p = T * T - 2
        r = ring_of(p)
        s = r.residue_sqrt(RatFn(T.scale(Scalar.coerce(2)) + 3), p)
        assert s == T + 1  # (t+1)^2 = t^2 + 2t + 1 = 2t + 3 mod t^2 - 2

    def test_quadratic_prime_nonsquare(self):
        p = T * T - 2
        r = ring_of(p)
        assert r.residue_sqrt(RatFn(T + 3), p) is None

    def test_cubic_prime_rejected(self):
        p = T ** 3 - 2
        r = ring_of(p)
        with pytest.raises(ResidueFieldNotQuadraticallyClosed):
            r.residue_sqrt(RatFn(T), p)


class TestHenselSqrt:
    def test_lift_to_high_precision(self):
        r = ring_of(T)
        f = RatFn(T * T + 1)
        s = r.hensel_sqrt(f, T, 7)
        assert s is not None
        assert (s * s - (T * T + 1)) % T ** 7 == ZERO

    def test_denominators_are_inverted_before_lifting(self):
        r = ring_of(T)
        f = RatFn(T + 4, T + 1)
        s = r.hensel_sqrt(f, T, 5)
        assert s is not None
        assert (s * s * (T + 1) - (T + 4)) % T ** 5 == ZERO

    def test_nonsquare_residue_returns_none(self):
        r = ring_of(T)
        assert r.hensel_sqrt(RatFn(const(2)), T, 3) is None  # sqrt 2 irrational

    def test_nonunit_rejected(self):
        r = ring_of(T)
        with pytest.raises(PreconditionViolated):
            r.hensel_sqrt(RatFn(T), T, 3)

    @given(
        a0=rationals.filter(lambda q: q != 0),
        a1=rationals,
        k=st.integers(min_value=1, max_value=6),
    )
    @settings(max_examples=40)
    def test_lift_of_a_perfect_square_matches(self, a0, a1, k):
        r = ring_of(T)
        g = UniPoly([a0, a1])
        s = r.hensel_sqrt(RatFn(g * g), T, k)
        assert s is not None
        assert (s * s - g * g) % T ** k == ZERO


class TestPolyCrt:
    def test_two_linear_congruences(self):
        x = poly_crt([(const(1), T), (const(2), T - 1)])
        assert x % T == ONE and x % (T - 1) == const(2)

    def test_prime_power_moduli(self):
        x = poly_crt([(T + 1, T * T), (ZERO, (T - 1) ** 2)])
        assert x % (T * T) == T + 1
        assert x % ((T - 1) ** 2) == ZERO

    def test_noncoprime_moduli_rejected(self):
        with pytest.raises(PreconditionViolated):
            poly_crt([(ONE, T), (ZERO, T * T)])


# -- pivot search -----------------------------------------------------------------


class TestPivotSearch:
    def test_offdiagonal_needs_a_mixed_vector(self):
        M = PolyMatrix([[ZERO, ONE], [ONE, ZERO]], REAL)
        ring = ring_of(T)
        v = pivot_search(M, ring)
        assert list(v) == [ONE, ONE]
        assert quad_form(M, v, v) == RatFn(const(2))

    def test_unit_diagonal_slot_wins(self):
        M = PolyMatrix.diagonal([T, ONE], REAL)
        ring = ring_of(T)
        v = pivot_search(M, ring)
        assert list(v) == [ZERO, ONE]
        assert quad_form(M, v, v) == RatFn.one()

    def test_diagonal_entry_coprime_to_modulus(self):
        M = PolyMatrix([[T, ONE], [ONE, T]], REAL)
        ring = ring_of(T * T - 1)
        v = pivot_search(M, ring)
        assert list(v) == [ONE, ZERO]
        assert quad_form(M, v, v) == RatFn(T)

    def test_every_entry_divisible_by_a_prime_rejected(self):
        M = PolyMatrix([[T, T], [T, T]], REAL)
        ring = ring_of(T, T + 1)
        with pytest.raises(PreconditionViolated):
            pivot_search(M, ring)

    def test_value_is_always_a_unit(self):
        rng = random.Random(7)
        ring = ring_of(T, T - 2)
        for _ in range(10):
            grid = [[const(rng.randint(-3, 3)) for _ in range(2)] for _ in range(2)]
            M = PolyMatrix(grid, REAL) + PolyMatrix(grid, REAL).star()
            M = M + PolyMatrix.diagonal([T + 1, T * T + 1], REAL)
            try:
                v = pivot_search(M, ring)
            except (PreconditionViolated, SearchExhausted):
                continue
            assert ring.is_unit(quad_form(M, v, v))


# -- diagonalization ----------------------------------------------------------------


class TestDiagonalizeSemilocal:
    def test_already_diagonal_with_chain(self):
        M = PolyMatrix.diagonal([T, T * T], REAL).to_ratfn()
        ring = ring_of(T ** 3)
        Tr, diag = diagonalize_semilocal(M, ring)
        assert Tr == PolyMatrix.identity(2, REAL)
        assert diag == [RatFn(T), RatFn(T * T)]

    def test_worked_two_by_two(self):
        M = PolyMatrix([[T.scale(Scalar.coerce(2)), T], [T, T]], REAL)
        ring = ring_of(T * T)
        Tr, diag = diagonalize_semilocal(M, ring)
        assert diag == [RatFn(T.scale(Scalar.coerce(2))), RatFn(T) * RatFn.coerce(Fraction(1, 2))]
        assert Tr.star() * M.to_ratfn() * Tr == PolyMatrix.diagonal(diag, REAL)

    def test_complex_unit_diagonal(self):
        M = PolyMatrix(
            [[T * T + 1, UniPoly.constant(I)], [UniPoly.constant(-I), ONE]], COMPLEX
        )
        ring = SemiLocalRing(T * T, COMPLEX)
        Tr, diag = diagonalize_semilocal(M, ring)
        # the constant-valued pivot (0, 1) wins, leaving the clean Smith diagonal
        assert diag == [RatFn.one(), RatFn(T * T)]
        assert Tr.star() * M.to_ratfn() * Tr == PolyMatrix.diagonal(diag, COMPLEX)

    def test_singular_matrix_degenerate(self):
        M = PolyMatrix([[T, T], [T, T]], REAL)
        with pytest.raises(Degenerate):
            diagonalize_semilocal(M, ring_of(T))

    def test_transform_and_inverse_live_in_the_ring(self):
        M = PolyMatrix([[T.scale(Scalar.coerce(2)), T], [T, T]], REAL)
        ring = ring_of(T * T)
        Tr, _ = diagonalize_semilocal(M, ring)
        for A in (Tr, Tr.inverse()):
            assert all(
                ring.contains(RatFn.coerce(A[i, j]))
                for i in range(A.rows)
                for j in range(A.cols)
            )

    def test_monic_parts_match_smith_invariant_factors(self):
        rng = random.Random(21)
        for _ in range(6):
            D = PolyMatrix.diagonal([ONE, T, T * (T * T + rng.randint(1, 3))], REAL)
            S = _random_unimodular(rng, 3)
            M = S.star() * D * S
            det = UniPoly.coerce(M.det()).monic()
            ring = SemiLocalRing(det)
            _, diag = diagonalize_semilocal(M.to_ratfn(), ring)
            monic_parts = [ring.modulus_part(b).to_poly() for b in diag]
            assert monic_parts == list(smith_normal_form(M).invariant_factors)


def _random_unimodular(rng, n):
    """Product of elementary shears: determinant one, polynomial entries."""
    A = PolyMatrix.identity(n, REAL)
    for _ in range(4):
        i, j = rng.sample(range(n), 2)
        grid = [
            [
                ONE if r == c else (UniPoly([rng.randint(-2, 2), rng.randint(-1, 1)]) if (r, c) == (i, j) else ZERO)
                for c in range(n)
            ]
            for r in range(n)
        ]
        A = A * PolyMatrix(grid, REAL)
    return A
