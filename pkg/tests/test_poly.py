"""Univariate polynomial and rational-function arithmetic."""

import pytest
from hypothesis import given

from hermfact.errors import PreconditionViolated
from hermfact.poly import NEG_INF, RatFn, UniPoly, lcd, poly_from_ints
from hermfact.scalars import Scalar

from .util import nonzero_polys, polys, scalars

T = UniPoly.t()


def test_normalization_and_degree():
    assert UniPoly([1, 2, 0, 0]).coeffs == UniPoly([1, 2]).coeffs
    assert UniPoly([]).degree() == NEG_INF
    assert UniPoly([0, 0]).is_zero
    assert T.degree() == 1
    assert (T**7).degree() == 7


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)


@given(polys(), nonzero_polys())
def test_division_identity(p, q):
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.is_zero or rem.degree() < q.degree()


@given(polys(), polys())
def test_gcd_divides(p, q):
    g = p.gcd(q)
    if not g.is_zero:
        assert g.divides(p) and g.divides(q)


@given(polys(), polys())
def test_xgcd_identity(p, q):
    g, u, v = p.xgcd(q)
    assert u * p + v * q == g


@given(polys(), polys())
def test_star_is_ring_involution(p, q):
    assert (p * q).star() == p.star() * q.star()
    assert (p + q).star() == p.star() + q.star()
    assert p.star().star() == p


@given(nonzero_polys())
def test_squarefree_decomposition_recombines(p):
    parts = p.squarefree_decomposition()
    prod = UniPoly.constant(p.lc())
    for f, mult in parts:
        assert f.is_monic()
        prod = prod * f**mult
    assert prod == p
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            assert parts[i][0].gcd(parts[j][0]).is_one


def test_squarefree_known():
    p = T**2 * (T**2 + 1) ** 3
    assert p.squarefree_decomposition() == [(T, 2), (T**2 + 1, 3)]
    assert p.squarefree_part() == T * (T**2 + 1)


@given(polys(), scalars())
def test_eval_matches_remainder(p, z):
    rem = p % UniPoly([-z, Scalar.one()])
    assert rem.constant_term() == p(z)


@given(polys(max_degree=3))
def test_sqrt_exact_of_squares(p):
    s = (p * p).sqrt_exact()
    assert s is not None
    assert s * s == p * p


def test_sqrt_exact_absent():
    assert (T**2 - 2).sqrt_exact() is None
    assert (T**3).sqrt_exact() is None
    assert (T**2 + 1).sqrt_exact() is None


def test_exact_div_raises_on_remainder():
    with pytest.raises(PreconditionViolated):
        (T + 1).exact_div(T)


@given(polys(max_degree=4), nonzero_polys(max_degree=3), nonzero_polys(max_degree=3))
def test_ratfn_invariants(a, b, c):
    f = RatFn(a, b) / RatFn.coerce(c)
    assert f.den.is_monic()
    assert f.num.gcd(f.den).is_one or f.is_zero
    g = f * RatFn(b * c, UniPoly.one())
    assert g.is_polynomial or not (b * c).divides(a) is None


@given(polys(max_degree=3), nonzero_polys(max_degree=2), polys(max_degree=3), nonzero_polys(max_degree=2))
def test_ratfn_field_ops(a, b, c, d):
    f, g = RatFn(a, b), RatFn(c, d)
    assert f + g - g == f
    if not g.is_zero:
        assert (f / g) * g == f


def test_lcd():
    f = RatFn(UniPoly.one(), T)
    g = RatFn(UniPoly.one(), T**2 + 1)
    assert lcd([f, g]) == T * (T**2 + 1)


def test_from_ints_and_str():
    p = poly_from_ints([1, 0, 2])
    assert str(p) == "(2)*t^2 + 1"


@given(polys())
def test_json_round_trip(p):
    assert UniPoly.from_json(p.to_json()) == p
