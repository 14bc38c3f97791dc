"""Gaussian-rational scalar arithmetic."""

from fractions import Fraction

import pytest
from hypothesis import given

from hermfact.errors import SchemaError
from hermfact.scalars import Scalar, rat

from .util import nonzero_scalars, scalars


def test_constants():
    assert Scalar.zero().is_zero
    assert Scalar.one().is_one
    assert Scalar.i() * Scalar.i() == -Scalar.one()


def test_parse_strings():
    assert rat("3/4") == Fraction(3, 4)
    assert rat("-7") == -7
    assert Scalar.coerce("2/3") == Scalar(Fraction(2, 3))
    with pytest.raises(SchemaError):
        rat("not-a-number")


@given(scalars(), scalars(), scalars())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@given(nonzero_scalars())
def test_inverse(a):
    assert a * a.inverse() == Scalar.one()


@given(scalars(), scalars())
def test_conjugation_is_ring_hom(a, b):
    assert (a + b).conj() == a.conj() + b.conj()
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.conj().conj() == a


@given(scalars(), scalars())
def test_norm_multiplicative(a, b):
    assert (a * b).norm() == a.norm() * b.norm()
    assert a.norm() == (a * a.conj()).re


@given(scalars())
def test_square_root_of_squares(a):
    r = (a * a).sqrt()
    assert r is not None
    assert r * r == a * a


def test_sqrt_absent():
    # 2 = (a+bi)^2 forces ab = 0 and a^2 - b^2 = 2, impossible over Q
    assert Scalar(Fraction(2)).sqrt() is None
    assert Scalar(Fraction(3)).sqrt() is None


def test_sqrt_examples():
    minus_one = Scalar(Fraction(-1))
    assert minus_one.sqrt() * minus_one.sqrt() == minus_one
    two_i = Scalar(Fraction(0), Fraction(2))  # 2i = (1+i)^2
    assert two_i.sqrt() * two_i.sqrt() == two_i


@given(scalars())
def test_json_round_trip(a):
    assert Scalar.from_json(a.to_json()) == a


def test_json_rejects_garbage():
    with pytest.raises(SchemaError):
        Scalar.from_json({"real": "1"})
    with pytest.raises(SchemaError):
        Scalar.from_json([1, 2])


@given(scalars(), scalars())
def test_hash_eq_consistency(a, b):
    if a == b:
        assert hash(a) == hash(b)


def test_real_ordering_key():
    xs = [Scalar(Fraction(1)), Scalar(Fraction(0), Fraction(1)), Scalar(Fraction(-2))]
    xs.sort(key=lambda s: s.sort_key())
    assert xs[0] == Scalar(Fraction(-2))
