"""Shared hypothesis strategies and small helpers for the test suite."""

from fractions import Fraction

import hypothesis.strategies as st

from hermfact.poly import UniPoly
from hermfact.scalars import Scalar

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=12
)

nonzero_rationals = rationals.filter(lambda q: q != 0)


@st.composite
def scalars(draw, real_only=False):
    re = draw(rationals)
    im = Fraction(0) if real_only else draw(rationals)
    return Scalar(re, im)


@st.composite
def nonzero_scalars(draw, real_only=False):
    s = draw(scalars(real_only=real_only))
    if s.is_zero:
        s = s + Scalar.one()
    return s


@st.composite
def polys(draw, max_degree=5, real_only=False):
    n = draw(st.integers(min_value=0, max_value=max_degree + 1))
    return UniPoly([draw(scalars(real_only=real_only)) for _ in range(n)])


@st.composite
def nonzero_polys(draw, max_degree=5, real_only=False):
    p = draw(polys(max_degree=max_degree, real_only=real_only))
    if p.is_zero:
        p = p + UniPoly.one()
    return p


@st.composite
def gaussian_integer_scalars(draw, bound=6):
    re = draw(st.integers(min_value=-bound, max_value=bound))
    im = draw(st.integers(min_value=-bound, max_value=bound))
    return Scalar(Fraction(re), Fraction(im))
