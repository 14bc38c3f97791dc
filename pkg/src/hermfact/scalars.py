"""Exact scalars: rationals and Gaussian rationals.

A :class:`Scalar` is an element of Q(i) stored as a pair of exact rational
components.  Components are always kept reduced with positive denominator
(the rational backend guarantees this).  A scalar with zero imaginary part
serializes as the plain string ``"p/q"``; anything else serializes as
``{"re": ..., "im": ...}``.

The rational backend is ``gmpy2.mpq`` when available and
``fractions.Fraction`` otherwise; both reduce eagerly and hash/compare
consistently with the numeric tower.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from .errors import SchemaError

try:
    from gmpy2 import mpq as _mpq

    def RAT(a=0, b=1):
        return _mpq(a, b)

    _RAT_TYPES = (type(_mpq(0)), Fraction)
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    RAT = Fraction
    _RAT_TYPES = (Fraction,)

RatLike = Union[int, Fraction, "Scalar"]

_RAT_ZERO = RAT(0)
_RAT_ONE = RAT(1)


def rat(x) -> "RAT":
    """Coerce an int, Fraction, mpq, or 'p/q' string to the rational backend."""
    if isinstance(x, _RAT_TYPES):
        return RAT(x.numerator, x.denominator)
    if isinstance(x, int):
        return RAT(x)
    if isinstance(x, str):
        try:
            if "/" in x:
                p, q = x.split("/")
                return RAT(int(p.strip()), int(q.strip()))
            return RAT(int(x.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational literal {x!r}") from exc
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


def rat_str(q) -> str:
    """Render a rational as 'p' or 'p/q' with positive denominator."""
    n, d = q.numerator, q.denominator
    return f"{n}" if d == 1 else f"{n}/{d}"


def rat_sqrt(q):
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    n, d = int(q.numerator), int(q.denominator)
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return RAT(rn, rd)


class Scalar:
    """An element of Q(i) with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is type(_RAT_ZERO) else rat(re))
        object.__setattr__(self, "im", im if type(im) is type(_RAT_ZERO) else rat(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "Scalar":
        return _ZERO

    @classmethod
    def one(cls) -> "Scalar":
        return _ONE

    @classmethod
    def i(cls) -> "Scalar":
        return _I

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, str, Fraction, *_RAT_TYPES)):
            return cls(rat(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    @classmethod
    def _try_coerce(cls, x):
        try:
            return cls.coerce(x)
        except TypeError:
            return None

    # -- predicates ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    @property
    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    def is_integerlike(self) -> bool:
        return self.im == 0 and self.re.denominator == 1

    # -- involution and norm -------------------------------------------

    def conj(self) -> "Scalar":
        if not self.im:
            return self
        return Scalar(self.re, -self.im)

    def norm(self):
        """N(a + bi) = a^2 + b^2 as a rational."""
        return self.re * self.re + self.im * self.im

    def has_unit_norm(self) -> bool:
        return self.norm() == 1

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        other = Scalar._try_coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = Scalar._try_coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        other = Scalar._try_coerce(other)
        if other is None:
            return NotImplemented
        if not self.im and not other.im:
            return Scalar(self.re * other.re)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Scalar.coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("scalar division by zero")
        if not other.im:
            return Scalar(self.re / other.re, self.im / other.re)
        n = other.norm()
        return Scalar(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def inverse(self) -> "Scalar":
        return _ONE / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = _ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- square roots ----------------------------------------------------

    def sqrt(self):
        """Exact square root inside Q(i), or None if it does not exist."""
        if self.is_zero:
            return _ZERO
        if not self.im:
            r = rat_sqrt(self.re)
            if r is not None:
                return Scalar(r)
            r = rat_sqrt(-self.re)
            return None if r is None else Scalar(0, r)
        n = rat_sqrt(self.norm())
        if n is None:
            return None
        u2 = (self.re + n) / 2
        u = rat_sqrt(u2)
        if u is None or not u:
            return None
        v = self.im / (2 * u)
        cand = Scalar(u, v)
        return cand if cand * cand == self else None

    # -- comparisons, ordering keys, hashing -----------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction, *_RAT_TYPES)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self):
        return (self.re, self.im)

    def __bool__(self):
        return not self.is_zero

    # -- rendering -------------------------------------------------------

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if not self.im:
            return rat_str(self.re)
        if not self.re:
            return f"{rat_str(self.im)}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{rat_str(self.re)}{sign}{rat_str(abs(self.im))}*i"

    # -- serialization -----------------------------------------------------

    def to_json(self):
        if not self.im:
            return rat_str(self.re)
        return {"re": rat_str(self.re), "im": rat_str(self.im)}

    @classmethod
    def from_json(cls, data) -> "Scalar":
        if isinstance(data, str):
            return cls(rat(data))
        if isinstance(data, int):
            return cls(rat(data))
        if isinstance(data, dict):
            extra = set(data) - {"re", "im"}
            if extra:
                raise SchemaError(f"unknown scalar fields {sorted(extra)}")
            return cls(rat(data.get("re", 0)), rat(data.get("im", 0)))
        raise SchemaError(f"bad scalar payload {data!r}")


_ZERO = Scalar(0)
_ONE = Scalar(1)
_I = Scalar(0, 1)
