"""Univariate polynomials and rational functions over Q(i).

Polynomials are dense coefficient tuples in the single variable t, lowest
degree first, with no trailing zero coefficients; the empty tuple is the
zero polynomial and its degree is the ``NEG_INF`` marker (so degree
comparisons behave, without abusing -1).

The involution * fixes t and conjugates coefficients; it is implemented as
:meth:`UniPoly.star`.  Rational functions keep a monic denominator coprime
to the numerator at all times.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import PreconditionViolated
from .scalars import RAT, Scalar, rat

NEG_INF = float("-inf")

_S_ZERO = Scalar.zero()
_S_ONE = Scalar.one()


def _coerce_scalar(c) -> Scalar:
    return c if isinstance(c, Scalar) else Scalar.coerce(c)


class UniPoly:
    """Dense univariate polynomial with Q(i) coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce_scalar(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls) -> "UniPoly":
        return _P_ZERO

    @classmethod
    def one(cls) -> "UniPoly":
        return _P_ONE

    @classmethod
    def t(cls) -> "UniPoly":
        return _P_T

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, c, k: int) -> "UniPoly":
        c = _coerce_scalar(c)
        if c.is_zero:
            return _P_ZERO
        return cls((_S_ZERO,) * k + (c,))

    @classmethod
    def coerce(cls, x) -> "UniPoly":
        if isinstance(x, UniPoly):
            return x
        if isinstance(x, RatFn):
            return x.to_poly()
        return cls.constant(x)

    @classmethod
    def from_roots(cls, roots: Sequence, lead=1) -> "UniPoly":
        p = cls.constant(lead)
        for z in roots:
            p = p * cls((-_coerce_scalar(z), _S_ONE))
        return p

    # -- structure ------------------------------------------------------

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0].is_one

    def is_real(self) -> bool:
        return all(c.is_real for c in self.coeffs)

    def lc(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else _S_ZERO

    def constant_term(self) -> Scalar:
        return self.coeffs[0] if self.coeffs else _S_ZERO

    def coeff(self, k: int) -> Scalar:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _S_ZERO

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1].is_one

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, RatFn):
            return RatFn(self) + other
        other = UniPoly.coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return UniPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RatFn):
            return RatFn(self) - other
        return self + (-UniPoly.coerce(other))

    def __rsub__(self, other):
        return UniPoly.coerce(other) - self

    def __neg__(self):
        return UniPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, RatFn):
            return RatFn(self) * other
        other = UniPoly.coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _P_ZERO
        out = [_S_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca.is_zero:
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return UniPoly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "UniPoly":
        c = _coerce_scalar(c)
        if c.is_zero:
            return _P_ZERO
        return UniPoly(tuple(x * c for x in self.coeffs))

    def __pow__(self, k: int) -> "UniPoly":
        if k < 0:
            raise ValueError("negative polynomial power")
        result, base = _P_ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "UniPoly":
        """Multiply by t^k."""
        if self.is_zero or k == 0:
            return self
        return UniPoly((_S_ZERO,) * k + self.coeffs)

    def divmod(self, other: "UniPoly"):
        other = UniPoly.coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return _P_ZERO, self
        quo = [_S_ZERO] * (dq + 1)
        inv_lc = other.lc().inverse()
        ob = other.coeffs
        for k in range(dq, -1, -1):
            c = rem[k + len(ob) - 1] * inv_lc
            if not c.is_zero:
                quo[k] = c
                for j, oc in enumerate(ob):
                    rem[k + j] = rem[k + j] - c * oc
        return UniPoly(quo), UniPoly(rem[: len(ob) - 1])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __truediv__(self, other):
        if isinstance(other, RatFn):
            return RatFn(self) / other
        if isinstance(other, (Scalar, int)) or (
            isinstance(other, UniPoly) and other.is_constant
        ):
            c = other.constant_term() if isinstance(other, UniPoly) else _coerce_scalar(other)
            return self.scale(c.inverse())
        return RatFn(self, UniPoly.coerce(other))

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise PreconditionViolated(f"inexact polynomial division by {other}")
        return q

    def divides(self, other: "UniPoly") -> bool:
        if self.is_zero:
            return other.is_zero
        return other.divmod(self)[1].is_zero

    # -- involution, calculus, evaluation ---------------------------------

    def star(self) -> "UniPoly":
        """Coefficient-wise conjugation; t is fixed."""
        if self.is_real():
            return self
        return UniPoly(tuple(c.conj() for c in self.coeffs))

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(c * k for k, c in enumerate(self.coeffs) if k))

    def __call__(self, z):
        z = _coerce_scalar(z) if not isinstance(z, Scalar) else z
        acc = _S_ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def real_imag_parts(self):
        """p = a + i*b with a, b real polynomials."""
        a = UniPoly(tuple(Scalar(c.re) for c in self.coeffs))
        b = UniPoly(tuple(Scalar(c.im) for c in self.coeffs))
        return a, b

    # -- normalization, gcd ------------------------------------------------

    def monic(self) -> "UniPoly":
        if self.is_zero or self.is_monic():
            return self
        return self.scale(self.lc().inverse())

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, UniPoly.coerce(other)
        while not b.is_zero:
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: "UniPoly"):
        """(g, u, v) with u*self + v*other = g, g monic (or zero)."""
        other = UniPoly.coerce(other)
        r0, r1 = self, other
        s0, s1 = _P_ONE, _P_ZERO
        t0, t1 = _P_ZERO, _P_ONE
        while not r1.is_zero:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero:
            return _P_ZERO, _P_ZERO, _P_ZERO
        c = r0.lc().inverse()
        return r0.scale(c), s0.scale(c), t0.scale(c)

    def lcm(self, other: "UniPoly") -> "UniPoly":
        other = UniPoly.coerce(other)
        if self.is_zero or other.is_zero:
            return _P_ZERO
        return (self * other).exact_div(self.gcd(other)).monic()

    def squarefree_decomposition(self):
        """Yun's algorithm: [(f1, 1), (f2, 2), ...] with self = lc * prod fi^i.

        The fi are monic, square-free, pairwise coprime; trivial factors are
        omitted.  Requires characteristic zero (always true here).
        """
        if self.is_zero:
            raise PreconditionViolated("square-free decomposition of zero")
        out = []
        p = self.monic()
        if p.is_constant:
            return out
        d = p.derivative()
        a = p.gcd(d)
        b = p.exact_div(a)
        c = d.exact_div(a)
        k = 1
        while True:
            w = c - b.derivative()
            f = b.gcd(w)
            if not f.is_constant:
                out.append((f, k))
            b2 = b.exact_div(f)
            if b2.is_constant:
                break
            b = b2
            c = w.exact_div(f)
            k += 1
        return out

    def squarefree_part(self) -> "UniPoly":
        """Monic product of the distinct irreducible factors."""
        if self.is_zero:
            return _P_ZERO
        if self.is_constant:
            return _P_ONE
        return self.monic().exact_div(self.monic().gcd(self.derivative()))

    def sqrt_exact(self):
        """s with s*s = self over Q(i), or None; s normalized to monic * sqrt(lc)."""
        if self.is_zero:
            return _P_ZERO
        deg = self.degree()
        if deg % 2:
            return None
        lead = self.lc().sqrt()
        if lead is None:
            return None
        half = deg // 2
        cs = [_S_ZERO] * (half + 1)
        cs[half] = lead
        for k in range(half - 1, -1, -1):
            acc = self.coeff(k + half)
            for j in range(k + 1, half):
                if k + half - j <= half:
                    acc = acc - cs[j] * cs[k + half - j]
            cs[k] = acc / (lead * 2)
        s = UniPoly(cs)
        return s if s * s == self else None

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, RatFn):
            return RatFn(self) == other
        if isinstance(other, (Scalar, int)):
            return self == UniPoly.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def sort_key(self):
        return (len(self.coeffs), tuple(c.sort_key() for c in self.coeffs))

    def __bool__(self):
        return not self.is_zero

    # -- rendering ------------------------------------------------------------

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero:
                continue
            if k == 0:
                parts.append(f"{c}")
            else:
                cs = "" if c.is_one else f"({c})*"
                parts.append(f"{cs}t^{k}" if k > 1 else f"{cs}t")
        return " + ".join(parts)

    # -- serialization -----------------------------------------------------------

    def to_json(self):
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "UniPoly":
        if not isinstance(data, list):
            from .errors import SchemaError

            raise SchemaError(f"polynomial payload must be a list, got {data!r}")
        return cls(tuple(Scalar.from_json(c) for c in data))


_P_ZERO = UniPoly(())
_P_ONE = UniPoly((_S_ONE,))
_P_T = UniPoly((_S_ZERO, _S_ONE))


def poly_from_ints(coeffs: Sequence) -> UniPoly:
    return UniPoly(tuple(Scalar(rat(c)) if not isinstance(c, Scalar) else c for c in coeffs))


class RatFn:
    """Quotient of polynomials; denominator monic and coprime to numerator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = UniPoly.coerce(num)
        den = _P_ONE if den is None else UniPoly.coerce(den)
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            den = _P_ONE
        else:
            g = num.gcd(den)
            if not g.is_one:
                num, den = num.exact_div(g), den.exact_div(g)
            c = den.lc()
            if not c.is_one:
                num, den = num.scale(c.inverse()), den.scale(c.inverse())
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFn is immutable")

    @classmethod
    def coerce(cls, x) -> "RatFn":
        if isinstance(x, RatFn):
            return x
        return cls(UniPoly.coerce(x))

    @classmethod
    def zero(cls) -> "RatFn":
        return _R_ZERO

    @classmethod
    def one(cls) -> "RatFn":
        return _R_ONE

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_one

    @property
    def is_constant(self) -> bool:
        return self.den.is_one and self.num.is_constant

    def is_real(self) -> bool:
        return self.num.is_real() and self.den.is_real()

    def to_poly(self) -> UniPoly:
        if not self.den.is_one:
            raise PreconditionViolated(f"{self} is not a polynomial")
        return self.num

    def constant_value(self) -> Scalar:
        if not self.is_constant:
            raise PreconditionViolated(f"{self} is not constant")
        return self.num.constant_term()

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = RatFn.coerce(other)
        return RatFn(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-RatFn.coerce(other))

    def __rsub__(self, other):
        return RatFn.coerce(other) - self

    def __neg__(self):
        out = object.__new__(RatFn)
        object.__setattr__(out, "num", -self.num)
        object.__setattr__(out, "den", self.den)
        return out

    def __mul__(self, other):
        other = RatFn.coerce(other)
        return RatFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFn.coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RatFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFn.coerce(other) / self

    def inverse(self) -> "RatFn":
        return _R_ONE / self

    def __pow__(self, k: int) -> "RatFn":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFn(self.num**k, self.den**k)

    def star(self) -> "RatFn":
        return RatFn(self.num.star(), self.den.star())

    def derivative(self) -> "RatFn":
        return RatFn(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __call__(self, z):
        d = self.den(z)
        if d.is_zero:
            raise ZeroDivisionError(f"pole at {z}")
        return self.num(z) / d

    # -- comparisons ---------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (RatFn, UniPoly, Scalar, int)):
            other = RatFn.coerce(other)
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        return f"RatFn({self})"

    def __str__(self):
        if self.den.is_one:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self):
        if self.den.is_one:
            return self.num.to_json()
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data) -> "RatFn":
        if isinstance(data, dict) and "num" in data:
            return cls(UniPoly.from_json(data["num"]), UniPoly.from_json(data["den"]))
        return cls(UniPoly.from_json(data))


_R_ZERO = RatFn(_P_ZERO)
_R_ONE = RatFn(_P_ONE)


def lcd(items) -> UniPoly:
    """Least common denominator (monic) of RatFn items."""
    out = _P_ONE
    for x in items:
        x = RatFn.coerce(x)
        out = out.lcm(x.den)
    return out
