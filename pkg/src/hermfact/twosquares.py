"""Sums of two squares, scalar hermitian-square factorization, enumeration.

A nonnegative rational is a norm from Q(i) iff every prime congruent to
3 mod 4 divides (numerator * denominator) to an even power; witnesses are
built from Gaussian-integer gcds (Hermite-Serret).  On polynomials, a real
psd d with roots in Q(i) and norm leading coefficient factors as d = g*g
with g over Q(i); choosing the root with positive imaginary part from each
conjugate pair makes the output canonical.  Enumerating all choices gives
one representative per unit class, which is the scalar model for the
classification of matrix factorizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import sympy
from sympy.ntheory.residue_ntheory import sqrt_mod

from .errors import (
    NotPSD,
    NotSquareFree,
    PreconditionViolated,
    RootsNotInField,
    SchemaError,
    TargetMismatch,
)
from .poly import UniPoly
from .roots import gaussian_roots, psd_check
from .scalars import RAT, Scalar, rat

# -- integer and rational two-squares ------------------------------------------


def _gauss_gcd(a: int, b: int, c: int, d: int) -> Tuple[int, int]:
    """gcd of a+bi and c+di in Z[i] (up to unit), by rounded division."""
    while c or d:
        n = c * c + d * d
        re, im = a * c + b * d, b * c - a * d
        q_re = (2 * re + n) // (2 * n)
        q_im = (2 * im + n) // (2 * n)
        a, b, c, d = c, d, a - (q_re * c - q_im * d), b - (q_re * d + q_im * c)
    return a, b


def two_squares_int(n: int) -> Optional[Tuple[int, int]]:
    """Canonical (A, B) with A >= B >= 0 and A² + B² = n, or None."""
    if n < 0:
        return None
    if n == 0:
        return (0, 0)
    a, b = 1, 0
    for p, e in sorted(sympy.factorint(n).items()):
        if p == 2:
            for _ in range(e):
                a, b = a - b, a + b
        elif p % 4 == 3:
            if e % 2:
                return None
            m = p ** (e // 2)
            a, b = a * m, b * m
        else:
            s = int(sqrt_mod(-1, p))
            u, v = _gauss_gcd(p, 0, s, 1)
            for _ in range(e):
                a, b = a * u - b * v, a * v + b * u
    a, b = abs(a), abs(b)
    return (max(a, b), min(a, b))


def rat_is_norm(q) -> bool:
    """True iff q >= 0 is a norm from Q(i), i.e. a sum of two rational squares."""
    q = rat(q)
    if q < 0:
        return False
    if q == 0:
        return True
    m = int(q.numerator) * int(q.denominator)
    return all(e % 2 == 0 for p, e in sympy.factorint(m).items() if p % 4 == 3)


def rat_two_squares(q) -> Optional[Tuple[RAT, RAT]]:
    """Canonical (x, y) with x >= y >= 0 and x² + y² = q, or None."""
    q = rat(q)
    if q < 0:
        return None
    den = int(q.denominator)
    ts = two_squares_int(int(q.numerator) * den)
    if ts is None:
        return None
    return (rat(ts[0]) / den, rat(ts[1]) / den)


def norm_element(q) -> Optional[Scalar]:
    """Canonical w in Q(i) with w.conj()*w = q, or None; w = x - iy from (x, y)."""
    ts = rat_two_squares(q)
    if ts is None:
        return None
    return Scalar(ts[0], -ts[1])


def scalar_is_norm(c: Scalar) -> bool:
    return c.is_real and rat_is_norm(c.re)


# -- the TwoSquares value ---------------------------------------------------------

KIND_COMPLEX = "complex-poly"
KIND_REAL = "real-pair"


@dataclass(frozen=True)
class TwoSquares:
    """A witness that target = g*g (complex kind) or target = a² + b² (real kind)."""

    kind: str
    target: UniPoly
    g: Optional[UniPoly] = None
    a: Optional[UniPoly] = None
    b: Optional[UniPoly] = None

    @classmethod
    def complex_poly(cls, g: UniPoly) -> "TwoSquares":
        return cls(kind=KIND_COMPLEX, target=g.star() * g, g=g)

    @classmethod
    def real_pair(cls, a: UniPoly, b: UniPoly) -> "TwoSquares":
        if not (a.is_real() and b.is_real()):
            raise PreconditionViolated("real-pair components must be real")
        return cls(kind=KIND_REAL, target=a * a + b * b, a=a, b=b)

    def __post_init__(self):
        if self.kind == KIND_COMPLEX:
            if self.g is None or self.g.star() * self.g != self.target:
                raise PreconditionViolated("g*g does not match the claimed target")
        elif self.kind == KIND_REAL:
            if self.a is None or self.b is None or self.a * self.a + self.b * self.b != self.target:
                raise PreconditionViolated("a² + b² does not match the claimed target")
        else:
            raise PreconditionViolated(f"unknown two-squares kind {self.kind!r}")

    def as_gaussian(self) -> UniPoly:
        """The Q(i) polynomial a + ib (real kind) or g (complex kind)."""
        if self.kind == KIND_COMPLEX:
            return self.g
        return self.a + self.b.scale(Scalar.i())

    def to_real_pair(self) -> "TwoSquares":
        if self.kind == KIND_REAL:
            return self
        a, b = self.g.real_imag_parts()
        return TwoSquares.real_pair(a, b)

    def __str__(self):
        if self.kind == KIND_COMPLEX:
            return f"g = {self.g}"
        return f"(a, b) = ({self.a}, {self.b})"

    def to_json(self):
        if self.kind == KIND_COMPLEX:
            return {"kind": self.kind, "g": self.g.to_json(), "target": self.target.to_json()}
        return {
            "kind": self.kind,
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "target": self.target.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "TwoSquares":
        if not isinstance(data, dict) or "kind" not in data:
            raise SchemaError("two-squares payload must be an object with a kind")
        kind = data["kind"]
        try:
            if kind == KIND_COMPLEX:
                return cls(kind=kind, target=UniPoly.from_json(data["target"]), g=UniPoly.from_json(data["g"]))
            if kind == KIND_REAL:
                return cls(
                    kind=kind,
                    target=UniPoly.from_json(data["target"]),
                    a=UniPoly.from_json(data["a"]),
                    b=UniPoly.from_json(data["b"]),
                )
        except KeyError as exc:
            raise SchemaError(f"two-squares payload missing field {exc}") from exc
        raise SchemaError(f"unknown two-squares kind {kind!r}")


# -- scalar Fejér-Riesz factorization -------------------------------------------


def _root_pairs(d: UniPoly):
    """(real roots with halved multiplicity, conjugate pairs (z im>0, mult))."""
    reals, pairs = [], []
    for datum in gaussian_roots(d):
        z, m = datum.value, datum.multiplicity
        if z.is_real:
            if m % 2:
                raise NotPSD(f"real root {z} with odd multiplicity {m}")
            reals.append((z, m // 2))
        elif z.im > 0:
            pairs.append((z, m))
    return reals, pairs


def _leading_norm_witness(d: UniPoly) -> Scalar:
    w = norm_element(d.lc().re)
    if w is None:
        raise RootsNotInField(
            f"leading coefficient {d.lc()} is not a norm from Q(i)"
        )
    return w


def scalar_fejer_riesz(d: UniPoly) -> TwoSquares:
    """g over Q(i) with g*g = d, for real psd d with roots in Q(i).

    Deterministic: real roots contribute half their multiplicity; from each
    conjugate pair the root with positive imaginary part is taken.
    """
    if d.is_zero:
        raise PreconditionViolated("cannot factor the zero polynomial")
    if not psd_check(d):
        raise NotPSD(f"not nonnegative on the real line: {d}")
    if d.is_constant:
        return TwoSquares.complex_poly(UniPoly.constant(_leading_norm_witness(d)))
    w = _leading_norm_witness(d)
    reals, pairs = _root_pairs(d)
    g = UniPoly.constant(w)
    for z, m in reals:
        g = g * UniPoly((-z, Scalar.one())) ** m
    for z, m in pairs:
        g = g * UniPoly((-z, Scalar.one())) ** m
    return TwoSquares.complex_poly(g)


# -- unit-class equivalence ----------------------------------------------------------


def _constant_ratio(g1: UniPoly, g2: UniPoly) -> Optional[Scalar]:
    """c with g2 = c * g1, or None."""
    if g1.is_zero or g2.is_zero:
        return Scalar.zero() if g1.is_zero and g2.is_zero else None
    if g1.degree() != g2.degree():
        return None
    c = g2.lc() / g1.lc()
    return c if g1.scale(c) == g2 else None


def u1_equivalent(s1: TwoSquares, s2: TwoSquares) -> bool:
    """True iff a norm-1 constant maps one complex witness onto the other."""
    if s1.target != s2.target:
        raise TargetMismatch(f"targets differ: {s1.target} vs {s2.target}")
    c = _constant_ratio(s1.as_gaussian(), s2.as_gaussian())
    return c is not None and c.has_unit_norm()


def o2_equivalent(s1: TwoSquares, s2: TwoSquares) -> bool:
    """True iff a constant rotation or reflection maps one real pair onto the other.

    On g = a + ib, rotations act as g -> ug with |u| = 1 and reflections as
    g -> u * star(g); both directions are tested exactly.
    """
    if s1.target != s2.target:
        raise TargetMismatch(f"targets differ: {s1.target} vs {s2.target}")
    g1, g2 = s1.as_gaussian(), s2.as_gaussian()
    for cand in (g1, g1.star()):
        c = _constant_ratio(cand, g2)
        if c is not None and c.has_unit_norm():
            return True
    return False


# -- class enumeration --------------------------------------------------------------


def _enumeration_pairs(d: UniPoly):
    """Conjugate root pairs of square-free psd d, sorted; errors if unusable."""
    if d.is_zero:
        raise PreconditionViolated("cannot enumerate classes of the zero polynomial")
    if not psd_check(d):
        raise NotPSD(f"not nonnegative on the real line: {d}")
    if not d.is_constant and d.squarefree_part() != d.monic():
        raise NotSquareFree(f"repeated factor in {d}")
    reals, pairs = ([], []) if d.is_constant else _root_pairs(d)
    if reals:
        # square-free + psd leaves no room for real roots (odd multiplicity)
        raise NotSquareFree(f"real root of square-free psd target {d}")
    return pairs


def enumerate_complex_scalar_classes(d: UniPoly) -> List[TwoSquares]:
    """One g per unit class of {g : g*g = d}; 2^k classes for k root pairs."""
    pairs = _enumeration_pairs(d)
    w = _leading_norm_witness(d)
    out = []
    for mask in range(1 << len(pairs)):
        g = UniPoly.constant(w)
        for j, (z, m) in enumerate(pairs):
            zz = z.conj() if (mask >> j) & 1 else z
            g = g * UniPoly((-zz, Scalar.one())) ** m
        out.append(TwoSquares.complex_poly(g))
    return out


def _normalize_real_pair(g: UniPoly, target: UniPoly) -> TwoSquares:
    # g is monic here, so a is monic of full degree; only b's sign is free.
    a, b = g.real_imag_parts()
    if not b.is_zero and b.lc().re < 0:
        b = -b
    ts = TwoSquares.real_pair(a, b)
    if ts.target != target:
        raise TargetMismatch("normalization changed the target")
    return ts


def enumerate_two_squares_real(d: UniPoly) -> List[TwoSquares]:
    """One (a, b) per orthogonal class of {a² + b² = d}; 2^(k-1) classes.

    Derived from the complex classes by identifying g with its conjugate,
    which flips every root choice at once; fixing the first pair's choice
    picks one member of each conjugate orbit.
    """
    if not d.is_constant and not d.is_monic():
        raise PreconditionViolated(f"nonconstant target must be monic: {d}")
    if d.is_constant:
        c = d.constant_term()
        if not c.is_real or c.re <= 0:
            raise NotPSD(f"constant target must be positive: {d}")
        ts = rat_two_squares(c.re)
        if ts is None:
            raise RootsNotInField(f"constant {c} is not a sum of two rational squares")
        return [TwoSquares.real_pair(UniPoly.constant(ts[0]), UniPoly.constant(ts[1]))]
    pairs = _enumeration_pairs(d)
    out = []
    for mask in range(1 << max(0, len(pairs) - 1)):
        g = UniPoly.one()
        for j, (z, m) in enumerate(pairs):
            zz = z.conj() if j > 0 and (mask >> (j - 1)) & 1 else z
            g = g * UniPoly((-zz, Scalar.one())) ** m
        out.append(_normalize_real_pair(g, d))
    return out
