"""Real-root counting, positivity tests, and exact roots over Q(i).

Positivity on the real line is decided symbolically: a real polynomial d
satisfies d(x) >= 0 for all real x iff its leading coefficient is positive
and every square-free factor occurring with odd multiplicity has no real
root (checked with Sturm chains).  Roots over Q(i) are obtained from exact
factorization into linear factors; irreducible factors of higher degree
mean the instance leaves the field and callers get RootsNotInField.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import sympy

from .errors import NonRealInput, NotPSD, PreconditionViolated, RootsNotInField
from .poly import UniPoly
from .scalars import RAT, Scalar, rat

_T = sympy.Symbol("t")


# -- sympy bridge (used only as a factorization oracle) -----------------------


def _rat_to_sympy(q):
    f = sympy.Rational(int(q.numerator), int(q.denominator))
    return f


def _sympy_to_rat(x):
    x = sympy.Rational(x)
    return rat(int(x.p)) / rat(int(x.q))


def poly_to_sympy(p: UniPoly):
    expr = sympy.Integer(0)
    for k, c in enumerate(p.coeffs):
        term = _rat_to_sympy(c.re) + sympy.I * _rat_to_sympy(c.im)
        expr += term * _T**k
    return sympy.expand(expr)


def sympy_to_poly(expr) -> UniPoly:
    poly = sympy.Poly(sympy.expand(expr), _T, domain="QQ_I")
    coeffs = []
    for k in range(poly.degree() + 1):
        c = poly.nth(k)
        re, im = c.as_real_imag()
        coeffs.append(Scalar(_sympy_to_rat(re), _sympy_to_rat(im)))
    return UniPoly(coeffs)


# -- Sturm chains over Q ------------------------------------------------------


def sturm_chain(p: UniPoly) -> List[UniPoly]:
    if not p.is_real():
        raise PreconditionViolated("Sturm chain requires a real polynomial")
    chain = [p, p.derivative()]
    while not chain[-1].is_zero:
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def _sign_at_inf(p: UniPoly, positive: bool) -> int:
    if p.is_zero:
        return 0
    lc = p.lc().re
    s = 1 if lc > 0 else -1
    if not positive and p.degree() % 2 == 1:
        s = -s
    return s


def _sign_changes(signs) -> int:
    filtered = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(filtered, filtered[1:]) if a != b)


def count_real_roots(p: UniPoly) -> int:
    """Number of distinct real roots of a nonzero real polynomial."""
    if p.is_zero:
        raise PreconditionViolated("root count of the zero polynomial")
    p = p.squarefree_part()
    if p.is_constant:
        return 0
    chain = sturm_chain(p)
    hi = _sign_changes([_sign_at_inf(q, True) for q in chain])
    lo = _sign_changes([_sign_at_inf(q, False) for q in chain])
    return lo - hi


def has_real_root(p: UniPoly) -> bool:
    return count_real_roots(p) > 0


def psd_check(d: UniPoly) -> bool:
    """Decide d(x) >= 0 for all real x, for a real polynomial d."""
    if not d.is_real():
        raise NonRealInput("psd check requires a real polynomial")
    if d.is_zero:
        return True
    if d.lc().re <= 0:
        return False
    if d.degree() % 2 == 1:
        return False
    for factor, mult in d.squarefree_decomposition():
        if mult % 2 == 1 and has_real_root(factor):
            return False
    return True


def require_psd(d: UniPoly, what: str = "polynomial") -> None:
    if not psd_check(d):
        raise NotPSD(f"{what} is not nonnegative on the real line: {d}")


# -- exact factorization and roots over Q(i) -----------------------------------


@dataclass(frozen=True)
class RootDatum:
    """A root of a polynomial over Q(i) together with its multiplicity."""

    value: Scalar
    multiplicity: int


def factor_gaussian(p: UniPoly) -> Tuple[Scalar, List[Tuple[UniPoly, int]]]:
    """Exact factorization over Q(i): (lead, [(monic irreducible, mult), ...]).

    Factors are sorted by (degree, coefficient key) so output is deterministic.
    """
    if p.is_zero:
        raise PreconditionViolated("factorization of the zero polynomial")
    if p.is_constant:
        return p.constant_term(), []
    expr = poly_to_sympy(p)
    lead_s, factors_s = sympy.factor_list(sympy.Poly(expr, _T, domain="QQ_I"))
    re, im = sympy.Rational(sympy.re(lead_s)), sympy.Rational(sympy.im(lead_s))
    lead = Scalar(_sympy_to_rat(re), _sympy_to_rat(im))
    factors = []
    for fs, mult in factors_s:
        f = sympy_to_poly(fs.as_expr())
        c = f.lc()
        if not c.is_one:
            lead = lead * c**mult
            f = f.monic()
        factors.append((f, int(mult)))
    factors.sort(key=lambda fm: fm[0].sort_key())
    return lead, factors


def factor_rational(p: UniPoly) -> Tuple[Scalar, List[Tuple[UniPoly, int]]]:
    """Exact factorization over Q, same conventions as factor_gaussian."""
    if not p.is_real():
        raise PreconditionViolated("rational factorization requires a real polynomial")
    if p.is_zero:
        raise PreconditionViolated("factorization of the zero polynomial")
    if p.is_constant:
        return p.constant_term(), []
    expr = poly_to_sympy(p)
    lead_s, factors_s = sympy.factor_list(sympy.Poly(expr, _T, domain="QQ"))
    lead = Scalar(_sympy_to_rat(sympy.Rational(lead_s)))
    factors = []
    for fs, mult in factors_s:
        f = sympy_to_poly(fs.as_expr())
        c = f.lc()
        if not c.is_one:
            lead = lead * c**mult
            f = f.monic()
        factors.append((f, int(mult)))
    factors.sort(key=lambda fm: fm[0].sort_key())
    return lead, factors


def gaussian_roots(p: UniPoly) -> List[RootDatum]:
    """All roots of p in Q(i), with multiplicity, raising if any root escapes.

    Roots are sorted by scalar key (real part, then imaginary part).
    """
    lead, factors = factor_gaussian(p)
    roots = []
    for f, mult in factors:
        if f.degree() != 1:
            raise RootsNotInField(
                f"irreducible factor of degree {f.degree()} over Q(i): {f}"
            )
        roots.append(RootDatum(-f.constant_term(), mult))
    roots.sort(key=lambda r: r.value.sort_key())
    return roots


def splits_over_gaussian(p: UniPoly) -> bool:
    """True iff every irreducible factor of p over Q(i) is linear."""
    if p.is_zero or p.is_constant:
        return True
    _, factors = factor_gaussian(p)
    return all(f.degree() == 1 for f, _ in factors)
