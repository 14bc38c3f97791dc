"""Witt-style congruence steps over semi-local rings.

The diagonal form produced by ``diagonalize_semilocal`` has entries
(invariant factor) x (unit).  This module removes the units: a conic solver
representing 1 by binary forms <a, b>, exact arithmetic in quadratic
extensions Q(t)[sqrt(c)] with a denominator-clearing construction that moves
field solutions into the ring, the local Witt step <au, bv> ~ <a, buv>, and
the resulting congruence of a hermitian psd matrix with its monic Smith
normal form (up to reported positive rational constants in exact mode).
"""

from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence, Tuple

from .errors import (
    Degenerate,
    DivisibilityViolated,
    NormNotUnit,
    NotPSD,
    PreconditionViolated,
    ResidueFieldNotQuadraticallyClosed,
    RootsNotInField,
    SearchExhausted,
    VerificationFailure,
)
from .matrix import COMPLEX, REAL, PolyMatrix
from .poly import RatFn, UniPoly
from .roots import has_real_root, psd_check
from .scalars import Scalar, rat
from .semilocal import (
    SemiLocalRing,
    _coefficient_sequence,
    _entry_profile,
    _poly_valuation,
    diagonalize_semilocal,
    poly_crt,
)
from .twosquares import norm_element, rat_is_norm, scalar_fejer_riesz, two_squares_int

CONIC_MAX_CANDIDATES = 20_000


# -- square-class bookkeeping ----------------------------------------------------


def _squarefree_rat_kernel(q) -> object:
    """Square-free rational in the same square class as q (sign preserved)."""
    import sympy

    q = rat(q)
    if not q:
        raise PreconditionViolated("zero has no square class")
    sign = -1 if q < 0 else 1
    m = abs(q.numerator * q.denominator)
    k = 1
    for p, exp in sympy.factorint(int(m)).items():
        if exp % 2:
            k *= int(p)
    return rat(sign * k)


def _nonnorm_kernel(q) -> object:
    """Product of the primes = 3 mod 4 odd in q; q divided by it is a norm."""
    import sympy

    q = rat(q)
    if q <= 0:
        raise PreconditionViolated("norm kernels are defined for positive rationals")
    m = q.numerator * q.denominator
    k = 1
    for p, exp in sympy.factorint(int(m)).items():
        if exp % 2 and int(p) % 4 == 3:
            k *= int(p)
    return rat(k)


def _ratfn_sqrt(f: RatFn) -> Optional[RatFn]:
    """Exact square root with positive leading coefficient, or None."""
    sn = f.num.sqrt_exact()
    if sn is None:
        return None
    sd = f.den.sqrt_exact()
    if sd is None:
        return None
    return RatFn(sn, sd)


def square_split(f) -> Tuple[object, UniPoly, RatFn]:
    """f = q * K * S**2: q square-free rational, K monic square-free, S > 0 lead."""
    f = RatFn.coerce(f)
    if f.is_zero:
        raise PreconditionViolated("cannot square-split zero")
    if not f.is_real():
        raise PreconditionViolated("square split requires a real function")
    K = UniPoly.one()
    for part, mult in f.num.monic().squarefree_decomposition():
        if mult % 2:
            K = K * part
    for part, mult in f.den.squarefree_decomposition():
        if mult % 2:
            K = K * part
    q = _squarefree_rat_kernel(f.num.lc().re)  # denominator is monic
    S = _ratfn_sqrt(f / RatFn(K.scale(Scalar.coerce(q))))
    if S is None:
        raise VerificationFailure("square part extraction failed")
    return q, K, S


def _require_psd_fn(f: RatFn, what: str) -> None:
    if not f.is_real() or not psd_check(f.num * f.den):
        raise NotPSD(f"{what} is not nonnegative on the real line: {f}")


# -- conic solutions ------------------------------------------------------------


@dataclass(frozen=True)
class ConicSolution:
    """a*x**2 + b*y**2 = 1, exactly."""

    a: RatFn
    b: RatFn
    x: RatFn
    y: RatFn

    def __post_init__(self):
        for name in ("a", "b", "x", "y"):
            object.__setattr__(self, name, RatFn.coerce(getattr(self, name)))
        lhs = self.a * self.x * self.x + self.b * self.y * self.y
        if lhs != RatFn.one():
            raise VerificationFailure(f"conic identity failed: {lhs} != 1")


def _abs_lead(p: UniPoly) -> UniPoly:
    return -p if (not p.is_zero and p.lc().re < 0) else p


def _conic_closed_form(a: RatFn, b: RatFn) -> Optional[ConicSolution]:
    qa, Ka, Sa = square_split(a)
    qb, Kb, Sb = square_split(b)
    if qa == 1 and Ka.is_one:
        return ConicSolution(a, b, Sa.inverse(), RatFn.zero())
    if qb == 1 and Kb.is_one:
        return ConicSolution(a, b, RatFn.zero(), Sb.inverse())
    if qa == qb and Ka == Kb:
        try:
            ts = scalar_fejer_riesz(Ka.scale(Scalar.coerce(qa)))
        except (RootsNotInField, NotPSD):
            return None
        f1, f2 = (_abs_lead(p) for p in ts.g.real_imag_parts())
        low, high = sorted((f1, f2), key=lambda p: (p.degree(), p.sort_key()))
        alpha = RatFn(Ka.scale(Scalar.coerce(qa)))
        return ConicSolution(a, b, RatFn(low) / (alpha * Sa), RatFn(high) / (alpha * Sb))
    return None


def _conic_search(
    a: RatFn, b: RatFn, max_stage: int, max_candidates: int
) -> ConicSolution:
    tested = 0
    for total in range(1, max_stage + 1):
        for degree in range(0, total):
            height = total - degree
            coeffs = _coefficient_sequence(height, REAL)
            for rdeg in range(degree + 1):
                for rcombo in product(coeffs, repeat=rdeg):
                    r = UniPoly(tuple(reversed(rcombo)) + (Scalar.one(),))
                    for pcombo in product(coeffs, repeat=degree + 1):
                        p = UniPoly(tuple(reversed(pcombo)))
                        if p.is_zero:
                            continue
                        tested += 1
                        if tested > max_candidates:
                            raise SearchExhausted(
                                "conic search exceeded the candidate budget"
                            )
                        pd, ph = _entry_profile(p)
                        rd, rh = _entry_profile(r - UniPoly.monomial(1, rdeg))
                        if max(pd, rdeg) != degree or max(ph, rh, 1) != height:
                            continue  # already visited in an earlier stage
                        y = RatFn(p, r)
                        x2 = (RatFn.one() - b * y * y) / a
                        if x2.is_zero:
                            return ConicSolution(a, b, RatFn.zero(), y)
                        x = _ratfn_sqrt(x2)
                        if x is not None:
                            return ConicSolution(a, b, x, y)
    raise SearchExhausted("conic search exhausted its stage budget")


def represent_one(a, b, ring: Optional[SemiLocalRing] = None, *, max_stage: Optional[int] = None, max_candidates: int = CONIC_MAX_CANDIDATES) -> ConicSolution:
    """Exact (x, y) with a*x**2 + b*y**2 = 1; in the ring when one is given.

    Closed forms first (a perfect square up to a two-squares-representable
    cofactor, matching cofactors), then a bounded degree/height search; with a
    ring, field solutions are pushed into it by clearing norm denominators.
    """
    a, b = RatFn.coerce(a), RatFn.coerce(b)
    if a.is_zero or b.is_zero:
        raise NotPSD("conic coefficients must be nonzero")
    _require_psd_fn(a, "first conic coefficient")
    _require_psd_fn(b, "second conic coefficient")
    sol = _conic_closed_form(a, b)
    if sol is None:
        if max_stage is None:
            if ring is not None:
                max_stage = min(13, 2 * ring.modulus.degree() + 5)
            else:
                hint = max(
                    a.num.degree() + a.den.degree(),
                    b.num.degree() + b.den.degree(),
                )
                max_stage = min(12, max(6, hint + 4))
        sol = _conic_search(a, b, max_stage, max_candidates)
    if ring is not None and not (ring.contains(sol.x) and ring.contains(sol.y)):
        sol = _conic_into_ring(sol, ring)
    return sol


# -- quadratic extension arithmetic ----------------------------------------------


@dataclass(frozen=True)
class QuadExtElem:
    """u + v*sqrt(c) with square-free c; optional multiplier marks A[e*sqrt(c)]."""

    u: RatFn
    v: RatFn
    c: UniPoly
    e: Optional[UniPoly] = None

    def __post_init__(self):
        object.__setattr__(self, "u", RatFn.coerce(self.u))
        object.__setattr__(self, "v", RatFn.coerce(self.v))
        c = UniPoly.coerce(self.c)
        if c.is_zero:
            raise PreconditionViolated("discriminant must be nonzero")
        if not c.monic().squarefree_part() == c.monic():
            raise PreconditionViolated(f"discriminant {c} is not square-free")
        object.__setattr__(self, "c", c)

    def conj(self) -> "QuadExtElem":
        return QuadExtElem(self.u, -self.v, self.c, self.e)

    def norm(self) -> RatFn:
        return self.u * self.u - RatFn(self.c) * self.v * self.v

    def mul(self, other: "QuadExtElem") -> "QuadExtElem":
        if self.c != other.c:
            raise PreconditionViolated("mismatched discriminants")
        c = RatFn(self.c)
        return QuadExtElem(
            self.u * other.u + c * self.v * other.v,
            self.u * other.v + self.v * other.u,
            self.c,
        )

    def scale(self, s: RatFn) -> "QuadExtElem":
        return QuadExtElem(self.u * s, self.v * s, self.c, self.e)

    def in_subring(self, ring: SemiLocalRing) -> bool:
        if not (ring.contains(self.u) and ring.contains(self.v)):
            return False
        if self.e is None or self.v.is_zero:
            return True
        return ring.contains(self.v / RatFn(self.e))

    def __str__(self):
        return f"({self.u}) + ({self.v})*sqrt({self.c})"


def _canonical_sign(alpha: QuadExtElem) -> QuadExtElem:
    lead = alpha.u.num.lc() if not alpha.u.is_zero else alpha.v.num.lc()
    if lead.re < 0:
        alpha = alpha.scale(RatFn.coerce(-1))
    if not alpha.v.is_zero and alpha.v.num.lc().re < 0:
        alpha = alpha.conj()
    return alpha


def clear_norm_denominators(gamma: QuadExtElem, ring: SemiLocalRing, e) -> QuadExtElem:
    """alpha with norm(alpha) = norm(gamma) and v-part divisible by e in the ring.

    Works one prime of e at a time: the v-part of gamma * eps**2 vanishes to
    the required order iff eps = zeta + sqrt(c) with zeta a root of
    g2*z**2 + 2*g1*z + c*g2 modulo the prime power, and those roots are
    (-g1 +- sqrt(norm(gamma)))/g2 — so the norm's square root is Hensel-lifted
    in the residue tower and the per-prime roots are recombined by CRT.  Both
    sign branches are tried; the result is verified exactly.
    """
    e = UniPoly.coerce(e)
    if e.is_zero:
        raise PreconditionViolated("multiplier must be nonzero")
    norm = gamma.norm()
    if not ring.is_unit(norm):
        raise NormNotUnit(f"norm {norm} is not a unit of the ring")
    c = gamma.c
    if not c.is_real() or not psd_check(-c) or has_real_root(c):
        raise ResidueFieldNotQuadraticallyClosed(
            f"discriminant {c} admits real values; the extension has real places"
        )
    target = QuadExtElem(gamma.u, gamma.v, c, e)
    if target.in_subring(ring):
        return _canonical_sign(target)
    g1, g2 = gamma.u, gamma.v
    constraints = []
    for p in ring.primes:
        k = _poly_valuation(e, p)
        pole = 0
        for g in (g1, g2):
            if not g.is_zero:
                pole = max(pole, -min(0, ring.valuation(g, p)))
        if k == 0 and pole == 0:
            continue
        ram = 1 if (c % p).is_zero else 0
        n_p = 2 * k + 1 if ram else k
        # dividing the lifted root by the v-coordinate loses one order per
        # zero of that coordinate; poles of either coordinate cost the same
        # when the v-part is reconstructed
        m_p = n_p + pole + max(0, ring.valuation(g2, p))
        s = ring.hensel_sqrt(norm, p, m_p)
        if s is None:
            raise ResidueFieldNotQuadraticallyClosed(
                f"norm {norm} has no square root in the residue field at {p}"
            )
        options = []
        for sgn in (1, -1):
            zeta = (RatFn(s.scale(Scalar.coerce(sgn))) - g1) / g2
            if not zeta.is_zero and ring.valuation(zeta, p) < 0:
                continue
            options.append(ring.reduce_mod(zeta, p ** m_p))
        if not options:
            raise VerificationFailure(f"no integral conic root at {p}")
        constraints.append((p, m_p, options))
    if not constraints:
        return _canonical_sign(target)
    moduli = [p ** m for p, m, _ in constraints]
    period = UniPoly.one()
    for m in moduli:
        period = period * m
    constrained = [p for p, _, _ in constraints]
    free_primes = [q for q in ring.primes if q not in constrained]
    for combo in product(*[opts for _, _, opts in constraints]):
        base = poly_crt(list(zip(combo, moduli)))
        # shifting by the full period keeps every congruence; it only steers
        # norm(eps) away from zeros at the unconstrained primes of the ring
        for shift in range(2 * len(free_primes) + 3):
            zeta = base + period.scale(Scalar.coerce(shift))
            eps = QuadExtElem(RatFn(zeta), RatFn.one(), c)
            n_eps = eps.norm()
            if n_eps.is_zero:
                continue
            if any(ring.valuation(n_eps, q) > 0 for q in free_primes):
                continue
            cand = gamma.mul(eps.mul(eps)).scale(n_eps.inverse())
            cand = QuadExtElem(cand.u, cand.v, c, e)
            if cand.norm() != norm:
                continue
            if cand.in_subring(ring):
                return _canonical_sign(cand)
            break
    raise VerificationFailure("no Hensel branch produced an integral representative")


def _conic_into_ring(sol: ConicSolution, ring: SemiLocalRing) -> ConicSolution:
    """Push a field solution of u*x**2 + b*y**2 = 1 (u a unit) into the ring."""
    u, b = sol.a, sol.b
    if not ring.is_unit(u):
        raise SearchExhausted(
            "found a field solution, but the leading coefficient is not a unit;"
            " denominator clearing does not apply"
        )
    w = b / u
    qw, Kw, Sw = square_split(w)
    c = Kw.scale(Scalar.coerce(-qw))
    gamma = QuadExtElem(sol.x, Sw * sol.y, c)
    e_poly = ring.modulus_part(Sw).to_poly()
    alpha = clear_norm_denominators(gamma, ring, e_poly)
    x, y = alpha.u, alpha.v / Sw
    if not (ring.contains(x) and ring.contains(y)):
        raise VerificationFailure("cleared solution is still outside the ring")
    return ConicSolution(sol.a, sol.b, x, y)


# -- the local Witt step -----------------------------------------------------------


def local_witt_step(a, u, b, v, ring: SemiLocalRing) -> PolyMatrix:
    """2x2 T over the ring with T* diag(au, bv) T = diag(a, buv) (real lane).

    On the complex lane the unit u must be a hermitian square w*w and the
    step is the single-slot absorption T = diag(1/w, 1), which yields
    diag(a, bv) instead.
    """
    a, b = UniPoly.coerce(a), UniPoly.coerce(b)
    u, v = RatFn.coerce(u), RatFn.coerce(v)
    if not a.divides(b):
        raise DivisibilityViolated(f"{a} does not divide {b}")
    if not (a * b).divides(ring.modulus):
        raise DivisibilityViolated(f"{a} * {b} does not divide the modulus")
    if not (ring.is_unit(u) and ring.is_unit(v)):
        raise PreconditionViolated("u and v must be units of the ring")
    if ring.field == COMPLEX:
        w = _hermitian_square_root(u)
        T = PolyMatrix.diagonal([w.inverse(), RatFn.one()], COMPLEX)
        _check_witt(T, a, u, b, v, PolyMatrix.diagonal([RatFn(a), RatFn(b) * v], COMPLEX), ring)
        return T
    return _witt_pair_transform(a, u, b, v, ring, REAL)


def _witt_pair_transform(
    a: UniPoly, u: RatFn, b: UniPoly, v: RatFn, ring: SemiLocalRing, field: str
) -> PolyMatrix:
    """T2 with T2* diag(au, bv) T2 = diag(a, buv), via a real conic solution.

    Valid on either lane: congruence diagonal units are real psd, and a real
    solution of u x^2 + (b/a) v y^2 = 1 works verbatim over Q(i).
    """
    _require_psd_fn(u, "unit u")
    _require_psd_fn(v, "unit v")
    beta = RatFn(b) / RatFn(a) * v
    sol = represent_one(u, beta, ring)
    T = PolyMatrix(
        [[sol.x, -beta * sol.y], [sol.y, u * sol.x]],
        field,
    )
    _check_witt(T, a, u, b, v, PolyMatrix.diagonal([RatFn(a), RatFn(b) * u * v], field), ring)
    return T


def _check_witt(T: PolyMatrix, a, u, b, v, expected: PolyMatrix, ring: SemiLocalRing) -> None:
    source = PolyMatrix.diagonal([RatFn(a) * u, RatFn(b) * v], T.field)
    if T.star() * source * T != expected:
        raise VerificationFailure("Witt step postcondition failed")
    if not ring.is_unit(RatFn.coerce(T.det())):
        raise VerificationFailure("Witt step matrix is not invertible over the ring")
    if any(not ring.contains(RatFn.coerce(T[i, j])) for i in range(2) for j in range(2)):
        raise VerificationFailure("Witt step matrix has entries outside the ring")


def _hermitian_square_root(u: RatFn) -> RatFn:
    """w with w*w = u for a psd unit, or RootsNotInField.

    Works from the Q(i)-irreducible factorization rather than roots, so
    self-conjugate factors of even multiplicity are handled even when their
    own roots leave Q(i): conjugate factor pairs contribute one factor each,
    self-conjugate factors contribute half their multiplicity.
    """
    if not u.is_real():
        raise PreconditionViolated("hermitian squares are real")
    return RatFn(_poly_norm_root(u.num), _poly_norm_root(u.den))


def _poly_norm_root(p: UniPoly) -> UniPoly:
    from .roots import factor_gaussian

    w0 = norm_element(rat(p.lc().re))
    if w0 is None:
        raise RootsNotInField(f"leading coefficient of {p} is not a rational norm")
    _, factors = factor_gaussian(p)
    remaining = {f: m for f, m in factors}
    w = UniPoly.constant(w0)
    for f, m in factors:
        if remaining.get(f, 0) == 0:
            continue
        fbar = f.star()
        if fbar == f:
            if m % 2:
                raise RootsNotInField(
                    f"self-conjugate factor {f} has odd multiplicity {m}"
                )
            w = w * f ** (m // 2)
            remaining[f] = 0
        else:
            if remaining.get(fbar, 0) != m:
                raise RootsNotInField(
                    f"conjugate factors {f}, {fbar} have unequal multiplicities"
                )
            w = w * f ** m
            remaining[f] = 0
            remaining[fbar] = 0
    return w


# -- Smith-form congruence ---------------------------------------------------------


@dataclass(frozen=True)
class CongruenceWitness:
    """T* M T = D with T invertible over the ring and D diagonal."""

    M: PolyMatrix
    T: PolyMatrix
    D: PolyMatrix
    ring: SemiLocalRing

    def __post_init__(self):
        if self.T.star() * self.M * self.T != self.D:
            raise VerificationFailure("congruence witness does not verify")
        det = RatFn.coerce(self.T.det())
        if not self.ring.is_unit(det):
            raise VerificationFailure("witness determinant is not a unit of the ring")
        for i in range(self.D.rows):
            for j in range(self.D.cols):
                if i != j and not RatFn.coerce(self.D[i, j]).is_zero:
                    raise VerificationFailure("witness target is not diagonal")

    @property
    def diagonal_entries(self) -> List[RatFn]:
        return [RatFn.coerce(self.D[i, i]) for i in range(self.D.rows)]

    @property
    def invariant_factors(self) -> List[UniPoly]:
        return [self.ring.modulus_part(d).to_poly() for d in self.diagonal_entries]

    @property
    def unit_constants(self) -> List[Scalar]:
        """The positive rational constants left on the diagonal (1 when clean)."""
        out = []
        for d, a in zip(self.diagonal_entries, self.invariant_factors):
            out.append((d / RatFn(a)).constant_value())
        return out


def _embed_pair(n: int, i: int, j: int, T2: PolyMatrix, field: str) -> PolyMatrix:
    grid = [
        [RatFn.one() if r == c else RatFn.zero() for c in range(n)] for r in range(n)
    ]
    grid[i][i] = RatFn.coerce(T2[0, 0])
    grid[i][j] = RatFn.coerce(T2[0, 1])
    grid[j][i] = RatFn.coerce(T2[1, 0])
    grid[j][j] = RatFn.coerce(T2[1, 1])
    return PolyMatrix(grid, field)


def _scale_column(n: int, i: int, s: RatFn, field: str) -> PolyMatrix:
    return PolyMatrix.diagonal(
        [s if k == i else RatFn.one() for k in range(n)], field
    )


def _absorb_square_part(units: List[RatFn], T: PolyMatrix, i: int, ring: SemiLocalRing) -> PolyMatrix:
    """Scale away the square part of the unit, leaving its rational kernel."""
    q, K, S = square_split(units[i])
    if not K.is_one:
        raise SearchExhausted(
            f"unit {units[i]} has a nonconstant square-free kernel that the sweep"
            " could not remove"
        )
    T = T * _scale_column(len(units), i, S.inverse(), ring.field)
    units[i] = RatFn.coerce(UniPoly.constant(Scalar.coerce(q)))
    return T


_SWEEP_FAILURES = (SearchExhausted, ResidueFieldNotQuadraticallyClosed, RootsNotInField)


def _real_unit_sweep(
    parts: List[UniPoly], units: List[RatFn], T: PolyMatrix, ring: SemiLocalRing
) -> PolyMatrix:
    n = len(units)
    one = RatFn.one()
    for i in range(n - 1):
        if units[i] == one:
            continue
        try:
            T2 = local_witt_step(parts[i], units[i], parts[i + 1], units[i + 1], ring)
        except _SWEEP_FAILURES:
            T = _absorb_square_part(units, T, i, ring)
            continue
        T = T * _embed_pair(n, i, i + 1, T2, ring.field)
        units[i + 1] = units[i] * units[i + 1]
        units[i] = one
    for i in range(n):
        if units[i] != one:
            T = _absorb_square_part(units, T, i, ring)
            if units[i] == one:
                continue
    # pair up the leftover rational constants where the conic machinery allows
    for i in range(n):
        if units[i] == one:
            continue
        for j in range(i + 1, n):
            if units[j] == one:
                continue
            try:
                T2 = local_witt_step(parts[i], units[i], parts[j], units[j], ring)
            except _SWEEP_FAILURES:
                continue
            T = T * _embed_pair(n, i, j, T2, ring.field)
            units[j] = units[i] * units[j]
            units[i] = one
            T = _absorb_square_part(units, T, j, ring)
            break
    return T


def _absorb_norm_part(
    units: List[RatFn], T: PolyMatrix, i: int, ring: SemiLocalRing
) -> PolyMatrix:
    """Scale away the hermitian-square part of the unit when its norm
    structure allows, leaving a rational non-norm kernel; no-op otherwise."""
    if units[i] == RatFn.one():
        return T
    _require_psd_fn(units[i], "diagonal unit")
    kernel = _nonnorm_kernel(units[i].num.lc().re)
    scaled = units[i] / RatFn.coerce(UniPoly.constant(Scalar.coerce(kernel)))
    try:
        w = _hermitian_square_root(scaled)
    except RootsNotInField:
        return T
    T = T * _scale_column(len(units), i, w.inverse(), ring.field)
    units[i] = RatFn.coerce(UniPoly.constant(Scalar.coerce(kernel)))
    return T


def _complex_unit_sweep(
    parts: List[UniPoly], units: List[RatFn], T: PolyMatrix, ring: SemiLocalRing
) -> PolyMatrix:
    n = len(units)
    one = RatFn.one()
    for i in range(n):
        T = _absorb_norm_part(units, T, i, ring)
    # Units that resist single-slot absorption are multiplied rightward; the
    # running product is N(det of the transform so far) times a constant, so
    # the final slot always absorbs down to a rational kernel.
    for i in range(n - 1):
        if units[i] == one or units[i].is_constant:
            continue
        try:
            T2 = _witt_pair_transform(
                parts[i], units[i], parts[i + 1], units[i + 1], ring, ring.field
            )
        except _SWEEP_FAILURES:
            continue
        T = T * _embed_pair(n, i, i + 1, T2.to_ratfn(), ring.field)
        units[i + 1] = units[i] * units[i + 1]
        units[i] = one
        T = _absorb_norm_part(units, T, i + 1, ring)
    for i in range(n):
        if units[i] == one or not units[i].is_constant:
            continue
        for j in range(i + 1, n):
            if units[j] == one or not units[j].is_constant or parts[i] != parts[j]:
                continue
            ci = rat(units[i].constant_value().re)
            cj = rat(units[j].constant_value().re)
            pq = _norm_pair_solve(ci, cj)
            if pq is None:
                continue
            p, q = pq
            T2 = PolyMatrix(
                [
                    [p, -q.conj() * Scalar.coerce(cj)],
                    [q, p.conj() * Scalar.coerce(ci)],
                ],
                COMPLEX,
            )
            T = T * _embed_pair(n, i, j, T2.to_ratfn(), ring.field)
            units[j] = units[i] * units[j]
            units[i] = one
            combined = rat(units[j].constant_value().re)
            if rat_is_norm(combined):
                w = norm_element(combined)
                T = T * _scale_column(n, j, RatFn.coerce(UniPoly.constant(w)).inverse(), ring.field)
                units[j] = one
            break
    return T


def _norm_pair_solve(ci, cj) -> Optional[Tuple[Scalar, Scalar]]:
    """p, q in Q(i) with ci*|p|^2 + cj*|q|^2 = 1, by bounded integer search."""
    pi, qi = int(ci.numerator), int(ci.denominator)
    pj, qj = int(cj.numerator), int(cj.denominator)
    for den in range(1, 61):
        rhs = den * den * qi * qj
        step = pi * qj
        for n1 in range(0, rhs // step + 1):
            rem = rhs - step * n1
            if rem % (pj * qi):
                continue
            n2 = rem // (pj * qi)
            s1 = two_squares_int(n1)
            if s1 is None:
                continue
            s2 = two_squares_int(n2)
            if s2 is None:
                continue
            d = Scalar.coerce(den)
            return Scalar(s1[0], s1[1]) / d, Scalar(s2[0], s2[1]) / d
    return None


def snf_congruence(M: PolyMatrix) -> CongruenceWitness:
    """Congruence of a hermitian matrix with its monic Smith normal form.

    The ring is the semi-local ring of det(M).  After diagonalization the
    units are swept rightward (real lane) or absorbed as hermitian squares
    (complex lane); positive rational constants whose square roots are
    irrational may remain on the diagonal and are reported in the witness.

    The sweep needs the diagonal units to be nonnegative on the real line
    (always true for psd input) but does not require M itself to be psd,
    so indefinite inputs such as diag(t, t) are still brought to Smith form.
    """
    M = M.to_polynomial()
    M.require_hermitian()
    det = UniPoly.coerce(M.det())
    if det.is_zero:
        raise Degenerate("determinant vanishes identically")
    ring = SemiLocalRing(det.monic(), M.field)
    T, diag = diagonalize_semilocal(M.to_ratfn(), ring)
    parts = [ring.modulus_part(b).to_poly() for b in diag]
    units = [b / RatFn(a) for b, a in zip(diag, parts)]
    for u in units:
        _require_psd_fn(u, "diagonal unit")
    if ring.field == REAL:
        T = _real_unit_sweep(parts, units, T, ring)
    else:
        T = _complex_unit_sweep(parts, units, T, ring)
    D = PolyMatrix.diagonal(
        [RatFn(a) * u for a, u in zip(parts, units)], ring.field
    )
    return CongruenceWitness(M=M, T=T, D=D, ring=ring)
