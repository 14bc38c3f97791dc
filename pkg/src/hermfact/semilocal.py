"""Semi-local subrings of the rational function field and diagonalization.

For a monic nonzero modulus d the ring O_d consists of the fractions whose
denominator is coprime to d.  It is a semi-local principal ideal domain; its
maximal ideals correspond to the distinct monic irreducible factors of d over
the base field (Q for the real lane, Q(i) for the complex lane).

This module provides the ring (membership, units, valuations, residue-field
square roots, Hensel lifting), a deterministic prime-avoidance pivot search
for hermitian matrices over O_d, and the congruence diagonalization: every
nondegenerate hermitian M over O_d is congruent to diag(b_1, ..., b_n) where
b_i = a_i * u_i with a_1 | a_2 | ... the monic invariant factors and u_i
units of the ring.
"""

from dataclasses import dataclass, field as dataclass_field
from itertools import product
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import (
    Degenerate,
    PreconditionViolated,
    ResidueFieldNotQuadraticallyClosed,
    SearchExhausted,
    VerificationFailure,
)
from .linalg import nullspace
from .matrix import COMPLEX, REAL, PolyMatrix
from .poly import RatFn, UniPoly
from .roots import factor_gaussian, factor_rational
from .scalars import Scalar

Vector = Tuple[UniPoly, ...]

# Budget defaults for the pivot enumeration; termination is guaranteed by the
# prime-avoidance lemma, the caps only bound pathological inputs honestly.
PIVOT_MAX_STAGE_SUM = 8
PIVOT_MAX_CANDIDATES = 500_000
# extra candidates examined after a unit-valued pivot, hoping for a constant value
PIVOT_CONSTANT_LOOKAHEAD = 4_000
# degree cap and candidate cap for the low-degree-image pivot rescue
STRUCTURED_PIVOT_MAX_DEGREE = 8
STRUCTURED_PIVOT_MAX_CANDIDATES = 64


@dataclass(frozen=True)
class SemiLocalRing:
    """O_d: fractions with denominator coprime to the monic modulus d."""

    modulus: UniPoly
    field: str = REAL
    primes: Tuple[UniPoly, ...] = dataclass_field(init=False, default=())

    def __post_init__(self):
        d = UniPoly.coerce(self.modulus)
        if d.is_zero:
            raise PreconditionViolated("semi-local modulus must be nonzero")
        d = d.monic()
        object.__setattr__(self, "modulus", d)
        if self.field not in (REAL, COMPLEX):
            raise PreconditionViolated(f"unknown field tag {self.field!r}")
        if self.field == REAL and not d.is_real():
            raise PreconditionViolated("real-lane modulus must have rational coefficients")
        factor = factor_rational if self.field == REAL else factor_gaussian
        _, factors = factor(d)
        object.__setattr__(self, "primes", tuple(p for p, _ in factors))

    # -- membership and units ---------------------------------------------

    def contains(self, f) -> bool:
        f = RatFn.coerce(f)
        return f.den.gcd(self.modulus).is_one

    def is_unit(self, f) -> bool:
        f = RatFn.coerce(f)
        if f.is_zero:
            return False
        return f.num.gcd(self.modulus).is_one and f.den.gcd(self.modulus).is_one

    def valuation(self, f, prime: UniPoly) -> int:
        """Order of the prime in f (negative for poles)."""
        f = RatFn.coerce(f)
        if f.is_zero:
            raise PreconditionViolated("valuation of zero is undefined")
        return _poly_valuation(f.num, prime) - _poly_valuation(f.den, prime)

    def modulus_part(self, f) -> RatFn:
        """The part of f supported on the primes of the ring (monic)."""
        f = RatFn.coerce(f)
        if f.is_zero:
            raise PreconditionViolated("zero has no modulus part")
        num, den = UniPoly.one(), UniPoly.one()
        for p in self.primes:
            v = self.valuation(f, p)
            if v > 0:
                num = num * p ** v
            elif v < 0:
                den = den * p ** (-v)
        return RatFn(num, den)

    def unit_part(self, f) -> RatFn:
        return RatFn.coerce(f) / self.modulus_part(f)

    # -- residue arithmetic -------------------------------------------------

    def reduce_mod(self, f, power: UniPoly) -> UniPoly:
        """f as a polynomial residue modulo `power` (denominator must be invertible)."""
        f = RatFn.coerce(f)
        g, inv, _ = f.den.xgcd(power)
        if not g.is_one:
            raise PreconditionViolated(f"denominator of {f} not invertible mod {power}")
        return (f.num * inv) % power

    def residue_sqrt(self, f, prime: UniPoly) -> Optional[UniPoly]:
        """A square root of f in the residue field O/(prime), or None.

        Residue fields of degree one are the base field; degree two gives a
        quadratic extension, where the root is found by solving the pair of
        coordinate equations.  Higher degrees are not supported in exact mode.
        """
        a = self.reduce_mod(f, prime)
        if prime.degree() == 1:
            z = -prime.constant_term()
            s = _field_sqrt(a(z), self.field)
            return None if s is None else UniPoly.constant(s)
        if prime.degree() == 2:
            return self._residue_sqrt_quadratic(a, prime)
        raise ResidueFieldNotQuadraticallyClosed(
            f"residue field of degree {prime.degree()} is out of exact-mode scope"
        )

    def _residue_sqrt_quadratic(self, a: UniPoly, prime: UniPoly) -> Optional[UniPoly]:
        # theta^2 = -b*theta - c in O/(prime); solve (x + y*theta)^2 = a0 + a1*theta.
        b, c = prime.coeff(1), prime.coeff(0)
        a0, a1 = a.coeff(0), a.coeff(1)
        candidates: List[Tuple[Scalar, Scalar]] = []
        if a1.is_zero:
            s = _field_sqrt(a0, self.field)
            if s is not None:
                candidates.append((s, Scalar.zero()))
            denom = b * b / Scalar.coerce(4) - c
            if not denom.is_zero:
                y = _field_sqrt(a0 / denom, self.field)
                if y is not None:
                    candidates.append((b * y / Scalar.coerce(2), y))
        else:
            # y != 0; with U = y^2: (b^2-4c) U^2 + (2 a1 b - 4 a0) U + a1^2 = 0.
            A = b * b - Scalar.coerce(4) * c
            B = Scalar.coerce(2) * a1 * b - Scalar.coerce(4) * a0
            C = a1 * a1
            disc = B * B - Scalar.coerce(4) * A * C
            root = _field_sqrt(disc, self.field)
            if root is not None:
                for sgn in (root, -root):
                    U = (-B + sgn) / (Scalar.coerce(2) * A)
                    y = _field_sqrt(U, self.field)
                    if y is None or y.is_zero:
                        continue
                    x = (a1 + b * U) / (Scalar.coerce(2) * y)
                    candidates.append((x, y))
        for x, y in candidates:
            s = UniPoly((x, y))
            if ((s * s - a) % prime).is_zero:
                return s
        return None

    def hensel_sqrt(self, f, prime: UniPoly, precision: int) -> Optional[UniPoly]:
        """r with r^2 = f mod prime**precision; f must be a unit at the prime."""
        f = RatFn.coerce(f)
        if self.valuation(f, prime) != 0:
            raise PreconditionViolated("Hensel square root needs a unit at the prime")
        r = self.residue_sqrt(f, prime)
        if r is None:
            return None
        power = prime
        target = prime ** precision
        f_red = self.reduce_mod(f, target)
        k = 1
        while k < precision:
            k = min(2 * k, precision)
            power = prime ** k
            g, inv, _ = (r + r).xgcd(power)
            if not g.is_one:
                return None
            r = (r - (r * r - f_red) * inv) % power
        return r % target


def _poly_valuation(f: UniPoly, prime: UniPoly) -> int:
    if f.is_zero:
        raise PreconditionViolated("valuation of the zero polynomial")
    v = 0
    while (f % prime).is_zero:
        f = f.exact_div(prime)
        v += 1
    return v


def _field_sqrt(c: Scalar, field: str) -> Optional[Scalar]:
    s = c.sqrt()
    if s is None:
        return None
    if field == REAL and not s.is_real:
        return None  # the residue field is Q; i*r is not in it
    return s


def poly_crt(pairs: Sequence[Tuple[UniPoly, UniPoly]]) -> UniPoly:
    """x with x = r mod m for each (r, m); moduli must be pairwise coprime."""
    result, modulus = UniPoly.zero(), UniPoly.one()
    for r, m in pairs:
        g, u, v = modulus.xgcd(m)
        if not g.is_one:
            raise PreconditionViolated("CRT moduli are not coprime")
        # u*modulus = 1 mod m, v*m = 1 mod modulus
        combined = modulus * m
        result = (result * v * m + r * u * modulus) % combined
        modulus = combined
    return result


# -- deterministic prime-avoidance pivot search ---------------------------------


def _int_order_key(c: int) -> int:
    # position inside the sequence 0, 1, -1, 2, -2, ...
    return 2 * abs(c) - (1 if c > 0 else 0)


def _coefficient_sequence(height: int, field: str) -> List[Scalar]:
    ints = sorted(range(-height, height + 1), key=_int_order_key)
    if field == REAL:
        return [Scalar.coerce(a) for a in ints]
    out = [(a, b) for a in ints for b in ints]
    out.sort(key=lambda ab: (max(abs(ab[0]), abs(ab[1])), _int_order_key(ab[1]), _int_order_key(ab[0])))
    return [Scalar(a, b) for a, b in out]


def _scalar_height(c: Scalar) -> int:
    def h(q):
        return max(abs(q.numerator), q.denominator)

    return max(h(c.re), h(c.im)) if not c.is_zero else 0


def _entry_profile(p: UniPoly) -> Tuple[int, int]:
    """(degree, height) of an integer-coefficient entry; zero counts as (0, 0)."""
    if p.is_zero:
        return 0, 0
    return p.degree(), max(_scalar_height(c) for c in p.coeffs)


def _stage_vectors(n: int, degree: int, height: int, field: str) -> Iterator[Vector]:
    """Vectors new to this stage, earlier positions varying fastest."""
    coeffs = _coefficient_sequence(height, field)
    entries = [UniPoly(tuple(reversed(combo))) for combo in product(coeffs, repeat=degree + 1)]
    for combo in product(entries, repeat=n):
        vec = tuple(reversed(combo))
        profiles = [_entry_profile(p) for p in vec if not p.is_zero]
        if not profiles:
            continue
        if max(d for d, _ in profiles) != degree or max(h for _, h in profiles) != height:
            continue  # already visited in an earlier stage
        yield vec


def quad_form(M: PolyMatrix, v: Sequence[UniPoly], w: Sequence[UniPoly]) -> RatFn:
    """v* M w for coordinate vectors of polynomials."""
    acc = RatFn.zero()
    for i in range(M.rows):
        vi = v[i].star()
        if vi.is_zero:
            continue
        for j in range(M.cols):
            if w[j].is_zero:
                continue
            acc = acc + RatFn.coerce(M[i, j]) * RatFn(vi * w[j])
    return acc


def _constant_value_pivot(M: PolyMatrix, ring: SemiLocalRing) -> Optional[Vector]:
    """Vector with a constant unit value, found by linear algebra on coefficients.

    When M is congruent to a diagonal by a unimodular transform S, the
    preimages S^{-1}(c, 0, ..., 0) of constant vectors have constant value,
    and they are distinguished by M v having low degree -- a linear condition
    on the coefficients of v.  Solving it avoids enumerating the exponentially
    many candidate vectors of that degree.
    """
    try:
        P = M.to_polynomial()
    except Exception:
        return None
    n = P.rows
    degs = [UniPoly.coerce(P[i, j]).degree() for i in range(n) for j in range(n)]
    top = max((d for d in degs if d >= 0), default=0)
    if top <= 0:
        return None
    rows_p = [[UniPoly.coerce(P[i, j]) for j in range(n)] for i in range(n)]
    for bound in range(1, STRUCTURED_PIVOT_MAX_DEGREE + 1):
        # demand deg(Mv) <= bound while deg(v) <= bound
        rows: List[List[Scalar]] = []
        for i in range(n):
            for k in range(bound + 1, top + bound + 1):
                rows.append(
                    [
                        rows_p[i][j].coeff(k - kk)
                        for j in range(n)
                        for kk in range(bound + 1)
                    ]
                )
        basis = nullspace(rows, ncols=n * (bound + 1))
        if not basis:
            continue
        candidates = [tuple(b) for b in basis]
        for a in range(min(len(basis), 8)):
            for b in range(a + 1, min(len(basis), 8)):
                plus = tuple(x + y for x, y in zip(basis[a], basis[b]))
                minus = tuple(x - y for x, y in zip(basis[a], basis[b]))
                candidates.extend((plus, minus))
        for cand in candidates[:STRUCTURED_PIVOT_MAX_CANDIDATES]:
            vec = tuple(
                UniPoly(cand[j * (bound + 1) : (j + 1) * (bound + 1)])
                for j in range(n)
            )
            if all(p.is_zero for p in vec):
                continue
            content = UniPoly.zero()
            for p in vec:
                content = content.gcd(p)
            vec = tuple(p.exact_div(content) for p in vec)
            value = quad_form(M, vec, vec)
            if value.is_constant and not value.is_zero and ring.is_unit(value):
                return vec
    return None


def pivot_search(M: PolyMatrix, ring: SemiLocalRing) -> Vector:
    """First vector with v*Mv a constant unit, else the first with any unit value.

    The stages (degree bound, coefficient height) are visited sorted by their
    sum and then by degree; inside a stage earlier coordinates and lower-order
    coefficients vary fastest, so the result is reproducible.  Constant pivot
    values are strongly preferred: they keep the congruence transform
    polynomial with constant determinant, so no spurious moduli enter the
    downstream pole cancellation.
    """
    M.require_hermitian()
    n = M.rows
    for p in ring.primes:
        if all(ring.valuation(x, p) > 0 for x in M.entries() if not RatFn.coerce(x).is_zero):
            raise PreconditionViolated(f"every entry vanishes modulo {p}")
    tested = 0
    fallback: Optional[Vector] = None
    fallback_at = 0
    for total in range(1, PIVOT_MAX_STAGE_SUM + 1):
        for degree in range(0, total):
            height = total - degree
            for vec in _stage_vectors(n, degree, height, ring.field):
                tested += 1
                if tested > PIVOT_MAX_CANDIDATES or (
                    fallback is not None
                    and tested - fallback_at > PIVOT_CONSTANT_LOOKAHEAD
                ):
                    rescue = _constant_value_pivot(M, ring)
                    if rescue is not None:
                        return rescue
                    if fallback is not None:
                        return fallback
                    raise SearchExhausted("pivot search exceeded the candidate budget")
                value = quad_form(M, vec, vec)
                if not ring.is_unit(value):
                    continue
                if value.is_constant:
                    return vec
                if fallback is None:
                    fallback = vec
                    fallback_at = tested
    rescue = _constant_value_pivot(M, ring)
    if rescue is not None:
        return rescue
    if fallback is not None:
        return fallback
    raise SearchExhausted("pivot search exhausted its stage budget")


# -- semi-local congruence diagonalization --------------------------------------


def _entry_gcd(M: PolyMatrix, ring: SemiLocalRing) -> UniPoly:
    """Monic generator of the entry ideal: product of per-prime minimal valuations."""
    g = UniPoly.one()
    for p in ring.primes:
        m = min(
            ring.valuation(x, p)
            for x in M.entries()
            if not RatFn.coerce(x).is_zero
        )
        if m > 0:
            g = g * p ** m
    return g


def _complete_to_invertible(w: Vector, field: str) -> PolyMatrix:
    """Invertible polynomial matrix whose first column is w (entry gcd must be 1)."""
    from .matrix import smith_normal_form

    col = PolyMatrix([[x] for x in w], field)
    data = smith_normal_form(col)
    if len(data.invariant_factors) != 1 or not data.invariant_factors[0].is_one:
        raise PreconditionViolated("column content is not trivial; cannot complete")
    # S * w * tau = e1 with tau a nonzero constant, so S^{-1} scaled on the
    # first column by 1/tau is a completion of w.
    tau = RatFn.coerce(data.T[0, 0])
    S_inv = data.S.inverse()
    scale = [tau.inverse() if j == 0 else RatFn.one() for j in range(len(w))]
    E = S_inv * PolyMatrix.diagonal(scale, field)
    return E


def diagonalize_semilocal(
    M: PolyMatrix, ring: SemiLocalRing
) -> Tuple[PolyMatrix, List[RatFn]]:
    """T over the ring with T*MT = diag(b_1, ..., b_n), invariant chain ascending.

    Each b_i factors as (monic invariant factor) * (unit of the ring); the gcd
    of the entries is extracted first (it is monic, hence *-invariant), then a
    prime-avoidance pivot splits off one dimension and the Schur complement
    recurses.
    """
    M = M.to_ratfn()
    M.require_hermitian()
    n = M.rows
    for x in M.entries():
        if not ring.contains(x):
            raise PreconditionViolated(f"entry {x} is not in the ring")
    det = RatFn.coerce(M.det())
    if det.is_zero:
        raise Degenerate("matrix is singular over the ring")
    T, diag = _diagonalize_rec(M, ring)
    check = T.star() * M * T
    expected = PolyMatrix.diagonal(diag, ring.field)
    if check != expected:
        raise VerificationFailure("diagonalization postcondition failed")
    if not ring.is_unit(RatFn.coerce(T.det())):
        raise VerificationFailure("transform determinant is not a unit of the ring")
    parts = [ring.modulus_part(b).to_poly() for b in diag]
    for a, b in zip(parts, parts[1:]):
        if not a.divides(b):
            raise VerificationFailure("invariant factors do not form a divisibility chain")
    return T, diag


def _diagonalize_rec(M: PolyMatrix, ring: SemiLocalRing) -> Tuple[PolyMatrix, List[RatFn]]:
    n = M.rows
    if n == 1:
        return PolyMatrix.identity(1, ring.field), [RatFn.coerce(M[0, 0])]
    g = _entry_gcd(M, ring)
    g_fn = RatFn(g)
    B = M.map_entries(lambda x: RatFn.coerce(x) / g_fn)
    v = pivot_search(B, ring)
    content = UniPoly.zero()
    for x in v:
        content = content.gcd(x)
    w = tuple(x.exact_div(content) for x in v)
    u = quad_form(B, w, w)
    if not ring.is_unit(u):
        raise VerificationFailure("pivot lost its unit value after content division")
    E = _complete_to_invertible(w, ring.field)
    # Gram-Schmidt the completed columns against the pivot column.
    cols: List[List[RatFn]] = [[RatFn.coerce(E[i, 0]) for i in range(n)]]
    for j in range(1, n):
        c = [RatFn.coerce(E[i, j]) for i in range(n)]
        lam = _form_on(B, cols[0], c) / u
        cols.append([c[i] - cols[0][i] * lam for i in range(n)])
    T1 = PolyMatrix([[cols[j][i] for j in range(n)] for i in range(n)], ring.field)
    inner = T1.star() * M * T1
    b1 = RatFn.coerce(inner[0, 0])
    sub = inner.submatrix(list(range(1, n)), list(range(1, n)))
    T_rest, diag_rest = _diagonalize_rec(sub, ring)
    T = T1 * PolyMatrix.identity(1, ring.field).block_diag(T_rest)
    return T, [b1] + diag_rest


def _form_on(M: PolyMatrix, v: Sequence[RatFn], w: Sequence[RatFn]) -> RatFn:
    acc = RatFn.zero()
    for i in range(M.rows):
        vi = v[i].star()
        if vi.is_zero:
            continue
        for j in range(M.cols):
            if w[j].is_zero:
                continue
            acc = acc + vi * RatFn.coerce(M[i, j]) * w[j]
    return acc
