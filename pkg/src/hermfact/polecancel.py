"""Pole cancellation: turn rational hermitian-square factors into polynomial ones.

A square rational matrix S whose gram S*S is polynomial admits a rational
unitary U such that U*S is polynomial.  U is assembled from split-offs at the
roots of the least common denominator a of S: each linear factor t - z of a
contributes the unitary (1/star(t - z)) * (t*Id - A)*, and each
real-irreducible quadratic factor q contributes the orthogonal
(1/q) * (T0*T1)^T obtained from two successive split-offs.  Identity blocks
appended for parity reasons are removed again by a constant unitary, using
that the corresponding columns of a factor of M + Id_k are constant and
orthonormal.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import List, Optional, Tuple

from .errors import (
    NotSquare,
    PreconditionViolated,
    VerificationFailure,
)
from .linalg import extend_to_unitary
from .matrix import COMPLEX, REAL, PolyMatrix
from .poly import RatFn, UniPoly
from .poly import lcd as _entry_lcd
from .roots import factor_gaussian, factor_rational, gaussian_roots
from .scalars import Scalar

FULL_FUNCTION_FIELD = "full-function-field"
SEMI_LOCAL = "semi-local"
POLYNOMIAL = "polynomial"

_KINDS = (FULL_FUNCTION_FIELD, SEMI_LOCAL, POLYNOMIAL)


@dataclass(frozen=True)
class SubringSpec:
    """A subring of the rational functions that contains the polynomials.

    kind selects the whole function field, a semi-local ring (denominators
    coprime to a monic modulus), or the polynomial ring itself.  The
    star-invariance flag records whether the ring is closed under the
    coefficient-conjugation involution; for a semi-local ring that holds
    exactly when the radical of the modulus equals its own star.
    """

    kind: str
    modulus: Optional[UniPoly] = None
    star_invariant: bool = dataclass_field(init=False, default=True)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise PreconditionViolated(f"unknown subring kind {self.kind!r}")
        if self.kind == SEMI_LOCAL:
            d = self.modulus
            if d is None or d.is_zero or not d.is_monic():
                raise PreconditionViolated(
                    "semi-local subring needs a monic nonzero modulus"
                )
            radical = d.squarefree_part()
            object.__setattr__(self, "star_invariant", radical.star() == radical)
        elif self.modulus is not None:
            raise PreconditionViolated(f"{self.kind} subring takes no modulus")

    @classmethod
    def full_function_field(cls) -> "SubringSpec":
        return cls(FULL_FUNCTION_FIELD)

    @classmethod
    def semi_local(cls, modulus) -> "SubringSpec":
        return cls(SEMI_LOCAL, UniPoly.coerce(modulus).monic())

    @classmethod
    def polynomial_ring(cls) -> "SubringSpec":
        return cls(POLYNOMIAL)

    def contains(self, f) -> bool:
        f = RatFn.coerce(f)
        if self.kind == FULL_FUNCTION_FIELD:
            return True
        if self.kind == POLYNOMIAL:
            return f.is_polynomial
        return f.den.gcd(self.modulus).is_one


def lcd(S: PolyMatrix) -> UniPoly:
    """Monic least common multiple of the entry denominators of S."""
    return _entry_lcd(list(S.entries()))


def _t_identity(n: int, field: str) -> PolyMatrix:
    return PolyMatrix.diagonal([UniPoly.t()] * n, field)


def _positive_imag_root(p: UniPoly) -> Scalar:
    roots = gaussian_roots(p)
    for r in roots:
        if r.value.im > 0:
            return r.value
    return roots[0].value


def check_unitary_over(U: PolyMatrix, ring: SubringSpec) -> bool:
    """True iff U*U = Id exactly and every entry of U lies in the subring."""
    if U.rows != U.cols:
        raise NotSquare(f"unitarity check needs a square matrix, got {U.rows}x{U.cols}")
    if U.star() * U != PolyMatrix.identity(U.rows, U.field):
        return False
    return all(ring.contains(RatFn.coerce(e)) for e in U.entries())


def _strip_with_unitary(P: PolyMatrix, k: int) -> Tuple[PolyMatrix, PolyMatrix]:
    """Return (Q, W) with W constant unitary and W* P = Q + Id_k block diagonal."""
    if P.rows != P.cols:
        raise NotSquare(f"identity stripping needs a square matrix, got {P.rows}x{P.cols}")
    m = P.rows
    if not 0 <= k < m:
        raise PreconditionViolated(f"cannot strip {k} identity columns from size {m}")
    if k == 0:
        return P, PolyMatrix.identity(m, P.field)
    n = m - k
    gram = P.star() * P
    one, zero = RatFn.one(), RatFn.zero()
    for i in range(m):
        for j in range(m):
            if i < n and j < n:
                continue
            want = one if i == j else zero
            if RatFn.coerce(gram[i, j]) != want:
                raise PreconditionViolated(
                    "gram matrix is not of the block form M + Id_k"
                )
    # a column of hermitian norm 1 in a polynomial factor is constant: the
    # top-degree coefficients of sum_i q_i* q_i cannot cancel
    cols = []
    for l in range(n, m):
        col = []
        for i in range(m):
            e = RatFn.coerce(P[i, l])
            if not e.is_constant:
                raise PreconditionViolated(
                    "identity-block column of the factor is not constant"
                )
            col.append(e.constant_value())
        cols.append(tuple(col))
    # exact block-diagonal input: the leading block already is the answer
    if all(
        cols[l][i] == (Scalar.one() if i == n + l else Scalar.zero())
        for l in range(k)
        for i in range(m)
    ):
        Q = P.submatrix(list(range(n)), list(range(n)))
        return Q, PolyMatrix.identity(m, P.field)
    W0 = extend_to_unitary(cols, m)
    # reorder so the given orthonormal system forms the *last* k columns
    perm = list(range(k, m)) + list(range(k))
    grid = [[W0[i][perm[j]] for j in range(m)] for i in range(m)]
    field = P.field if all(x.is_real for row in grid for x in row) else COMPLEX
    W = PolyMatrix.from_constant(grid, field)
    R = W.star() * P
    for i in range(m):
        for j in range(m):
            if i < n and j < n:
                continue
            want = one if i == j else zero
            assert RatFn.coerce(R[i, j]) == want, "stripped factor lost block form"
    Q = R.submatrix(list(range(n)), list(range(n)))
    return Q, W


def strip_identity(P: PolyMatrix, k: int) -> PolyMatrix:
    """Remove a trailing Id_k block: P*P = M + Id_k yields Q with Q*Q = M."""
    return _strip_with_unitary(P, k)[0]


def _verify_cancellation(S: PolyMatrix, gram: PolyMatrix, U: PolyMatrix, Q: PolyMatrix):
    n = S.rows
    if U.star() * U != PolyMatrix.identity(n, U.field):
        raise VerificationFailure("cancellation produced a non-unitary multiplier")
    if U * S != Q:
        raise VerificationFailure("cancellation multiplier does not map S to Q")
    if not Q.is_polynomial():
        raise VerificationFailure("cancellation left a pole behind")
    if Q.star() * Q != gram:
        raise VerificationFailure("cancellation changed the gram matrix")


def cancel_poles(S: PolyMatrix) -> Tuple[PolyMatrix, PolyMatrix]:
    """Find a rational unitary U with Q = U*S polynomial and Q*Q = S*S.

    Denominators of U divide a power of lcd(S) * star(lcd(S)).  Irreducible
    factors of the denominator are processed by increasing degree, then
    coefficient order, each factor's multiplicity exhausted before moving on.
    """
    from .splitoff import split_matrix_zero

    if S.rows != S.cols:
        raise NotSquare(f"pole cancellation needs a square matrix, got {S.rows}x{S.cols}")
    n = S.rows
    gram = (S.star() * S).to_polynomial()
    a = lcd(S)
    if a.is_one:
        return PolyMatrix.identity(n, S.field), S.to_polynomial()
    if S.field == REAL:
        _, factors = factor_rational(a)
    else:
        _, factors = factor_gaussian(a)
    # exact mode: every root of the denominator must live in Q(i)
    roots_known = {p: gaussian_roots(p) for p, _ in factors}
    if S.field == REAL and n % 2 and any(p.degree() == 2 for p, _ in factors):
        # odd real size: pad to S + [1], cancel there, strip the block again
        padded = S.block_diag(PolyMatrix.identity(1, REAL))
        U_pad, Q_pad = cancel_poles(padded)
        Q, W = _strip_with_unitary(Q_pad, 1)
        X = W.star() * U_pad
        # X is unitary with last column e_{n+1}, hence block diagonal U + [1]
        for i in range(n + 1):
            for j in range(n + 1):
                if i < n and j < n:
                    continue
                want = RatFn.one() if i == j else RatFn.zero()
                assert RatFn.coerce(X[i, j]) == want, "padding unitary not block diagonal"
        U = X.submatrix(list(range(n)), list(range(n)))
        _verify_cancellation(S, gram, U, Q)
        return U, Q
    U = PolyMatrix.identity(n, S.field)
    Q = S.scale(a).to_polynomial()
    for p, mult in factors:
        if p.degree() == 1:
            z = roots_known[p][0].value
            for _ in range(mult):
                step = split_matrix_zero(Q, z)
                lead = _t_identity(n, step.A.field) - step.A
                V = lead.star().scale(RatFn(UniPoly.one(), p.star()))
                U = V * U
                Q = step.P
        else:
            # real-irreducible quadratic: two split-offs at the same root
            z = _positive_imag_root(p)
            for _ in range(mult):
                first = split_matrix_zero(Q, z)
                second = split_matrix_zero(first.P, z)
                T0 = _t_identity(n, first.A.field) - first.A
                T1 = _t_identity(n, second.A.field) - second.A
                V = (T0 * T1).transpose().scale(RatFn(UniPoly.one(), p))
                U = V * U
                Q = second.P
    _verify_cancellation(S, gram, U, Q)
    return U, Q
