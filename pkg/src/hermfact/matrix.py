"""Matrices over Q(i)[t] and Q(i)(t).

Entries are UniPoly or RatFn values stored row-major; the field tag records
whether the instance lives over the reals (entries must then have real
coefficients) or the complex numbers.  The adjoint ``star`` is the conjugate
transpose using the coefficient-wise involution, so hermitian means
M = M.star() as matrices of polynomials.

Everything here is exact: determinants by Laplace expansion with subset
memoization, inverses by adjugate over the function field, Smith normal
form by gcd-driven row/column reduction with recorded unimodular
transforms, and one-sided evaluation/division for the split-off step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

from .errors import (
    Degenerate,
    DegenerateTarget,
    NotAFactorization,
    NotDivisible,
    NotHermitian,
    NotPolynomialGram,
    NotSquare,
    PreconditionViolated,
    SchemaError,
    ShapeUnsupported,
    SizeMismatch,
)
from .poly import RatFn, UniPoly
from .scalars import Scalar

Entry = Union[UniPoly, RatFn]

REAL = "real"
COMPLEX = "complex"


def _coerce_entry(x) -> Entry:
    if isinstance(x, (UniPoly, RatFn)):
        return x
    return UniPoly.coerce(x)


def join_fields(*tags: str) -> str:
    return COMPLEX if COMPLEX in tags else REAL


class PolyMatrix:
    """Immutable matrix of UniPoly/RatFn entries with a field tag."""

    __slots__ = ("rows", "cols", "field", "grid")

    def __init__(self, grid: Sequence[Sequence], field: str = REAL):
        if field not in (REAL, COMPLEX):
            raise SchemaError(f"unknown field tag {field!r}")
        g = tuple(tuple(_coerce_entry(x) for x in row) for row in grid)
        if not g or not g[0]:
            raise PreconditionViolated("matrix must have positive dimensions")
        if any(len(row) != len(g[0]) for row in g):
            raise PreconditionViolated("ragged matrix rows")
        if field == REAL and any(not x.is_real() for row in g for x in row):
            raise PreconditionViolated("real-tagged matrix with nonreal entry")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "rows", len(g))
        object.__setattr__(self, "cols", len(g[0]))
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, n: int, field: str = REAL) -> "PolyMatrix":
        one, zero = UniPoly.one(), UniPoly.zero()
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: str = REAL) -> "PolyMatrix":
        zero = UniPoly.zero()
        return cls([[zero] * cols for _ in range(rows)], field)

    @classmethod
    def diagonal(cls, entries: Sequence, field: str = REAL) -> "PolyMatrix":
        n = len(entries)
        zero = UniPoly.zero()
        return cls(
            [[_coerce_entry(entries[i]) if i == j else zero for j in range(n)] for i in range(n)],
            field,
        )

    @classmethod
    def column(cls, entries: Sequence, field: str = REAL) -> "PolyMatrix":
        return cls([[x] for x in entries], field)

    @classmethod
    def from_constant(cls, scalar_grid: Sequence[Sequence[Scalar]], field: str = REAL) -> "PolyMatrix":
        return cls(
            [[UniPoly.constant(x) for x in row] for row in scalar_grid], field
        )

    # -- access -------------------------------------------------------------

    def __getitem__(self, ij) -> Entry:
        i, j = ij
        return self.grid[i][j]

    def row_list(self, i: int) -> List[Entry]:
        return list(self.grid[i])

    def col_list(self, j: int) -> List[Entry]:
        return [self.grid[i][j] for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entries(self):
        for row in self.grid:
            yield from row

    def map_entries(self, fn: Callable[[Entry], Entry], field: Optional[str] = None) -> "PolyMatrix":
        return PolyMatrix(
            [[fn(x) for x in row] for row in self.grid],
            self.field if field is None else field,
        )

    def is_polynomial(self) -> bool:
        return all(isinstance(x, UniPoly) or x.is_polynomial for x in self.entries())

    def to_polynomial(self) -> "PolyMatrix":
        """Convert RatFn entries to UniPoly; error if any entry has a pole."""

        def conv(x: Entry) -> UniPoly:
            if isinstance(x, UniPoly):
                return x
            if not x.is_polynomial:
                raise NotPolynomialGram(f"entry {x} is not a polynomial")
            return x.to_poly()

        return self.map_entries(conv)

    def to_ratfn(self) -> "PolyMatrix":
        return self.map_entries(RatFn.coerce)

    def is_constant(self) -> bool:
        return all(
            (isinstance(x, UniPoly) and x.is_constant)
            or (isinstance(x, RatFn) and x.is_constant)
            for x in self.entries()
        )

    def constant_grid(self) -> List[List[Scalar]]:
        out = []
        for row in self.grid:
            line = []
            for x in row:
                if isinstance(x, RatFn):
                    line.append(x.constant_value())
                elif x.is_constant:
                    line.append(x.constant_term())
                else:
                    raise PreconditionViolated(f"nonconstant entry {x}")
            out.append(line)
        return out

    def is_zero(self) -> bool:
        return all(x.is_zero for x in self.entries())

    def max_degree(self) -> int:
        degs = [x.degree() for x in self.entries() if isinstance(x, UniPoly) and not x.is_zero]
        return max(degs) if degs else -1

    # -- arithmetic ----------------------------------------------------------

    def _require_same_shape(self, other: "PolyMatrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise SizeMismatch(
                f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._require_same_shape(other)
        return PolyMatrix(
            [
                [self.grid[i][j] + other.grid[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
            join_fields(self.field, other.field),
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + (-other)

    def __neg__(self) -> "PolyMatrix":
        return self.map_entries(lambda x: -x)

    def __mul__(self, other):
        if not isinstance(other, PolyMatrix):
            return self.scale(other)
        if self.cols != other.rows:
            raise SizeMismatch(f"{self.rows}x{self.cols} times {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = self.grid[i][0] * other.grid[0][j]
                for k in range(1, self.cols):
                    acc = acc + self.grid[i][k] * other.grid[k][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(out, join_fields(self.field, other.field))

    def __rmul__(self, other):
        if isinstance(other, PolyMatrix):
            return NotImplemented
        return self.scale(other)

    def scale(self, x) -> "PolyMatrix":
        x = _coerce_entry(x) if not isinstance(x, (UniPoly, RatFn)) else x
        field = self.field if x.is_real() else COMPLEX
        return self.map_entries(lambda e: e * x, field=field)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            [[self.grid[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.field,
        )

    def star(self) -> "PolyMatrix":
        """Conjugate transpose with the coefficient-wise involution."""
        return PolyMatrix(
            [[self.grid[i][j].star() for i in range(self.rows)] for j in range(self.cols)],
            self.field,
        )

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.rows != other.rows or self.cols != other.cols:
            return False
        return all(
            RatFn.coerce(self.grid[i][j]) == RatFn.coerce(other.grid[i][j])
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def __hash__(self):
        return hash(tuple(RatFn.coerce(x) for x in self.entries()))

    # -- submatrices --------------------------------------------------------------

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(
            [[self.grid[i][j] for j in col_idx] for i in row_idx], self.field
        )

    def drop_row(self, i: int) -> "PolyMatrix":
        rows = [r for r in range(self.rows) if r != i]
        return self.submatrix(rows, range(self.cols))

    def hstack(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.rows != other.rows:
            raise SizeMismatch("hstack with different row counts")
        return PolyMatrix(
            [list(self.grid[i]) + list(other.grid[i]) for i in range(self.rows)],
            join_fields(self.field, other.field),
        )

    def block_diag(self, other: "PolyMatrix") -> "PolyMatrix":
        zero = UniPoly.zero()
        top = [list(r) + [zero] * other.cols for r in self.grid]
        bottom = [[zero] * self.cols + list(r) for r in other.grid]
        return PolyMatrix(top + bottom, join_fields(self.field, other.field))

    # -- determinant / inverse ------------------------------------------------------

    def det(self) -> Entry:
        if not self.is_square:
            raise NotSquare(f"determinant of {self.rows}x{self.cols} matrix")
        n = self.rows
        memo = {}

        def rec(i: int, cols: Tuple[int, ...]) -> Entry:
            if i == n:
                return UniPoly.one()
            key = cols
            if key in memo:
                return memo[key]
            acc = None
            for pos, j in enumerate(cols):
                a = self.grid[i][j]
                if a.is_zero:
                    continue
                sub = rec(i + 1, cols[:pos] + cols[pos + 1 :])
                term = a * sub
                if pos % 2:
                    term = -term
                acc = term if acc is None else acc + term
            if acc is None:
                acc = UniPoly.zero()
            memo[key] = acc
            return acc

        return rec(0, tuple(range(n)))

    def cofactor_matrix(self) -> "PolyMatrix":
        n = self.rows
        idx = list(range(n))
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                if n > 1:
                    sub = self.submatrix(
                        [r for r in idx if r != i], [c for c in idx if c != j]
                    )
                    c = sub.det()
                else:
                    c = UniPoly.one()
                if (i + j) % 2:
                    c = -c
                row.append(c)
            out.append(row)
        return PolyMatrix(out, self.field)

    def inverse(self) -> "PolyMatrix":
        """Exact inverse over the function field (entries RatFn)."""
        if not self.is_square:
            raise NotSquare("inverse of a nonsquare matrix")
        d = RatFn.coerce(self.det())
        if d.is_zero:
            raise Degenerate("inverse of a singular matrix")
        adj = self.cofactor_matrix().transpose()
        return adj.map_entries(lambda x: RatFn.coerce(x) / d)

    # -- structure tests --------------------------------------------------------------

    def is_hermitian(self) -> bool:
        return self.is_square and self == self.star()

    def require_hermitian(self):
        if not self.is_square:
            raise NotSquare(f"{self.rows}x{self.cols} matrix cannot be hermitian")
        if not self.is_hermitian():
            raise NotHermitian("matrix differs from its conjugate transpose")

    def eval_at(self, z: Scalar) -> List[List[Scalar]]:
        """Pointwise evaluation; entries must have no pole at z."""
        out = []
        for row in self.grid:
            line = []
            for x in row:
                line.append(x(z))
            out.append(line)
        return out

    # -- serialization -------------------------------------------------------------------

    def to_json(self):
        return {
            "field": self.field,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [x.to_json() for x in self.entries()],
        }

    @classmethod
    def from_json(cls, data) -> "PolyMatrix":
        if not isinstance(data, dict):
            raise SchemaError("matrix payload must be an object")
        missing = {"field", "rows", "cols", "entries"} - set(data)
        if missing:
            raise SchemaError(f"matrix payload missing keys: {sorted(missing)}")
        rows, cols = data["rows"], data["cols"]
        if not (isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0):
            raise SchemaError("rows/cols must be positive integers")
        ent = data["entries"]
        if not isinstance(ent, list) or len(ent) != rows * cols:
            raise SchemaError(f"expected {rows * cols} entries, got {len(ent) if isinstance(ent, list) else 'non-list'}")
        parsed = [RatFn.from_json(e) if isinstance(e, dict) else UniPoly.from_json(e) for e in ent]
        grid = [parsed[i * cols : (i + 1) * cols] for i in range(rows)]
        field = data["field"]
        if field not in (REAL, COMPLEX):
            raise SchemaError(f"unknown field tag {field!r}")
        try:
            return cls(grid, field)
        except PreconditionViolated as exc:
            raise SchemaError(str(exc)) from exc

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self.grid)
        return f"PolyMatrix[{self.field} {self.rows}x{self.cols}: {body}]"


# -- psd test -------------------------------------------------------------------------


def char_poly_coefficients(M: PolyMatrix) -> List[UniPoly]:
    """c_1 ... c_n with det(s*Id - M) = s^n - c_1 s^(n-1) + ... +- c_n.

    c_i is the sum of the i-by-i principal minors (i-th elementary symmetric
    function of the eigenvalues).
    """
    if not M.is_square:
        raise NotSquare("characteristic polynomial of a nonsquare matrix")
    n = M.rows
    sums = [UniPoly.zero() for _ in range(n + 1)]
    idx = list(range(n))
    for mask in range(1, 1 << n):
        subset = [i for i in idx if (mask >> i) & 1]
        d = M.submatrix(subset, subset).det()
        sums[len(subset)] = sums[len(subset)] + UniPoly.coerce(d)
    return sums[1:]


def is_psd_matrix(M: PolyMatrix) -> bool:
    """True iff M(x) is positive semidefinite for every real x."""
    from .roots import psd_check

    M.require_hermitian()
    return all(psd_check(c) for c in char_poly_coefficients(M))


# -- one-sided evaluation and division ---------------------------------------------------


def coefficient_matrices(P: PolyMatrix) -> List[List[List[Scalar]]]:
    P = P.to_polynomial()
    d = max(0, P.max_degree())
    return [
        [[P.grid[i][j].coeff(k) for j in range(P.cols)] for i in range(P.rows)]
        for k in range(d + 1)
    ]


def _scalar_mat_mul(A: List[List[Scalar]], B: List[List[Scalar]]) -> List[List[Scalar]]:
    n, m, p = len(A), len(B), len(B[0])
    return [
        [sum((A[i][k] * B[k][j] for k in range(m)), Scalar.zero()) for j in range(p)]
        for i in range(n)
    ]


def _scalar_mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _check_eval_shapes(P: PolyMatrix, A: PolyMatrix):
    if not P.is_square or not A.is_square or P.rows != A.rows:
        raise SizeMismatch("evaluation needs square P and A of equal size")
    if not A.is_constant():
        raise PreconditionViolated("evaluation point must be a constant matrix")


def eval_right(P: PolyMatrix, A: PolyMatrix) -> PolyMatrix:
    """Sum of P_k * A^k for P = sum P_k t^k (A-powers on the right)."""
    _check_eval_shapes(P, A)
    coeffs = coefficient_matrices(P)
    Ag = A.constant_grid()
    acc = coeffs[-1]
    for k in range(len(coeffs) - 2, -1, -1):
        acc = _scalar_mat_add(_scalar_mat_mul(acc, Ag), coeffs[k])
    return PolyMatrix.from_constant(acc, join_fields(P.field, A.field))


def eval_left(P: PolyMatrix, A: PolyMatrix) -> PolyMatrix:
    """Sum of A^k * P_k for P = sum P_k t^k (A-powers on the left)."""
    _check_eval_shapes(P, A)
    coeffs = coefficient_matrices(P)
    Ag = A.constant_grid()
    acc = coeffs[-1]
    for k in range(len(coeffs) - 2, -1, -1):
        acc = _scalar_mat_add(_scalar_mat_mul(Ag, acc), coeffs[k])
    return PolyMatrix.from_constant(acc, join_fields(P.field, A.field))


def _reassemble(coeff_mats: List[List[List[Scalar]]], field: str) -> PolyMatrix:
    if not coeff_mats:
        raise PreconditionViolated("empty coefficient list")
    rows, cols = len(coeff_mats[0]), len(coeff_mats[0][0])
    grid = [
        [UniPoly([cm[i][j] for cm in coeff_mats]) for j in range(cols)]
        for i in range(rows)
    ]
    return PolyMatrix(grid, field)


def divide_left(P: PolyMatrix, A: PolyMatrix) -> PolyMatrix:
    """S with P = (t*Id - A) * S, requiring eval_left(P, A) = 0."""
    _check_eval_shapes(P, A)
    if not eval_left(P, A).is_zero():
        raise NotDivisible("left evaluation at A is nonzero")
    coeffs = coefficient_matrices(P)
    Ag = A.constant_grid()
    d = len(coeffs) - 1
    if d == 0:
        # P constant and divisible means P = 0; quotient 0 of matching shape
        return PolyMatrix.zeros(P.rows, P.cols, join_fields(P.field, A.field))
    S = [None] * d
    S[d - 1] = coeffs[d]
    for k in range(d - 1, 0, -1):
        S[k - 1] = _scalar_mat_add(coeffs[k], _scalar_mat_mul(Ag, S[k]))
    return _reassemble(S, join_fields(P.field, A.field))


def divide_right(P: PolyMatrix, A: PolyMatrix) -> PolyMatrix:
    """S with P = S * (t*Id - A), requiring eval_right(P, A) = 0."""
    _check_eval_shapes(P, A)
    if not eval_right(P, A).is_zero():
        raise NotDivisible("right evaluation at A is nonzero")
    coeffs = coefficient_matrices(P)
    Ag = A.constant_grid()
    d = len(coeffs) - 1
    if d == 0:
        return PolyMatrix.zeros(P.rows, P.cols, join_fields(P.field, A.field))
    S = [None] * d
    S[d - 1] = coeffs[d]
    for k in range(d - 1, 0, -1):
        S[k - 1] = _scalar_mat_add(coeffs[k], _scalar_mat_mul(S[k], Ag))
    return _reassemble(S, join_fields(P.field, A.field))


# -- Smith normal form ------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithData:
    """S*M*T = diag(invariant factors, padded by zeros) with S, T unimodular."""

    invariant_factors: Tuple[UniPoly, ...]
    S: PolyMatrix
    T: PolyMatrix
    diagonal: PolyMatrix


def _deg_key(p: UniPoly) -> int:
    return p.degree() if not p.is_zero else 1 << 60


def smith_normal_form(M: PolyMatrix) -> SmithData:
    """Monic invariant factors with recorded unimodular transforms."""
    M = M.to_polynomial()
    r, c = M.rows, M.cols
    D = [[M.grid[i][j] for j in range(c)] for i in range(r)]
    S = [[UniPoly.one() if i == j else UniPoly.zero() for j in range(r)] for i in range(r)]
    T = [[UniPoly.one() if i == j else UniPoly.zero() for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        S[i], S[j] = S[j], S[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in T:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q: UniPoly):
        # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]

    def add_col(dst, src, q: UniPoly):
        for row in D:
            row[dst] = row[dst] + q * row[src]
        for row in T:
            row[dst] = row[dst] + q * row[src]

    def scale_row(i, u: Scalar):
        D[i] = [x.scale(u) for x in D[i]]
        S[i] = [x.scale(u) for x in S[i]]

    n = min(r, c)
    for k in range(n):
        while True:
            pivot = None
            best = None
            for i in range(k, r):
                for j in range(k, c):
                    if D[i][j].is_zero:
                        continue
                    key = (D[i][j].degree(), i, j)
                    if best is None or key < best:
                        best, pivot = key, (i, j)
            if pivot is None:
                break
            pi, pj = pivot
            if pi != k:
                swap_rows(k, pi)
            if pj != k:
                swap_cols(k, pj)
            dirty = False
            for i in range(k + 1, r):
                if not D[i][k].is_zero:
                    q = D[i][k] // D[k][k]
                    add_row(i, k, -q)
                    if not D[i][k].is_zero:
                        dirty = True
            for j in range(k + 1, c):
                if not D[k][j].is_zero:
                    q = D[k][j] // D[k][k]
                    add_col(j, k, -q)
                    if not D[k][j].is_zero:
                        dirty = True
            if dirty:
                continue
            # pivot must divide every remaining entry for the divisibility chain
            offender = None
            for i in range(k + 1, r):
                for j in range(k + 1, c):
                    if not D[k][k].divides(D[i][j]):
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is not None:
                add_row(k, offender, UniPoly.one())
                continue
            break
        if not D[k][k].is_zero and not D[k][k].is_monic():
            scale_row(k, D[k][k].lc().inverse())
    factors = tuple(D[k][k] for k in range(n) if not D[k][k].is_zero)
    field = M.field
    return SmithData(
        invariant_factors=factors,
        S=PolyMatrix(S, field),
        T=PolyMatrix(T, field),
        diagonal=PolyMatrix(D, field),
    )


# -- factorization verification ----------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """Certificate that Q*Q = target (exact mode: residual zero iff verified)."""

    Q: PolyMatrix
    target: PolyMatrix
    verified: bool
    residual_zero: bool
    label: Optional[str] = None

    def to_json(self):
        out = {
            "Q": self.Q.to_json(),
            "target": self.target.to_json(),
            "verified": self.verified,
        }
        if self.label is not None:
            out["class"] = self.label
        return out


def verify_factorization(Q: PolyMatrix, M: PolyMatrix, label: Optional[str] = None) -> Factorization:
    if Q.cols != M.rows or not M.is_square:
        raise SizeMismatch(
            f"cannot compare {Q.rows}x{Q.cols} gram factor with {M.rows}x{M.cols} target"
        )
    residual = Q.star() * Q - M
    ok = residual.is_zero()
    return Factorization(Q=Q, target=M, verified=ok, residual_zero=ok, label=label)


# -- Cauchy-Binet extension ----------------------------------------------------------------------


def cauchy_binet_extend(Q: PolyMatrix) -> List[UniPoly]:
    """v with Q*v = 0 and v*v = det(Q*Q), built from signed maximal minors.

    The i-th entry is the conjugate of (-1)^i times the minor obtained by
    deleting row i; (Q | v) is then a square factorization of M + <det M>.
    """
    if Q.rows != Q.cols + 1:
        raise SizeMismatch(f"extension needs (n+1)xn input, got {Q.rows}x{Q.cols}")
    Q = Q.to_polynomial()
    gram_det = UniPoly.coerce((Q.star() * Q).det())
    if gram_det.is_zero:
        raise DegenerateTarget("gram matrix of the factor is singular")
    v = []
    for i in range(Q.rows):
        m = UniPoly.coerce(Q.drop_row(i).det())
        if (i + Q.cols) % 2:
            m = -m
        v.append(m.star())
    return v


def extend_to_square(Q: PolyMatrix) -> PolyMatrix:
    v = cauchy_binet_extend(Q)
    return Q.hstack(PolyMatrix.column(v, Q.field))


# -- equivalence of factorizations ------------------------------------------------------------------


def _nonconstant_derivative(x: Entry) -> RatFn:
    return RatFn.coerce(x).derivative()


def _square_unitary_witness(Q1: PolyMatrix, Q2: PolyMatrix) -> Optional[PolyMatrix]:
    """Constant unitary U with U*Q1 = Q2, for square factorizations, or None."""
    U = Q2.to_ratfn() * Q1.inverse()
    if not U.is_constant():
        return None
    if not (U.star() * U == PolyMatrix.identity(U.rows, U.field)):
        return None
    return U


def equivalent_factorizations(Q1: PolyMatrix, Q2: PolyMatrix, M: PolyMatrix) -> bool:
    """Decide whether a constant unitary U maps Q1 onto Q2 (U*Q1 = Q2).

    Square factors are compared directly via U = Q2*Q1^(-1).  For the
    (n+1)xn shape both sides are extended by their minor vectors; the
    extension is unique up to a norm-1 constant c, so U = A + c*B where A
    uses (Q2 | 0) and B uses (0 | v2), and c is pinned by requiring the
    derivative of every entry of U to vanish.
    """
    if Q1.rows != Q2.rows or Q1.cols != Q2.cols:
        raise SizeMismatch("factorizations of different shapes")
    n = M.rows
    if Q1.cols != n:
        raise SizeMismatch("column count must match the target size")
    if Q1.rows > n + 1:
        raise ShapeUnsupported(f"{Q1.rows}x{Q1.cols} exceeds the (n+1)xn shape")
    if Q1.rows < n:
        raise ShapeUnsupported(f"fewer than {n} rows cannot factor a nondegenerate target")
    if UniPoly.coerce(M.det()).is_zero:
        raise DegenerateTarget("equivalence testing requires det M != 0")
    for Q in (Q1, Q2):
        if not verify_factorization(Q, M).verified:
            raise NotAFactorization("input does not satisfy Q*Q = M")
    if Q1.rows == n:
        return _square_unitary_witness(Q1, Q2) is not None

    E1 = extend_to_square(Q1)
    v2 = cauchy_binet_extend(Q2)
    zero_col = PolyMatrix.zeros(n + 1, 1, Q2.field)
    A = Q2.hstack(zero_col).to_ratfn() * E1.inverse()
    B = PolyMatrix.zeros(n + 1, n, Q2.field).hstack(
        PolyMatrix.column(v2, Q2.field)
    ).to_ratfn() * E1.inverse()

    candidate = None
    for i in range(n + 1):
        for j in range(n + 1):
            db = _nonconstant_derivative(B.grid[i][j])
            if db.is_zero:
                continue
            ratio = -(_nonconstant_derivative(A.grid[i][j]) / db)
            if not ratio.is_constant:
                return False
            candidate = ratio.constant_value()
            break
        if candidate is not None:
            break
    if candidate is None:
        candidate = Scalar.one()
    if not candidate.has_unit_norm():
        return False
    if Q1.field == REAL and Q2.field == REAL and not candidate.is_real:
        return False
    U = A + B.scale(candidate)
    if not U.is_constant():
        return False
    if not (U.star() * U == PolyMatrix.identity(n + 1, U.field)):
        return False
    return U.to_ratfn() * Q1.to_ratfn() == Q2.to_ratfn()


# -- hermitian congruence diagonalization over the function field ------------------------------------


def diagonalize_congruence_field(M: PolyMatrix) -> Tuple[PolyMatrix, List[RatFn]]:
    """T over the function field with T*MT diagonal; returns (T, diagonal).

    Pivots use the lowest-index nonzero diagonal entry; if the working
    diagonal is all zero, a basis change e_i -> e_i + e_j (or e_i + i*e_j
    when the real part cancels) creates one.
    """
    M.require_hermitian()
    n = M.rows
    if RatFn.coerce(M.det()).is_zero:
        raise Degenerate("congruence diagonalization requires det M != 0")
    W = [[RatFn.coerce(M.grid[i][j]) for j in range(n)] for i in range(n)]
    T = [[RatFn.one() if i == j else RatFn.zero() for j in range(n)] for i in range(n)]

    def col_op(dst: int, src: int, q: RatFn):
        # e_dst -> e_dst + q e_src acting on the quadratic form:
        # columns: col_dst += q col_src; rows: row_dst += q* row_src
        qs = q.star()
        for i in range(n):
            W[i][dst] = W[i][dst] + q * W[i][src]
        for j in range(n):
            W[dst][j] = W[dst][j] + qs * W[src][j]
        for i in range(n):
            T[i][dst] = T[i][dst] + q * T[i][src]

    for k in range(n):
        if W[k][k].is_zero:
            pivot_row = next(
                (i for i in range(k, n) if not W[i][i].is_zero), None
            )
            if pivot_row is not None:
                # swap basis vectors k and pivot_row
                for i in range(n):
                    W[i][k], W[i][pivot_row] = W[i][pivot_row], W[i][k]
                W[k], W[pivot_row] = W[pivot_row], W[k]
                for i in range(n):
                    T[i][k], T[i][pivot_row] = T[i][pivot_row], T[i][k]
            else:
                found = False
                for j in range(k + 1, n):
                    if W[k][j].is_zero:
                        continue
                    probe = W[k][j] + W[j][k]  # 2 Re of the entry
                    if not probe.is_zero:
                        col_op(k, j, RatFn.one())
                    else:
                        col_op(k, j, RatFn.coerce(UniPoly.constant(Scalar.i())))
                    found = True
                    break
                if not found:
                    raise Degenerate("zero row encountered; matrix is singular")
        piv = W[k][k]
        for j in range(k + 1, n):
            if not W[k][j].is_zero:
                col_op(j, k, -(W[k][j] / piv))
    Tm = PolyMatrix(T, M.field)
    return Tm, [W[k][k] for k in range(n)]
