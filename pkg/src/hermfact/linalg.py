"""Exact linear algebra over Q(i) on plain scalar grids.

Small dense routines used by the split-off and identity-stripping steps:
reduced row echelon form, null/column spaces with deterministic echelon
bases, hermitian projections, and rational unitary completion via the
Cayley transform (which avoids square roots entirely).
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .errors import PreconditionViolated
from .scalars import Scalar

Vec = Tuple[Scalar, ...]
Grid = List[List[Scalar]]

_ZERO = Scalar.zero()
_ONE = Scalar.one()


def identity_grid(n: int) -> Grid:
    return [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]


def zeros_grid(rows: int, cols: int) -> Grid:
    return [[_ZERO] * cols for _ in range(rows)]


def mat_mul(A: Sequence[Sequence[Scalar]], B: Sequence[Sequence[Scalar]]) -> Grid:
    n, m, p = len(A), len(B), len(B[0])
    return [
        [sum((A[i][k] * B[k][j] for k in range(m)), _ZERO) for j in range(p)]
        for i in range(n)
    ]


def mat_add(A, B) -> Grid:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B) -> Grid:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c: Scalar) -> Grid:
    return [[x * c for x in row] for row in A]


def conj_transpose(A) -> Grid:
    return [[A[i][j].conj() for i in range(len(A))] for j in range(len(A[0]))]


def transpose(A) -> Grid:
    return [[A[i][j] for i in range(len(A))] for j in range(len(A[0]))]


def mat_eq(A, B) -> bool:
    return all(x == y for ra, rb in zip(A, B) for x, y in zip(ra, rb))


def is_zero_grid(A) -> bool:
    return all(x.is_zero for row in A for x in row)


def dot_h(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    """Hermitian pairing <u, v> = sum conj(u_i) v_i."""
    return sum((a.conj() * b for a, b in zip(u, v)), _ZERO)


def dot_b(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    """Symmetric bilinear pairing u^T v (no conjugation)."""
    return sum((a * b for a, b in zip(u, v)), _ZERO)


def rref(rows: Sequence[Sequence[Scalar]]) -> Tuple[Grid, List[int]]:
    """Reduced row echelon form and pivot column indices."""
    R = [list(r) for r in rows]
    if not R:
        return [], []
    ncols = len(R[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(R)) if not R[i][c].is_zero), None)
        if pivot_row is None:
            continue
        R[r], R[pivot_row] = R[pivot_row], R[r]
        inv = R[r][c].inverse()
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and not R[i][c].is_zero:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R[:r], pivots


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: Optional[int] = None) -> List[Vec]:
    """Echelon basis of {x : rows * x = 0}, deterministic."""
    if not rows:
        if ncols is None:
            raise PreconditionViolated("nullspace of empty system needs a column count")
        return [tuple(_ONE if i == j else _ZERO for i in range(ncols)) for j in range(ncols)]
    ncols = len(rows[0])
    R, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [_ZERO] * ncols
        v[f] = _ONE
        for r, p in enumerate(pivots):
            v[p] = -R[r][f]
        basis.append(tuple(v))
    return basis


def column_space_basis(grid: Sequence[Sequence[Scalar]]) -> List[Vec]:
    """Echelon basis of the column span (columns of the rref of the transpose)."""
    cols = transpose(grid)
    R, _ = rref(cols)
    return [tuple(row) for row in R]


def span_dim(vectors: Sequence[Sequence[Scalar]]) -> int:
    if not vectors:
        return 0
    R, _ = rref(vectors)
    return len(R)


def in_span(v: Sequence[Scalar], vectors: Sequence[Sequence[Scalar]]) -> bool:
    base = span_dim(vectors)
    return span_dim(list(vectors) + [list(v)]) == base


def solve(A: Sequence[Sequence[Scalar]], b: Sequence[Scalar]) -> Optional[Vec]:
    """One solution x of A x = b, or None; free variables set to zero."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [bb] for row, bb in zip(A, b)]
    R, pivots = rref(aug)
    for row in R:
        if all(x.is_zero for x in row[:-1]) and not row[-1].is_zero:
            return None
    x = [_ZERO] * n
    for r, p in enumerate(pivots):
        if p == n:
            return None
        x[p] = R[r][n]
    return tuple(x)


def inverse_grid(A: Sequence[Sequence[Scalar]]) -> Grid:
    n = len(A)
    aug = [list(row) + list(identity_grid(n)[i]) for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise PreconditionViolated("matrix is singular")
    return [row[n:] for row in R[:n]]


def gram(vectors: Sequence[Sequence[Scalar]]) -> Grid:
    return [[dot_h(u, v) for v in vectors] for u in vectors]


def projection_onto(vectors: Sequence[Sequence[Scalar]], n: int) -> Grid:
    """Hermitian projection onto span(vectors): B (B*B)^-1 B*."""
    vecs = [v for v in vectors if any(not x.is_zero for x in v)]
    if not vecs:
        return zeros_grid(n, n)
    B = transpose(vecs)  # n x m, columns are the vectors
    BtB = gram(vecs)
    inv = inverse_grid(BtB)
    return mat_mul(mat_mul(B, inv), conj_transpose(B))


def is_unitary_grid(U: Sequence[Sequence[Scalar]]) -> bool:
    return mat_eq(mat_mul(conj_transpose(U), U), identity_grid(len(U)))


def _cayley_column_unitary(y: Sequence[Scalar]) -> Grid:
    """Rational unitary U with U e_1 = y, for a unit vector y (y*y = 1)."""
    n = len(y)
    e = [_ONE] + [_ZERO] * (n - 1)
    if all((a - b).is_zero for a, b in zip(y, e)):
        return identity_grid(n)
    if all((a + b).is_zero for a, b in zip(y, e)):
        U = identity_grid(n)
        U[0][0] = -_ONE
        return U
    v = [(a + b) / Scalar.coerce(2) for a, b in zip(y, e)]
    u = [(b - a) / Scalar.coerce(2) for a, b in zip(y, e)]
    vv = dot_h(v, v)
    # v*u is purely imaginary, write it as i*beta
    vu = dot_h(v, u)
    if vu.re != 0:
        raise PreconditionViolated("input column is not a unit vector")
    beta = vu.im
    col_v = [[x] for x in v]
    col_u = [[x] for x in u]
    K = mat_scale(
        mat_sub(
            mat_mul(col_u, conj_transpose(col_v)),
            mat_mul(col_v, conj_transpose(col_u)),
        ),
        vv.inverse(),
    )
    alpha = Scalar(-(beta / (vv.re * vv.re)))
    K = mat_add(K, mat_scale(mat_mul(col_v, conj_transpose(col_v)), alpha * Scalar.i()))
    # K is skew-hermitian with K v = u, so the Cayley transform below is
    # unitary and sends e_1 = (Id + K) v to (Id - K) v = y
    num = mat_sub(identity_grid(n), K)
    den = mat_add(identity_grid(n), K)
    return mat_mul(num, inverse_grid(den))


def extend_to_unitary(columns: Sequence[Sequence[Scalar]], n: int) -> Grid:
    """Unitary U over Q(i) whose first k columns are the given orthonormal ones."""
    k = len(columns)
    for idx, c in enumerate(columns):
        if len(c) != n:
            raise PreconditionViolated("column length mismatch")
        if dot_h(c, c) != _ONE:
            raise PreconditionViolated("column is not a unit vector")
        for d in columns[:idx]:
            if not dot_h(d, c).is_zero:
                raise PreconditionViolated("columns are not pairwise orthogonal")
    U = identity_grid(n)
    cols = [list(c) for c in columns]
    for j in range(k):
        # bring the j-th target into the coordinates fixed so far
        Uh = conj_transpose(U)
        y = [sum((Uh[i][l] * cols[j][l] for l in range(n)), _ZERO) for i in range(n)]
        # y has zeros in the first j coordinates (orthogonal to handled columns)
        if any(not y[i].is_zero for i in range(j)):
            raise PreconditionViolated("columns are not pairwise orthogonal")
        block = _cayley_column_unitary(y[j:])
        full = identity_grid(n)
        for a in range(n - j):
            for b in range(n - j):
                full[j + a][j + b] = block[a][b]
        U = mat_mul(U, full)
    return U
