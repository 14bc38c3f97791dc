"""Splitting a linear factor (t*Id - A) off a gram factor at a zero of Q*Q.

At a point z with (Q*Q)(z) = 0, the constant matrix A = z*proj_U + z*proj_UT
(U the image of Q(z), UT its hermitian complement) is normal with
eigenvalues in {z, conj z}, satisfies (t*Id - A)*(t*Id - A) =
(t - z)*(t - z)*Id, and left-divides Q.  Over the reals the subspace U must
additionally satisfy conj(U) = U-perp so that A has real entries; this
holds exactly when U is totally isotropic for the symmetric bilinear form
v^T w, and maximal isotropic subspaces (dimension n/2) exist because the
standard form on an even-dimensional space over Q(i) is hyperbolic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import sympy

from .errors import (
    NotAZero,
    NotIsotropic,
    OddDimension,
    OddDimensionReal,
)
from .linalg import (
    Vec,
    column_space_basis,
    conj_transpose,
    dot_b,
    dot_h,
    in_span,
    mat_scale,
    mat_sub,
    nullspace,
    projection_onto,
    rref,
)
from .matrix import COMPLEX, REAL, PolyMatrix, divide_left
from .poly import UniPoly
from .scalars import RAT, Scalar, rat, rat_sqrt

_ZERO = Scalar.zero()
_ONE = Scalar.one()


@dataclass(frozen=True)
class SplitStep:
    """One split-off: Q = (t*Id - A) * P with A normal, eigenvalues {z, z*}."""

    z: Scalar
    A: PolyMatrix
    P: PolyMatrix
    basisU: Tuple[Vec, ...]


def _squarefree_kernel(q: RAT) -> int:
    """Square-free part of numerator * denominator of a positive rational."""
    m = int(q.numerator) * int(q.denominator)
    out = 1
    for p, e in sympy.factorint(m).items():
        if e % 2:
            out *= int(p)
    return out


def _conj_vec(v: Sequence[Scalar]) -> Vec:
    return tuple(x.conj() for x in v)


def isotropic_completion(U0: Sequence[Sequence[Scalar]], n: int) -> List[Vec]:
    """Extend U0 to a basis of a maximal (n/2-dim) totally isotropic subspace.

    Isotropy is for the symmetric bilinear form v^T w over Q(i).  Each
    extension vector is found inside the conjugation-stable complement W of
    span(U0) + conj(span(U0)): a rational orthogonal basis of W splits the
    form into <c_1, ..., c_k>, and since that form is hyperbolic (Witt
    cancellation against the ambient standard form) some pair c_i, c_j has
    square rational product c_i c_j = s^2, giving the isotropic vector
    r_i + i(s/c_j) r_j.
    """
    if n % 2:
        raise OddDimension(f"maximal isotropic subspaces need even dimension, got {n}")
    vectors = [tuple(v) for v in U0]
    for a in range(len(vectors)):
        for b in range(a, len(vectors)):
            if not dot_b(vectors[a], vectors[b]).is_zero:
                raise NotIsotropic(
                    f"vectors {a} and {b} have nonzero symmetric pairing"
                )
    basis_rows, _ = rref(vectors) if vectors else ([], [])
    basis: List[Vec] = [tuple(r) for r in basis_rows]
    while len(basis) < n // 2:
        # conjugation-stable span and its hermitian (= bilinear) complement
        vspan = [list(v) for v in basis] + [list(_conj_vec(v)) for v in basis]
        constraint = [[x.conj() for x in row] for row in vspan]
        W = nullspace(constraint, ncols=n)
        # real basis of W: real and imaginary parts, reduced
        real_rows = []
        for w in W:
            real_rows.append([Scalar(x.re) for x in w])
            real_rows.append([Scalar(x.im) for x in w])
        R, _ = rref(real_rows)
        reals: List[Vec] = [tuple(r) for r in R]
        # rational Gram-Schmidt (no square roots; norms stay rational > 0)
        ortho: List[Vec] = []
        norms: List[RAT] = []
        for r in reals:
            v = list(r)
            for q, c in zip(ortho, norms):
                coeff = dot_b(r, q).re / c
                v = [a - Scalar(coeff) * b for a, b in zip(v, q)]
            ortho.append(tuple(v))
            norms.append(dot_b(v, v).re)
        kernels = [_squarefree_kernel(c) for c in norms]
        pair = None
        for a in range(len(kernels)):
            for b in range(a + 1, len(kernels)):
                if kernels[a] == kernels[b]:
                    pair = (a, b)
                    break
            if pair is not None:
                break
        # a same-square-class pair always exists: the form on W is hyperbolic,
        # so every square class occurs an even number of times
        assert pair is not None, "even-dimensional complement with no isotropic pair"
        a, b = pair
        s = rat_sqrt(norms[a] * norms[b])
        assert s is not None
        scale = Scalar(rat(0), s / norms[b])
        w = tuple(x + scale * y for x, y in zip(ortho[a], ortho[b]))
        # normalize the leading entry to 1 for reproducible output
        lead = next(x for x in w if not x.is_zero)
        w = tuple(x / lead for x in w)
        basis.append(w)
    return basis


def split_matrix_zero(Q: PolyMatrix, z: Scalar) -> SplitStep:
    """Construct A and P with Q = (t*Id - A) * P at a matrix zero z of Q*Q."""
    n = Q.rows
    M = Q.star() * Q
    Mz = M.eval_at(z)
    if any(not x.is_zero for row in Mz for x in row):
        raise NotAZero(f"(Q*Q)({z}) is not the zero matrix")
    if Q.field == REAL and not z.is_real and n % 2:
        raise OddDimensionReal(
            "real split-off at a nonreal zero needs even size; pad with a 1 block"
        )
    Qz = Q.eval_at(z)
    image = column_space_basis(Qz)
    if z.is_real:
        # A = z*Id regardless of U; Q(z) itself vanishes
        basis = tuple(image)
        A = PolyMatrix.diagonal([UniPoly.constant(z)] * n, Q.field)
    else:
        if Q.field == REAL:
            basis = tuple(isotropic_completion(image, n))
        else:
            basis = tuple(image)
        proj = projection_onto(basis, n)
        zbar = z.conj()
        # A = conj(z) proj_U + z (Id - proj_U) = z Id - (z - conj z) proj_U
        grid = mat_scale(proj, zbar - z)
        for i in range(n):
            grid[i][i] = grid[i][i] + z
        field = Q.field if all(x.is_real for row in grid for x in row) else COMPLEX
        A = PolyMatrix.from_constant(grid, field)
    P = divide_left(Q, A)
    return SplitStep(z=z, A=A, P=P, basisU=basis)
