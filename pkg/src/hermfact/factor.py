"""Factorization drivers: hermitian squares, class enumeration, classification.

A psd matrix polynomial M is brought to diagonal form by a semi-local
congruence; the diagonal is factored entrywise (complex lane, scalar
Fejer-Riesz) or by pairing equal square-free kernels into planar rotation
blocks (real lane); the rational factor Q_D T^(-1) is then made polynomial
by unitary pole cancellation.  Enumeration drivers seed the diagonal factor
from each two-squares class of det(M) and verify the resulting count laws,
and classify_factorization inverts the correspondence by compressing the
Cauchy-Binet minor vector with reflections over the semi-local ring.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    Degenerate,
    DeterminantNotSquare,
    Indeterminate,
    NotAFactorization,
    NotPSD,
    NotSquareFree,
    PreconditionViolated,
    RootsNotInField,
    SearchExhausted,
    ShapeUnsupported,
    TargetMismatch,
    VerificationFailure,
)
from .linalg import nullspace
from .matrix import (
    COMPLEX,
    REAL,
    Factorization,
    PolyMatrix,
    cauchy_binet_extend,
    equivalent_factorizations,
    is_psd_matrix,
    smith_normal_form,
    verify_factorization,
)
from .polecancel import cancel_poles
from .poly import RatFn, UniPoly
from .roots import psd_check
from .scalars import RAT, Scalar
from .semilocal import SemiLocalRing
from .twosquares import (
    KIND_COMPLEX,
    KIND_REAL,
    TwoSquares,
    enumerate_complex_scalar_classes,
    enumerate_two_squares_real,
    o2_equivalent,
    rat_two_squares,
    scalar_fejer_riesz,
    u1_equivalent,
)
from .wittsteps import CongruenceWitness, snf_congruence, square_split

__all__ = [
    "ClassifiedFactorization",
    "classify_factorization",
    "complex_square_factor",
    "constant_compressible",
    "constant_compression_kernel",
    "enumerate_complex_classes",
    "enumerate_real_classes",
    "real_nplus1_factor",
    "real_square_factor",
]

# slopes m parametrize the rational rotations (cos, sin) = ((1-m^2), 2m)/(1+m^2);
# each slope is used with both orientations of the target pair
_ROTATION_SLOPES = tuple(
    RAT(p, q)
    for p, q in (
        (0, 1),
        (1, 1),
        (-1, 1),
        (2, 1),
        (-2, 1),
        (1, 2),
        (-1, 2),
        (3, 1),
        (-3, 1),
        (1, 3),
        (-1, 3),
        (3, 2),
        (-3, 2),
        (2, 3),
        (-2, 3),
        (4, 1),
        (-4, 1),
        (1, 4),
        (-1, 4),
        (5, 1),
        (-5, 1),
        (1, 5),
        (-1, 5),
        (5, 2),
        (-5, 2),
    )
)


# -- input normalization ---------------------------------------------------------------------------


def _as_real_symmetric(M: PolyMatrix) -> PolyMatrix:
    M = M.to_polynomial()
    if any(not e.is_real() for e in M.entries()):
        raise PreconditionViolated("real drivers need a matrix with real entries")
    if M.field != REAL:
        M = M.map_entries(lambda x: x, REAL)
    M.require_hermitian()
    return M


def _as_complex_hermitian(M: PolyMatrix) -> PolyMatrix:
    M = M.to_polynomial()
    if M.field != COMPLEX:
        M = M.map_entries(lambda x: x, COMPLEX)
    M.require_hermitian()
    return M


def _require_psd(M: PolyMatrix) -> None:
    if not is_psd_matrix(M):
        raise NotPSD("matrix is not positive semidefinite on the real line")


def _det_poly(M: PolyMatrix) -> UniPoly:
    return UniPoly.coerce(M.det())


def _require_squarefree(d: UniPoly) -> None:
    if d.is_zero:
        raise Degenerate("determinant vanishes identically")
    if not d.is_constant and d.monic().squarefree_part() != d.monic():
        raise NotSquareFree(f"determinant {d} has a repeated factor")


# -- diagonal square factors -----------------------------------------------------------------------


def _norm_witness(q: RAT) -> Scalar:
    """A Gaussian rational of norm q, canonical via the two-squares map."""
    ts = rat_two_squares(q)
    if ts is None:
        raise RootsNotInField(
            f"constant {q} is not a sum of two rational squares"
        )
    return Scalar(ts[0], ts[1])


def _entry_split(d: UniPoly) -> Tuple[RAT, UniPoly, UniPoly]:
    """d = gamma * kernel * scale**2 with square-free gamma, monic kernel."""
    if d.is_zero:
        raise Degenerate("diagonal entry vanishes identically")
    if not psd_check(d):
        raise NotPSD(f"diagonal entry {d} is not nonnegative on the real line")
    gamma, kernel, scale = square_split(RatFn(d))
    return gamma, kernel, scale.to_poly()


def _real_diag_square(
    entries: Sequence[UniPoly],
    seed: Optional[Tuple[int, int, UniPoly]] = None,
) -> PolyMatrix:
    """Square F with F^T F = diag(entries), pairing equal square-free kernels.

    An entry k*s^2 with trivial kernel k = 1 gets the 1x1 block (s); two
    entries with the same kernel k become the planar block with columns
    (f*s, g*s) and (-g*s', f*s') where f^2 + g^2 = k.  Unpaired nontrivial
    kernels admit no square polynomial factor of the diagonal and abort.

    seed = (i, j, g0) pins the monic Gaussian witness g0 used for the pair
    (i, j); its norm must equal that pair's monic kernel.
    """
    m = len(entries)
    grid: List[List[UniPoly]] = [[UniPoly.zero()] * m for _ in range(m)]
    open_kernels: Dict[Tuple[RAT, UniPoly], int] = {}
    pairs: List[Tuple[int, int, RAT, UniPoly]] = []
    scales: List[UniPoly] = []
    for i, d in enumerate(entries):
        gamma, kernel, scale = _entry_split(d)
        scales.append(scale)
        if gamma == 1 and kernel.is_one:
            grid[i][i] = scale
            continue
        key = (gamma, kernel)
        j = open_kernels.pop(key, None)
        if j is None:
            open_kernels[key] = i
        else:
            pairs.append((j, i, gamma, kernel))
    if open_kernels:
        stuck = ", ".join(
            f"{g} * {k}" for (g, k) in sorted(open_kernels, key=lambda gk: str(gk))
        )
        raise SearchExhausted(
            f"diagonal has unpaired square-free kernels ({stuck}); no square"
            " polynomial factor of this diagonal exists"
        )
    for i, j, gamma, kernel in pairs:
        if seed is not None and {i, j} == {seed[0], seed[1]}:
            g0 = seed[2]
            if g0.star() * g0 != kernel:
                raise VerificationFailure(
                    "seeded class witness does not square to the pair kernel"
                )
        else:
            g0 = scalar_fejer_riesz(kernel).g if not kernel.is_one else UniPoly.one()
        h = g0.scale(_norm_witness(gamma))
        f, g = h.real_imag_parts()
        grid[i][i] = f * scales[i]
        grid[j][i] = g * scales[i]
        grid[i][j] = -(g * scales[j])
        grid[j][j] = f * scales[j]
    F = PolyMatrix(grid, REAL)
    if F.star() * F != PolyMatrix.diagonal(list(entries), REAL):
        raise VerificationFailure("diagonal factor does not square to the diagonal")
    return F


def _complex_diag_square(
    entries: Sequence[UniPoly],
    seed: Optional[Tuple[int, UniPoly]] = None,
) -> PolyMatrix:
    """Diagonal G with G*G = diag(entries), one scalar factor per entry."""
    gs = []
    for i, d in enumerate(entries):
        if seed is not None and i == seed[0]:
            g = seed[1]
            if g.star() * g != d:
                raise VerificationFailure(
                    "seeded class witness does not square to its diagonal entry"
                )
        else:
            g = scalar_fejer_riesz(d).g
        gs.append(g)
    return PolyMatrix.diagonal(gs, COMPLEX)


# -- pipeline core ---------------------------------------------------------------------------------


def _diagonal_polys(witness: CongruenceWitness) -> List[UniPoly]:
    return [d.to_poly() for d in witness.diagonal_entries]


def _cancel_and_verify(
    Q_D: PolyMatrix, witness: CongruenceWitness
) -> PolyMatrix:
    """Polynomial Q with Q*Q = witness.M, from the rational factor Q_D T^(-1)."""
    S = Q_D.to_ratfn() * witness.T.inverse()
    _, Q = cancel_poles(S)
    return Q


def _finish(Q: PolyMatrix, M: PolyMatrix, label: Optional[str]) -> Factorization:
    fact = verify_factorization(Q, M, label)
    if not fact.verified:
        raise VerificationFailure("pipeline output failed exact verification")
    return fact


# -- square factorizations -------------------------------------------------------------------------


def complex_square_factor(M: PolyMatrix) -> Factorization:
    """Polynomial n x n factor Q with Q*Q = M over the Gaussian rationals.

    Pipeline: semi-local congruence to the monic Smith form, scalar
    Fejer-Riesz on each diagonal entry, pole cancellation of Q_D T^(-1).
    """
    M = _as_complex_hermitian(M)
    _require_psd(M)
    witness = snf_congruence(M)
    Q_D = _complex_diag_square(_diagonal_polys(witness))
    return _finish(_cancel_and_verify(Q_D, witness), M, None)


def real_square_factor(M: PolyMatrix) -> Factorization:
    """Polynomial n x n factor Q with Q^T Q = M over the rationals.

    Requires det(M) to be the square of a rational polynomial; the diagonal
    congruence form is factored by pairing equal square-free kernels.
    """
    M = _as_real_symmetric(M)
    _require_psd(M)
    det = _det_poly(M)
    if det.is_zero:
        raise Degenerate("determinant vanishes identically")
    if det.sqrt_exact() is None:
        raise DeterminantNotSquare(f"det {det} is not a polynomial square")
    witness = snf_congruence(M)
    Q_D = _real_diag_square(_diagonal_polys(witness))
    return _finish(_cancel_and_verify(Q_D, witness), M, None)


def _block_witness(
    witness: CongruenceWitness, det: UniPoly
) -> CongruenceWitness:
    """Extend T^T M T = D to (M + <det>) with the block transform T + <1>."""
    N = witness.M.block_diag(PolyMatrix([[det]], witness.M.field))
    T_N = witness.T.block_diag(PolyMatrix.identity(1, witness.T.field))
    D_N = witness.D.block_diag(PolyMatrix([[det]], witness.D.field))
    ring = SemiLocalRing(UniPoly.coerce(N.det()).monic(), witness.ring.field)
    return CongruenceWitness(M=N, T=T_N, D=D_N, ring=ring)


def _nplus1_pipeline(
    M: PolyMatrix, cls: Optional[TwoSquares], witness: Optional[CongruenceWitness] = None
) -> Tuple[Factorization, Tuple[UniPoly, ...], CongruenceWitness]:
    """Seeded (n+1) x n run; returns (factorization, minor vector, congruence)."""
    n = M.rows
    det = _det_poly(M)
    if witness is None:
        witness = snf_congruence(M)
    extended = _block_witness(witness, det)
    entries = _diagonal_polys(extended)
    seed = None
    if cls is not None:
        if cls.kind != KIND_REAL:
            raise PreconditionViolated("seeding class must be a real two-squares pair")
        if cls.target != det:
            raise TargetMismatch("seeding class does not represent det M")
        _require_squarefree(det)
        seed = (n - 1, n, cls.as_gaussian().monic())
    Q_D = _real_diag_square(entries, seed)
    Q_sq = _cancel_and_verify(Q_D, extended)
    Q = Q_sq.submatrix(list(range(n + 1)), list(range(n)))
    fact = _finish(Q, M, str(cls) if cls is not None else None)
    return fact, tuple(cauchy_binet_extend(Q)), extended


def _degenerate_nplus1(M: PolyMatrix) -> Factorization:
    """Split off ker M, factor the nondegenerate block, re-attach zero rows."""
    n = M.rows
    sm = smith_normal_form(M)
    r = sum(1 for a in sm.invariant_factors if not a.is_zero)
    if r == 0:
        return _finish(PolyMatrix.zeros(n + 1, n, M.field), M, None)
    V = sm.T
    B = (V.star() * M * V).to_polynomial()
    for i in range(n):
        for j in range(n):
            if (i >= r or j >= r) and not UniPoly.coerce(B[i, j]).is_zero:
                raise VerificationFailure("kernel basis did not split the matrix")
    core = B.submatrix(list(range(r)), list(range(r)))
    Q_core = real_nplus1_factor(core).Q
    top = Q_core.hstack(PolyMatrix.zeros(r + 1, n - r, M.field))
    top = (top.to_ratfn() * V.inverse()).to_polynomial()
    grid = [list(top.row_list(i)) for i in range(r + 1)]
    grid.extend([[UniPoly.zero()] * n for _ in range(n - r)])
    return _finish(PolyMatrix(grid, M.field), M, None)


def real_nplus1_factor(
    M: PolyMatrix, cls: Optional[TwoSquares] = None
) -> Factorization:
    """Polynomial (n+1) x n factor Q with Q^T Q = M over the rationals.

    The target is extended to M + <det M>, the congruence transform acts on
    the M block alone, and the last column of the resulting square factor is
    dropped.  A two-squares class of det M may be passed to seed the planar
    block carrying the determinant; a degenerate M is first split along its
    kernel and the zero rows are re-attached afterward.
    """
    M = _as_real_symmetric(M)
    _require_psd(M)
    det = _det_poly(M)
    if det.is_zero:
        if cls is not None:
            raise PreconditionViolated(
                "a degenerate target has no two-squares class to seed"
            )
        return _degenerate_nplus1(M)
    fact, _, _ = _nplus1_pipeline(M, cls)
    return fact


# -- classified factorizations ---------------------------------------------------------------------


@dataclass(frozen=True)
class ClassifiedFactorization:
    """A verified factorization together with its two-squares class.

    Audit witnesses: the Cauchy-Binet minor vector of Q, the reflection
    product compressing it onto (0, ..., 0, a, b), and the diagonal
    congruence the pipeline ran through.  Whatever witnesses are present
    must re-verify exactly; for a square complex factor the determinant of
    Q must land in the unit class of the claimed scalar witness.
    """

    factorization: Factorization
    cls: TwoSquares
    binet_vector: Optional[Tuple[UniPoly, ...]] = None
    compression: Optional[PolyMatrix] = None
    congruence: Optional[CongruenceWitness] = None

    def __post_init__(self):
        if not self.factorization.verified:
            raise NotAFactorization("classified factorization must be verified")
        Q = self.factorization.Q
        M = self.factorization.target
        det = _det_poly(M)
        if self.cls.target != det:
            raise TargetMismatch("class target differs from det M")
        if self.binet_vector is not None:
            v = PolyMatrix.column(list(self.binet_vector), Q.field)
            extended = Q.hstack(v)
            target = M.block_diag(PolyMatrix([[det]], M.field))
            if not verify_factorization(extended, target).verified:
                raise VerificationFailure("minor vector does not extend the factor")
        if self.compression is not None:
            self._check_compression()
        if self.cls.kind == KIND_COMPLEX and Q.rows == Q.cols:
            if not u1_equivalent(
                TwoSquares.complex_poly(UniPoly.coerce(Q.det())), self.cls
            ):
                raise VerificationFailure(
                    "det Q does not lie in the claimed scalar unit class"
                )

    def _check_compression(self):
        U = self.compression
        n1 = U.rows
        if U.star() * U != PolyMatrix.identity(n1, U.field):
            raise VerificationFailure("compression transform is not orthogonal")
        if self.binet_vector is None:
            raise VerificationFailure("compression witness needs the minor vector")
        v = PolyMatrix.column(list(self.binet_vector), U.field)
        target = [UniPoly.zero()] * (n1 - 2) + [self.cls.a, self.cls.b]
        image = U.to_ratfn() * v.to_ratfn()
        for i in range(n1):
            if RatFn.coerce(image[i, 0]) != RatFn(target[i]):
                raise VerificationFailure(
                    "compression does not send the minor vector to the class pair"
                )

    @property
    def Q(self) -> PolyMatrix:
        return self.factorization.Q

    def to_json(self):
        out = {
            "factorization": self.factorization.to_json(),
            "class": self.cls.to_json(),
        }
        if self.binet_vector is not None:
            out["binet_vector"] = [p.to_json() for p in self.binet_vector]
        if self.compression is not None:
            out["compression"] = self.compression.to_json()
        return out


# -- class enumeration -----------------------------------------------------------------------------


def _label_from_gaussian(g: UniPoly) -> TwoSquares:
    """Canonical real two-squares pair in the orthogonal class of g."""
    a, b = g.real_imag_parts()
    if a.is_zero:
        a, b = b, UniPoly.zero()
    if a.lc().re < 0:
        a, b = -a, -b
    if not b.is_zero and b.lc().re < 0:
        b = -b
    return TwoSquares.real_pair(a, b)


def _real_class_labels(det: UniPoly) -> List[TwoSquares]:
    """One canonical (a, b) with a^2 + b^2 = det per orthogonal class."""
    if det.is_constant:
        c = det.constant_term()
        return [_label_from_gaussian(UniPoly.constant(_norm_witness(c.re)))]
    w = _norm_witness(det.lc().re)
    return [
        _label_from_gaussian(c.as_gaussian().scale(w))
        for c in enumerate_two_squares_real(det.monic())
    ]


def enumerate_real_classes(M: PolyMatrix) -> List[ClassifiedFactorization]:
    """One verified (n+1) x n factorization per two-squares class of det M.

    Requires a square-free nonzero determinant; returns 2^(k-1) pairwise
    inequivalent factorizations for det of degree 2k, each labeled by the
    class that seeded it.
    """
    M = _as_real_symmetric(M)
    _require_psd(M)
    det = _det_poly(M)
    _require_squarefree(det)
    labels = _real_class_labels(det)
    witness = snf_congruence(M)
    out = []
    for cls in labels:
        fact, v, extended = _nplus1_pipeline(M, cls, witness)
        out.append(
            ClassifiedFactorization(
                factorization=fact,
                cls=cls,
                binet_vector=v,
                congruence=extended,
            )
        )
    _check_pairwise_inequivalent(out, M)
    expected = 1 << max(0, det.degree() // 2 - 1) if not det.is_constant else 1
    if len(out) != expected:
        raise VerificationFailure(
            f"class count {len(out)} does not match the expected {expected}"
        )
    return out


def enumerate_complex_classes(M: PolyMatrix) -> List[ClassifiedFactorization]:
    """One verified n x n factorization per unit class of det M.

    Requires a square-free nonzero determinant; returns 2^k factorizations
    for det with k conjugate root pairs, with det Q in the seeding class.
    """
    M = _as_complex_hermitian(M)
    _require_psd(M)
    det = _det_poly(M)
    _require_squarefree(det)
    classes = enumerate_complex_scalar_classes(det)
    witness = snf_congruence(M)
    entries = _diagonal_polys(witness)
    out = []
    for cls in classes:
        seed = None
        if not det.is_constant:
            g0 = cls.g.monic()
            c_last = entries[-1].lc().re
            seed = (len(entries) - 1, g0.scale(_norm_witness(c_last)))
        Q_D = _complex_diag_square(entries, seed)
        fact = _finish(
            _cancel_and_verify(Q_D, witness), M, str(cls)
        )
        out.append(
            ClassifiedFactorization(factorization=fact, cls=cls, congruence=witness)
        )
    _check_pairwise_inequivalent(out, M)
    if len(out) != len(classes):
        raise VerificationFailure("class count changed during enumeration")
    return out


def _check_pairwise_inequivalent(
    classified: Sequence[ClassifiedFactorization], M: PolyMatrix
) -> None:
    for i in range(len(classified)):
        for j in range(i + 1, len(classified)):
            if equivalent_factorizations(classified[i].Q, classified[j].Q, M):
                raise VerificationFailure(
                    "two distinct scalar classes produced equivalent"
                    " factorizations - reportable inconsistency"
                )


# -- classification of a given factorization --------------------------------------------------------


def constant_compression_kernel(v: Sequence[UniPoly]) -> List[Tuple[Scalar, ...]]:
    """Basis of constant vectors c with c^T v = 0.

    A constant orthogonal matrix sending v to a vector with a zero in some
    coordinate exists iff this kernel is nonzero; compression to length two
    needs len(v) - 2 independent members.
    """
    polys = [UniPoly.coerce(p) for p in v]
    depth = max(p.degree() for p in polys) + 1
    rows = [
        [p.coeff(k) for p in polys]
        for k in range(depth)
    ]
    return [tuple(c) for c in nullspace(rows, ncols=len(polys))]


def constant_compressible(v: Sequence[UniPoly]) -> bool:
    """Whether some constant orthogonal matrix compresses v to length two."""
    if len(v) <= 2:
        return True
    return len(constant_compression_kernel(v)) >= len(v) - 2


def _rotation_variants(cls: TwoSquares, budget: int):
    """Constant-orthogonal images G (a, b) of the class pair, with G.

    Yields (aa, bb, G) where G runs over rational rotations, optionally
    composed with the reflection (a, b) -> (a, -b) and a global sign.
    """
    a, b = cls.a, cls.b
    count = 0
    for m in _ROTATION_SLOPES:
        if count >= budget:
            return
        den = 1 + m * m
        c, s = (1 - m * m) / den, 2 * m / den
        for flip in (1, -1):
            for sign in (1, -1):
                G = ((sign * c, -sign * s * flip), (sign * s, sign * c * flip))
                yield (
                    a.scale(G[0][0]) + b.scale(G[0][1]),
                    a.scale(G[1][0]) + b.scale(G[1][1]),
                    G,
                )
        count += 1


def _undo_rotation(U: PolyMatrix, G) -> PolyMatrix:
    """Compose U with the inverse of G on the last two coordinates."""
    n1 = U.rows
    grid = [
        [RatFn.one() if i == j else RatFn.zero() for j in range(n1)]
        for i in range(n1)
    ]
    # G is orthogonal, so its inverse is its transpose
    for i in (0, 1):
        for j in (0, 1):
            grid[n1 - 2 + i][n1 - 2 + j] = RatFn(UniPoly.constant(G[j][i]))
    return PolyMatrix(grid, REAL) * U


def _reflection_onto(
    v: List[UniPoly], target: List[UniPoly], ring: SemiLocalRing
) -> Optional[PolyMatrix]:
    """Reflection U over the ring with U v = target, if the step is admissible."""
    n1 = len(v)
    w = [x - y for x, y in zip(v, target)]
    ww = UniPoly.zero()
    for x in w:
        ww = ww + x * x
    if ww.is_zero:
        return PolyMatrix.identity(n1, REAL)
    if not ring.is_unit(RatFn(ww)):
        return None
    grid = [
        [
            (RatFn.one() if i == j else RatFn.zero())
            - RatFn((w[i] * w[j]).scale(Scalar.coerce(2)), ww)
            for j in range(n1)
        ]
        for i in range(n1)
    ]
    return PolyMatrix(grid, REAL)


def classify_factorization(
    Q,
    M: Optional[PolyMatrix] = None,
    *,
    enumeration: Optional[Sequence[ClassifiedFactorization]] = None,
    budget: int = 24,
) -> ClassifiedFactorization:
    """The two-squares class of a verified (n+1) x n factorization Q of M.

    The Cauchy-Binet minor vector v of Q is compressed onto (0, ..., a, b)
    by a reflection over the semi-local ring of det M, trying each class
    representative and a budgeted family of its rational rotations.  If no
    admissible reflection is found the result is reported as Indeterminate,
    never guessed.  When the enumeration output is supplied, the answer is
    cross-checked against the class of the equivalent enumerated entry.
    """
    if isinstance(Q, Factorization):
        if M is None:
            M = Q.target
        Q = Q.Q
    if M is None:
        raise PreconditionViolated("classification needs the target matrix")
    M = _as_real_symmetric(M)
    Q = Q.to_polynomial()
    if any(not e.is_real() for e in Q.entries()):
        raise PreconditionViolated("classification works over the real lane")
    if Q.field != REAL:
        Q = Q.map_entries(lambda x: x, REAL)
    if Q.rows != Q.cols + 1 or Q.cols != M.rows:
        raise ShapeUnsupported(
            f"classification handles (n+1) x n factors, got {Q.rows}x{Q.cols}"
        )
    det = _det_poly(M)
    _require_squarefree(det)
    fact = verify_factorization(Q, M)
    if not fact.verified:
        raise NotAFactorization("input does not satisfy Q^T Q = M")
    v = cauchy_binet_extend(Q)
    ring = SemiLocalRing(det.monic(), REAL)
    labels = _real_class_labels(det)
    zeros = [UniPoly.zero()] * (len(v) - 2)
    for cls in labels:
        for a, b, G in _rotation_variants(cls, budget):
            U = _reflection_onto(v, zeros + [a, b], ring)
            if U is None:
                continue
            result = ClassifiedFactorization(
                factorization=verify_factorization(Q, M, str(cls)),
                cls=cls,
                binet_vector=tuple(v),
                compression=_undo_rotation(U, G),
            )
            _cross_check(result, enumeration)
            return result
    raise Indeterminate(
        f"no admissible compression of the minor vector found within budget"
        f" {budget} for any of the {len(labels)} candidate classes"
    )


def _cross_check(
    result: ClassifiedFactorization,
    enumeration: Optional[Sequence[ClassifiedFactorization]],
) -> None:
    if enumeration is None:
        return
    M = result.factorization.target
    for entry in enumeration:
        if equivalent_factorizations(result.Q, entry.Q, M):
            if not o2_equivalent(result.cls, entry.cls):
                raise VerificationFailure(
                    "compression class disagrees with the enumeration class"
                    " - reportable inconsistency"
                )
            return
