"""Deterministic planted-instance generation for the factorization pipelines.

Three families, all seeded through random.Random so identical configurations
produce byte-identical files:

  planted-unimodular  M = S0* . diag(1, ..., 1, d) . S0 with S0 a unimodular
                      integer-polynomial matrix (product of shears and swaps)
                      and d a product of distinct monic quadratics whose roots
                      lie in Q(i); det M = d exactly.
  planted-generic     M = Q0*Q0 for a random integer-polynomial Q0, rejection
                      sampled until det M is square-free (and, when enforced,
                      has all roots in Q(i)).
  scalar-only         the 1x1 payload [d] with d as above.

Every emitted file carries ground truth -- the planted factorization and the
scalar two-squares classes of det M -- which the instance loader re-verifies.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import GenerationExhausted, PreconditionViolated, RootsNotInField
from .matrix import COMPLEX, REAL, PolyMatrix
from .poly import UniPoly
from .roots import gaussian_roots
from .scalars import Scalar
from .serialize import MODE_EXACT, InstanceFile
from .twosquares import enumerate_complex_scalar_classes, enumerate_two_squares_real

FAMILY_UNIMODULAR = "planted-unimodular"
FAMILY_GENERIC = "planted-generic"
FAMILY_SCALAR = "scalar-only"
FAMILIES = (FAMILY_UNIMODULAR, FAMILY_GENERIC, FAMILY_SCALAR)

_T = UniPoly((0, 1))


@dataclass(frozen=True)
class GeneratorConfig:
    """Family, size, entry-degree bound, seed, and admissibility enforcement."""

    family: str
    n: int
    degree: int
    seed: int
    field: str = REAL
    enforce_admissible: bool = True
    max_attempts: int = 200

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise PreconditionViolated(f"unknown family {self.family!r}")
        if self.n < 1:
            raise PreconditionViolated("n must be positive")
        if self.family == FAMILY_SCALAR and self.n != 1:
            raise PreconditionViolated("scalar-only family emits 1x1 instances")
        if self.degree < 2:
            raise PreconditionViolated("entry degree bound must be at least 2")
        if self.field not in (REAL, COMPLEX):
            raise PreconditionViolated(f"unknown field tag {self.field!r}")
        if self.max_attempts < 1:
            raise PreconditionViolated("max_attempts must be positive")


# -- random building blocks ------------------------------------------------------


def _random_quadratics(rng: random.Random, count: int) -> List[Tuple[UniPoly, Scalar]]:
    """Distinct monic quadratics (t-a)² + b² paired with their root a + ib."""
    out: List[Tuple[UniPoly, Scalar]] = []
    seen = set()
    while len(out) < count:
        a = rng.randint(-3, 3)
        b = rng.randint(1, 3)
        if (a, b) in seen:
            continue
        seen.add((a, b))
        shift = _T - UniPoly.constant(a)
        out.append((shift * shift + UniPoly.constant(b * b), Scalar(a, b)))
    return out


def _random_coeff(rng: random.Random, field: str) -> Scalar:
    if field == COMPLEX:
        return Scalar(rng.randint(-2, 2), rng.randint(-2, 2))
    return Scalar(rng.randint(-2, 2))


def _unimodular_transform(rng: random.Random, n: int, field: str, degree_budget: int) -> PolyMatrix:
    """Product of shears and swaps: unimodular with det ±1, entry degrees bounded."""
    S = PolyMatrix.identity(n, field)
    linear_left = degree_budget
    for _ in range(2 * n):
        kind = rng.random()
        if n >= 2 and kind < 0.2:
            i, j = rng.sample(range(n), 2)
            grid = [[UniPoly.one() if r == c else UniPoly.zero() for c in range(n)] for r in range(n)]
            grid[i][i] = UniPoly.zero()
            grid[j][j] = UniPoly.zero()
            grid[i][j] = UniPoly.one()
            grid[j][i] = UniPoly.one()
            S = S * PolyMatrix(grid, field)
            continue
        if n < 2:
            continue
        i, j = rng.sample(range(n), 2)
        use_linear = linear_left > 0 and rng.random() < 0.6
        c0 = _random_coeff(rng, field)
        if use_linear:
            c1 = _random_coeff(rng, field)
            p = UniPoly((c0, c1))
            linear_left -= 1
        else:
            p = UniPoly.constant(c0)
        if p.is_zero:
            continue
        grid = [[UniPoly.one() if r == c else UniPoly.zero() for c in range(n)] for r in range(n)]
        grid[i][j] = p
        S = S * PolyMatrix(grid, field)
    return S


def _scalar_classes_json(det: UniPoly, field: str) -> List[dict]:
    if field == COMPLEX:
        return [c.to_json() for c in enumerate_complex_scalar_classes(det)]
    return [c.to_json() for c in enumerate_two_squares_real(det)]


# -- family builders --------------------------------------------------------------


def _build_unimodular(config: GeneratorConfig, rng: random.Random) -> InstanceFile:
    k = rng.randint(1, max(1, min(3, config.degree // 2)))
    quads = _random_quadratics(rng, k)
    d = UniPoly.one()
    g0 = UniPoly.one()
    for quad, root in quads:
        d = d * quad
        g0 = g0 * (_T - UniPoly.constant(root))
    shear_budget = max(0, (config.degree - 2 * k) // 2)
    S0 = _unimodular_transform(rng, config.n, config.field, shear_budget)
    diag = [UniPoly.one()] * (config.n - 1) + [d]
    D = PolyMatrix.diagonal(diag, config.field)
    M = (S0.star() * D * S0).to_polynomial()
    Q0 = _planted_factor(S0, g0, config.field)
    gt = {
        "family": config.family,
        "seed": config.seed,
        "factorization": Q0.to_json(),
        "classes": _scalar_classes_json(d, config.field),
    }
    return InstanceFile(mode=MODE_EXACT, field=config.field, matrix=M, ground_truth=gt)


def _planted_factor(S0: PolyMatrix, g0: UniPoly, field: str) -> PolyMatrix:
    """Exact gram factor of S0* diag(1,...,1, g0*g0) S0 for the requested lane."""
    n = S0.rows
    if field == COMPLEX:
        diag = [UniPoly.one()] * (n - 1) + [g0]
        return (PolyMatrix.diagonal(diag, COMPLEX) * S0).to_polynomial()
    # real lane: split the last row into the (a, b) pair, giving an (n+1) x n factor
    a, b = g0.real_imag_parts()
    S0 = S0.to_polynomial()
    rows = [list(S0.row_list(i)) for i in range(n)]
    grid = rows[: n - 1] + [[x * s for x in rows[n - 1]] for s in (a, b)]
    return PolyMatrix(grid, REAL)


def _random_poly(rng: random.Random, degree: int, field: str) -> UniPoly:
    coeffs = [_random_coeff(rng, field) for _ in range(degree + 1)]
    return UniPoly(coeffs)


def _build_generic(config: GeneratorConfig, rng: random.Random) -> InstanceFile:
    half = max(1, config.degree // 2)
    rows = config.n if config.field == COMPLEX else config.n + 1
    for _ in range(config.max_attempts):
        grid = [
            [_random_poly(rng, rng.randint(0, half), config.field) for _ in range(config.n)]
            for _ in range(rows)
        ]
        Q0 = PolyMatrix(grid, config.field)
        M = (Q0.star() * Q0).to_polynomial()
        det = M.det().to_poly()
        if det.is_zero or det.degree() == 0:
            continue
        if not det.gcd(det.derivative()).is_one:
            continue
        if config.enforce_admissible:
            try:
                gaussian_roots(det)
            except RootsNotInField:
                continue
        gt = {
            "family": config.family,
            "seed": config.seed,
            "factorization": Q0.to_json(),
        }
        if config.enforce_admissible:
            gt["classes"] = _scalar_classes_json(det, config.field)
        return InstanceFile(mode=MODE_EXACT, field=config.field, matrix=M, ground_truth=gt)
    raise GenerationExhausted(
        f"no admissible square-free determinant in {config.max_attempts} attempts"
    )


def _build_scalar(config: GeneratorConfig, rng: random.Random) -> InstanceFile:
    k = rng.randint(1, max(1, config.degree // 2))
    quads = _random_quadratics(rng, k)
    d = UniPoly.one()
    g0 = UniPoly.one()
    for quad, root in quads:
        d = d * quad
        g0 = g0 * (_T - UniPoly.constant(root))
    M = PolyMatrix([[d]], config.field)
    if config.field == COMPLEX:
        Q0 = PolyMatrix([[g0]], COMPLEX)
    else:
        a, b = g0.real_imag_parts()
        Q0 = PolyMatrix([[a], [b]], REAL)
    gt = {
        "family": config.family,
        "seed": config.seed,
        "factorization": Q0.to_json(),
        "classes": _scalar_classes_json(d, config.field),
    }
    return InstanceFile(mode=MODE_EXACT, field=config.field, matrix=M, ground_truth=gt)


def generate(config: GeneratorConfig) -> InstanceFile:
    """Deterministic in the seed; the emitted ground truth verifies exactly."""
    rng = random.Random(config.seed)
    if config.family == FAMILY_UNIMODULAR:
        return _build_unimodular(config, rng)
    if config.family == FAMILY_GENERIC:
        return _build_generic(config, rng)
    return _build_scalar(config, rng)
