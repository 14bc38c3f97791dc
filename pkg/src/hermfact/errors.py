"""Error taxonomy.

Every error carries the process exit code used by the command-line driver:
2 for verification/precondition failures, 3 for instances the exact mode
cannot support, 4 for exhausted search budgets.  Plain bugs stay ordinary
exceptions and exit 1.
"""

from __future__ import annotations


class HermfactError(Exception):
    """Base class for all published errors."""

    exit_code = 2


# -- verification and precondition failures (exit 2) --------------------------


class SchemaError(HermfactError):
    """Malformed instance file or JSON payload."""


class VerificationFailure(HermfactError):
    """A claimed identity (Q*Q = M, unitarity, ...) does not hold."""


class NotAFactorization(VerificationFailure):
    pass


class PreconditionViolated(HermfactError):
    pass


class NonRealInput(PreconditionViolated):
    """A coefficient has nonzero imaginary part where reals are required."""


class NotHermitian(PreconditionViolated):
    pass


class NotPSD(HermfactError):
    pass


class NotSquare(PreconditionViolated):
    pass


class SizeMismatch(PreconditionViolated):
    pass


class TargetMismatch(PreconditionViolated):
    """Two-squares operands do not represent the same target polynomial."""


class DegenerateTarget(PreconditionViolated):
    pass


class NotDivisible(HermfactError):
    """One-sided matrix division left a nonzero remainder."""


class NotAUnit(HermfactError):
    pass


class NormNotUnit(PreconditionViolated):
    """Norm of the element to integralize is not a semi-local unit."""


class NotIsotropic(PreconditionViolated):
    pass


class OddDimension(PreconditionViolated):
    """Isotropic completion asked for on an odd-dimensional space."""


class NotAZero(PreconditionViolated):
    """Split-off point is not a zero of the determinant."""


class DivisibilityViolated(VerificationFailure):
    """An invariant-factor divisibility chain failed to hold."""


# -- instances the exact mode cannot support (exit 3) --------------------------


class UnsupportedInstance(HermfactError):
    """Exact arithmetic over Q(i) cannot express the required data."""

    exit_code = 3


class RootsNotInField(UnsupportedInstance):
    pass


class DeterminantNotSquare(UnsupportedInstance):
    pass


class NotSquareFree(UnsupportedInstance):
    pass


class Degenerate(UnsupportedInstance):
    """Zero determinant where a nondegenerate matrix is required."""


class OddDimensionReal(UnsupportedInstance):
    """Real split-off at a non-real zero needs even matrix size."""


class NotPolynomialGram(UnsupportedInstance):
    """S*S has a nonpolynomial entry, so no polynomial gram factor exists."""


class ShapeUnsupported(UnsupportedInstance):
    pass


class ResidueFieldNotQuadraticallyClosed(UnsupportedInstance):
    """A residue-field square root required by Hensel lifting does not exist."""


# -- exhausted budgets (exit 4) -------------------------------------------------


class BudgetExhausted(HermfactError):
    exit_code = 4


class SearchExhausted(BudgetExhausted):
    """A bounded search ended without a hit; existence is not refuted."""


class Indeterminate(BudgetExhausted):
    """Classification could not be decided within budget; never a guess."""


class GenerationExhausted(BudgetExhausted):
    """Rejection sampling failed to produce an admissible instance."""
