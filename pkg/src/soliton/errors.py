"""Exception types shared across the package.

Every failure mode that callers are expected to catch gets its own class;
anything else is a plain ValueError/AssertionError and indicates a bug.
"""


class SolitonError(Exception):
    """Base class for all library errors."""


# -- local field construction / arithmetic ---------------------------------

class NonEisenstein(SolitonError):
    """Defining polynomial is not Eisenstein over the unramified subfield."""


class NoRoot(SolitonError):
    """Requested root of unity does not exist in the residue field."""


class NotContracting(SolitonError):
    """Hensel/Newton precondition |f(a)| < |f'(a)|^2 fails at stored precision."""


class EmptyPolygon(SolitonError):
    """Newton polygon of the zero polynomial was requested."""


class PrecisionExhausted(SolitonError):
    """An operation needed digits beyond the stored precision."""


# -- series ----------------------------------------------------------------

class FieldMismatch(SolitonError):
    """Operands live over different p-adic fields."""


class NotIntegral(SolitonError):
    """Series has sup-norm > 1 where an integral one is required."""


# -- combinatorics ---------------------------------------------------------

class InsufficientCoefficients(SolitonError):
    """Loop coefficient sequence too short for the requested Schur function."""


class CellOutOfShape(SolitonError):
    """Hook length requested for a cell outside the Young diagram."""


class ShapeTooLarge(SolitonError):
    """Hook-length evaluation needs l(lambda) + lambda_1 <= p."""


# -- Grassmannian ----------------------------------------------------------

class DegenerateSpan(SolitonError):
    """Echelonization met a leading coefficient that is zero at precision."""


class CapTooSmall(SolitonError):
    """Stored basis does not reach far enough for the requested computation."""


class UnboundedAtCap(SolitonError):
    """Integrality classification impossible: norms unbounded at the cap."""


class InconclusiveAtPrecision(SolitonError):
    """Linear algebra cannot decide a rank/membership question at precision."""


# -- curves ----------------------------------------------------------------

class BadReduction(SolitonError):
    """Branch locus degenerates modulo the maximal ideal."""


class NotOnCurve(SolitonError):
    """Proposed affine base point does not satisfy the curve equation."""


class GenusMismatch(SolitonError):
    """Computed gap count differs from the genus; generator set incomplete."""


class SupportCollision(SolitonError):
    """Divisor support meets the forbidden residue disc of the base point."""


class NotNormalizable(SolitonError):
    """Hermite normalization pivot vanished at precision."""


class SmallPrime(SolitonError):
    """Hasse-Witt machinery requires p >= 2g."""


# -- soliton pipeline ------------------------------------------------------

class NotStrictlyIntegral(SolitonError):
    """Operation requires a strictly integral Grassmannian point."""


class NotInMaximalIdeal(SolitonError):
    """Artin-Hasse loop parameter must satisfy |pi| < 1."""


class NotOrdinary(SolitonError):
    """Hasse-Witt determinant is not a unit."""


class ResidueFieldTooSmall(SolitonError):
    """Residue equation has no full solution set over the current field."""

    def __init__(self, message, required_degree=None):
        super().__init__(message)
        self.required_degree = required_degree


class NonUnitCoefficient(SolitonError):
    """Diagonal logarithm coefficient e_ii^(k) is not a unit."""


class ExtensionUnavailable(SolitonError):
    """Required Eisenstein extension could not be constructed."""

    def __init__(self, message, eisenstein=None, unramified_degree=None):
        super().__init__(message)
        self.eisenstein = eisenstein
        self.unramified_degree = unramified_degree


class ResidualNonzero(SolitonError):
    """Claimed logarithm root has a nonzero residual at precision."""


class WindowInsufficient(SolitonError):
    """Guaranteed-exact window too small for the requested verification."""


class PreconditionUnmet(SolitonError):
    """Hypotheses of the nonvanishing criterion are not satisfied."""


class NotInClosure(SolitonError):
    """Element is not an admissible combination of the standard basis."""


# -- CLI -------------------------------------------------------------------

class ConfigInvalid(SolitonError):
    """Run configuration failed validation."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
