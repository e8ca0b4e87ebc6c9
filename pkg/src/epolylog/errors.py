"""Exception taxonomy shared by all epolylog modules.

Each numerical or combinatorial failure mode gets its own class so callers
(and the CLI, which maps them to exit codes) can react without string
matching.  Everything derives from EpolylogError.
"""


class EpolylogError(Exception):
    """Base class for all errors raised by this package."""


class PoleOverflow(EpolylogError):
    """A Laurent coefficient would fall below the declared pole bound."""


class NotInvertible(EpolylogError):
    """Series has no dominating leading monomial, so no Laurent inverse."""


class TruncationTooSmall(EpolylogError):
    """Requested operation needs more orders than the series carries."""


class QuadratureDiverged(EpolylogError):
    """Adaptive bisection hit its depth limit without the orders agreeing."""


class PathTooClose(EpolylogError):
    """An integration arc violates the declared clearance from singularities."""


class BadModulus(EpolylogError):
    """tau not in the upper half plane, or |q| outside the supported range."""


class OnLattice(EpolylogError):
    """Point coincides with (or is too close to) a lattice point."""


class OnSingularLocus(EpolylogError):
    """Arguments sit on a singular divisor (t_i = t_j, t_i = 1, ...)."""


class OutOfRegion(EpolylogError):
    """Series evaluation requested outside its convergence region."""


class MissingConstants(EpolylogError):
    """No corner-constant model is available at the requested depth."""


class SizeBudgetExceeded(EpolylogError):
    """A symbolic expansion grew past the configured term budget."""


class BadPermutation(EpolylogError):
    """Sector permutation is not a permutation of {1, ..., n+1}."""


class Inadmissible(EpolylogError):
    """Base point violates the admissibility conditions for averaging."""


class OutOfWindow(EpolylogError):
    """Weights u_i outside the open convergence window 1 < u_i < 1/|q|."""


class TailModelMissing(EpolylogError):
    """Termwise tail subtraction has no model at this depth."""


class SchemeDisagreement(EpolylogError):
    """Two regularization schemes disagree beyond tolerance."""
