"""Exception hierarchy shared across the package."""


class ExfactorError(Exception):
    """Base class for all package errors."""


class ZeroPolynomial(ExfactorError):
    """An operation received the zero polynomial where a nonzero one is required."""


class NotDivisible(ExfactorError):
    """Exact polynomial division left a nonzero remainder."""


class PathFailure(ExfactorError):
    """A continuation path could not be tracked (step size underflow)."""


class NotSquareFree(ExfactorError):
    """The polynomial has (or numerically appears to have) repeated roots."""


class NotConverging(ExfactorError):
    """Newton refinement started outside the quadratic-convergence basin."""


class PrecisionTooLow(ExfactorError):
    """An approximation is not accurate enough for the requested reconstruction."""


class NoCandidateFound(ExfactorError):
    """The lattice search found no polynomial passing the acceptance bound."""


class InconsistentGrouping(ExfactorError):
    """Root-group degrees do not sum to the expected total."""


class UnmatchedEndpoint(ExfactorError):
    """A degree-detection path ended away from every known root group."""


class RankOne(ExfactorError):
    """The coefficient matrix has rank < 2, impossible for an irreducible factor."""


class NeedMoreNodes(ExfactorError):
    """The scaling system is underdetermined; more interpolation nodes required."""


class Inconsistent(ExfactorError):
    """The scaling system has no solution; upstream grouping or precision failed."""


class DegreeOverflow(ExfactorError):
    """Interpolation produced a nonzero coefficient above the expected degree."""


class ParseError(ExfactorError):
    """Invalid polynomial expression.

    Carries the 1-based column of the offending token and a description of
    what was expected there.
    """

    def __init__(self, message: str, position: int, expected: str = ""):
        self.position = position
        self.expected = expected
        detail = f"{message} at column {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class FactorizationFailed(ExfactorError):
    """All restarts were exhausted without a verified factorization.

    The message records the stage diagnostics of the failed attempts; a
    wrong answer is never returned in place of this error.
    """
