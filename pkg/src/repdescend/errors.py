"""Exception types shared across the package.

Names follow the error vocabulary of the public contracts.  Conditions that
are ordinary answers rather than failures (an inconsistent linear system, a
singular matrix handed to ``invert``, a pair of non-isomorphic modules) are
reported as ``None`` return values, not exceptions.
"""


class RepdescendError(Exception):
    """Base class: invalid mathematical input or unsupported request."""


class InvalidPrime(RepdescendError):
    pass


class FieldTooLarge(RepdescendError):
    pass


class NoEmbedding(RepdescendError):
    pass


class FieldMismatch(RepdescendError):
    pass


class AlgebraMismatch(RepdescendError):
    pass


class NotInvertible(RepdescendError):
    pass


class InvalidGroup(RepdescendError):
    pass


class UnknownGroup(RepdescendError):
    pass


class CharTwoDegenerate(RepdescendError):
    pass


class NotIndecomposable(RepdescendError):
    pass


class ZeroModule(RepdescendError):
    pass


class AlgebraNotDefinedOverF(RepdescendError):
    pass


class InternalInvariantViolation(Exception):
    """A theorem-backed invariant failed at runtime.

    This never indicates bad input; it indicates a bug.  The CLI maps it to
    exit code 3.
    """
