"""Exception hierarchy shared by every polyspec module."""


class PolyspecError(Exception):
    """Base class for all library errors."""


class NumericError(PolyspecError):
    """A numerical precondition or computation failed."""


class HypothesisError(PolyspecError):
    """Input does not satisfy the structural hypothesis an operation needs."""


class SingularMatrix(NumericError):
    pass


class NoConvergence(NumericError):
    pass


class DegenerateRoots(NumericError):
    pass


class DegenerateParameters(NumericError):
    pass


class SingularLeading(NumericError):
    pass


class NotHermitian(HypothesisError):
    pass


class NotNormal(HypothesisError):
    pass


class NotCommuting(HypothesisError):
    pass


class NotUnitary(HypothesisError):
    pass


class NotMonic(HypothesisError):
    pass


class NotPositiveDefinite(HypothesisError):
    pass


class NotDiagonalizable(HypothesisError):
    pass


class ZeroVector(PolyspecError, ValueError):
    pass


class LengthMismatch(PolyspecError, ValueError):
    pass


class TooLarge(PolyspecError, ValueError):
    pass


class InvalidSpec(PolyspecError, ValueError):
    pass


class ParseError(PolyspecError, ValueError):
    pass
