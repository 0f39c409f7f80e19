"""Exception types raised across the package."""


class JnrError(Exception):
    """Base class for all library errors."""


class NonHermitianInput(JnrError, ValueError):
    def __init__(self, deviation, tol):
        self.deviation = float(deviation)
        self.tol = float(tol)
        super().__init__(
            f"operator is not Hermitian: max|H - H^dagger| = {self.deviation:.3e} exceeds {self.tol:.3e}"
        )


class DimensionMismatch(JnrError, ValueError):
    pass


class NoConvergence(JnrError, RuntimeError):
    pass


class NonOrthonormalBasis(JnrError, ValueError):
    pass


class NonUnitaryInput(JnrError, ValueError):
    pass


class IndexOutOfRange(JnrError, IndexError):
    pass


class StrategyDimensionMismatch(JnrError, ValueError):
    pass


class UnboundedIntersection(JnrError, ValueError):
    """Supporting halfspaces do not cut out a bounded polytope."""


class InteriorPointInvalid(JnrError, ValueError):
    pass


class WrongDimension(JnrError, ValueError):
    pass


class NotAFlatPart(JnrError, ValueError):
    """The image of an eigenspace is full-dimensional, so it cannot be a face."""


class QueryOutsideBracket(JnrError, ValueError):
    pass


class InvalidMomentPair(JnrError, ValueError):
    pass


class ParseError(JnrError, ValueError):
    pass
