"""Exception types raised by centroflow."""


class CentroflowError(Exception):
    """Base class for all library errors."""


class DegenerateDeterminant(CentroflowError, ValueError):
    """A denominator determinant vanished, so the invariants are undefined there."""

    def __init__(self, index, value=None):
        self.index = index
        self.value = value
        msg = f"degenerate determinant at vertex {index}"
        if value is not None:
            msg += f" (value {value:.3e})"
        super().__init__(msg)


class TooFewVertices(CentroflowError, ValueError):
    pass


class SingularChain(CentroflowError, ValueError):
    """The transition matrix is not invertible (first curvature is zero)."""


class DegenerateSeed(CentroflowError, ValueError):
    pass


class InvalidPeriod(CentroflowError, ValueError):
    pass


class NotClosed(CentroflowError, ValueError):
    pass


class Not2D(CentroflowError, ValueError):
    pass


class ZeroBeta(CentroflowError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"transversal coefficient vanishes at vertex {index}")


class DegenerateResult(CentroflowError, ValueError):
    """A flow step produced a polygon whose invariants are undefined."""


class RankMismatch(CentroflowError, ValueError):
    pass


class ZeroDenominator(CentroflowError, ValueError):
    pass


class SingularTransfer(CentroflowError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"state transfer matrix is singular at vertex {index}")


class NotConvex(CentroflowError, ValueError):
    pass


class DenominatorVanishes(CentroflowError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"1 + kappa + kappa_bar vanishes at vertex {index}")


class ZeroKappaBar(CentroflowError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"second curvature vanishes at vertex {index}")


class SizeMismatch(CentroflowError, ValueError):
    pass


class InadmissibleInput(CentroflowError, ValueError):
    pass


class NonPositiveKappaBarWarning(UserWarning):
    """Inverse pentagram input has a non-positive second curvature; output may not be convex."""
