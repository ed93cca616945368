"""Exception types raised across the toolkit."""


class KnotOrderError(Exception):
    """Base class for every error raised by knotorder."""


class SingularPresentation(KnotOrderError):
    """A presentation matrix has zero determinant, so its cokernel is infinite."""


class ZeroPolynomial(KnotOrderError):
    pass


class NotAUnit(KnotOrderError):
    pass


class InvalidSeifertMatrix(KnotOrderError):
    pass


class InvalidBridgeParams(KnotOrderError):
    pass


class NotQuadratic(KnotOrderError):
    pass


class NotAKnotPolynomial(KnotOrderError):
    """Raised when a polynomial fails the normalization Delta(1) = +-1."""


class BudgetExceeded(KnotOrderError):
    def __init__(self, message, bound=None, value=None):
        super().__init__(message)
        self.bound = bound
        self.value = value


class NotAMetabolizer(KnotOrderError):
    pass


class UnresolvedDependency(KnotOrderError):
    """A relation needs a character class the induction has not killed yet."""


class ReplayFailure(KnotOrderError):
    """A level relation shares a root with t^q - 1.

    This would contradict the argument on the given instance, so it is
    treated as an internal invariant violation rather than bad input.
    """

    def __init__(self, message, level=None, relation=None):
        super().__init__(message)
        self.level = level
        self.relation = relation
