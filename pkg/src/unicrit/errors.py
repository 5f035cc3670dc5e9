"""Exception hierarchy shared by every module."""


class UnicritError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(UnicritError, ValueError):
    """An operation was called outside its documented domain."""


class SymmetricInputsError(PreconditionError):
    """Raised when a^d == b^d, where the parameter set is infinite."""

    def __init__(self, a, b, d):
        super().__init__(f"symmetric inputs: a^d == b^d for a={a}, b={b}, d={d}")
        self.a, self.b, self.d = a, b, d


class DegreeCapExceeded(UnicritError):
    def __init__(self, degree, cap):
        super().__init__(f"degree cap exceeded: {degree} > {cap}")
        self.degree, self.cap = degree, cap


class RootFinderStagnated(UnicritError):
    pass


class Undetermined(UnicritError):
    """Neither an escape nor a bounded-orbit certificate was obtained."""


class HypothesisViolated(PreconditionError):
    pass
