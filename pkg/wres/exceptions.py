# wres/exceptions.py

class WresError(Exception):
    """Base exception for all wres failures."""
    pass

class RingMismatchError(WresError):
    """Raised when operands live in different rings."""
    pass

class PolySyntaxError(WresError):
    """Raised when polynomial text cannot be parsed."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position

class NotInvertibleError(WresError):
    """Raised when a map's linear part at the origin is singular."""
    pass

class InexactAutomorphismError(WresError):
    """Raised when an exact-mode operation receives a jet-only automorphism."""
    pass

class TruncationBoundError(WresError):
    """Raised when a jet bound is too small to certify an order."""
    pass

class JetModeError(WresError):
    """Raised when a Groebner computation is requested in a jet-mode ring."""
    pass

class BudgetExceededError(WresError):
    """Raised when a computation outgrows its configured size budget."""
    pass

class InadmissibleCenterError(WresError):
    """Raised when a transform reveals that a center was not admissible."""
    pass

class IndeterminateError(WresError):
    """Raised when a truncated rewrite cannot decide a valuation inequality."""
    pass

class UnitIdealError(WresError):
    """Raised when a singularity invariant is requested for a unit ideal."""
    pass

class MonotonicityError(WresError):
    """Raised when invariant entries fail a_i <= a_(i+1)."""
    pass

class InvariantDescentError(WresError):
    """Raised when a blowup does not strictly lower the invariant."""
    pass
