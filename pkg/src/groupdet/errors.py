"""Exception types shared across the package."""


class UsageError(ValueError):
    """Bad arguments: wrong arity, unparseable integer, violated precondition."""


class DomainError(ValueError):
    """Input is well-formed but outside the operation's domain (e.g. p not in P')."""


class NotMemberError(ValueError):
    """Raised when a witness is requested for a value outside S(C4 x C2^2)."""

    def __init__(self, classification):
        super().__init__(classification.reason)
        self.classification = classification


class InternalError(RuntimeError):
    """An internal invariant failed (oracle disagreement, unverifiable witness)."""
