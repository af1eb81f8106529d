"""Exception types raised by petzlab."""


class RejectedInput(ValueError):
    """Input failed a numerical precondition (Hermiticity, support, caps...).

    The CLI maps this family to exit code 3.
    """


class NotHermitianError(RejectedInput):
    pass


class NotPositiveError(RejectedInput):
    pass


class CapExceededError(RejectedInput):
    pass


class SupportError(RejectedInput):
    pass


class HypothesisViolation(RejectedInput):
    """A fixture does not satisfy the hypothesis of the theorem being checked."""

    def __init__(self, message, defects=None):
        super().__init__(message)
        self.defects = dict(defects or {})
