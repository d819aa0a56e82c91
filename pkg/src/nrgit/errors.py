"""Exception hierarchy.

``ValidationError`` and ``ResourceLimitExceeded`` map to CLI exit code 2,
``ConditionFailure`` to exit code 1.  ``VerificationError`` signals an internal
inconsistency (a certificate that does not check out) and should never fire.
"""


class NrgitError(Exception):
    pass


class ParseError(NrgitError, ValueError):
    pass


class ValidationError(NrgitError, ValueError):
    pass


class ResourceLimitExceeded(NrgitError):
    def __init__(self, message, steps=0, progress=None):
        super().__init__(message)
        self.steps = steps
        self.progress = progress or {}


class ConditionFailure(NrgitError):
    """A mathematical precondition (non-emptiness, UU, WUU, ...) does not hold."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class VerificationError(NrgitError, AssertionError):
    pass
