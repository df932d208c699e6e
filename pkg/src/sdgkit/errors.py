"""Exception hierarchy shared by every sdgkit module."""


class SdgError(Exception):
    """Base class for all library errors."""


class InvalidInput(SdgError, ValueError):
    pass


class DegenerateInput(SdgError, ValueError):
    pass


class DegenerateTriangle(SdgError, ValueError):
    pass


class GeneralPositionViolation(SdgError):
    """Raised when an input violates the general-position assumptions.

    ``participants`` names the offending point indices (or coordinates when
    indices are not meaningful).
    """

    def __init__(self, message, participants=()):
        super().__init__(message)
        self.participants = tuple(participants)


class NotAnEdge(SdgError, KeyError):
    pass


class NotClose(SdgError, ValueError):
    pass


class InvalidBody(SdgError, ValueError):
    pass


class PreconditionFailed(SdgError):
    pass


class InternalInconsistency(SdgError, RuntimeError):
    pass


class OutOfRange(SdgError, ValueError):
    pass


class DegenerateMotion(SdgError):
    def __init__(self, message, participants=()):
        super().__init__(message)
        self.participants = tuple(participants)


class BudgetExceeded(SdgError, RuntimeError):
    pass


class ParseError(SdgError, ValueError):
    def __init__(self, message, location=None):
        super().__init__(message if location is None else f"{message} (at {location})")
        self.location = location


class InvalidSpec(SdgError, ValueError):
    pass
