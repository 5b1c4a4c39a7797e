"""Exception hierarchy shared by every module."""

from __future__ import annotations


class AlgfibError(Exception):
    """Base class for all library errors."""


class SimplicialError(AlgfibError, ValueError):
    """Malformed simplicial data: bad faces, identities, or map components."""

    def __init__(self, message, report=()):
        super().__init__(message)
        self.report = list(report)


class TruncationError(AlgfibError, ValueError):
    """A dimension outside the truncation range was requested."""


class DefectError(AlgfibError, ValueError):
    """An algebraic structure failed validation; ``report`` lists the defects."""

    def __init__(self, message, report=()):
        super().__init__(message)
        self.report = list(report)


class BudgetExhausted(AlgfibError):
    """A horn needed a distinguished filler that the stage budget does not cover."""

    def __init__(self, horn, message=None):
        super().__init__(message or f"horn {horn} is unfilled within the stage budget")
        self.horn = horn


class CellLimitExceeded(AlgfibError):
    """The total simplex count passed the ALGFIB_MAX_CELLS cap."""


class SchemaError(AlgfibError, ValueError):
    """A JSON presentation does not conform to its schema."""

    def __init__(self, message, where=None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
