"""Exception hierarchy shared by all farpoint modules."""


class FarpointError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(FarpointError, ValueError):
    pass


class CoverError(FarpointError):
    """A facet ball could not be constructed.

    ``facet_index`` is set when the error is raised while building a full
    cover, so callers can report which facet was at fault.
    """

    def __init__(self, message, facet_index=None):
        if facet_index is not None:
            message = f"facet {facet_index}: {message}"
        super().__init__(message)
        self.facet_index = facet_index


class FrameError(FarpointError, ValueError):
    """The circumscribed frame is inconsistent with the polytope."""


class DegenerateCenter(FarpointError, ValueError):
    """A ball center coincides with the query point."""


class SolverIndeterminate(FarpointError):
    """A convex solve ran out of budget before deciding its question."""


class BracketError(FarpointError):
    """A bisection bracket does not straddle the sought value."""


class InfeasibleRadius(FarpointError):
    """The surrogate at this distance parameter is empty."""


class LPError(FarpointError):
    def __init__(self, message, status):
        super().__init__(message)
        self.status = status


class BudgetExceeded(FarpointError):
    """A brute-force oracle was asked for more work than its budget allows."""


class InstanceError(FarpointError, ValueError):
    """Malformed instance document."""

    def __init__(self, message, field=None, line=None):
        where = []
        if field is not None:
            where.append(f"field '{field}'")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)
        self.field = field
        self.line = line
