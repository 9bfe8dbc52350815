"""Exception hierarchy shared by all mubquant modules."""


class MubQuantError(ValueError):
    """Base class for every error raised by this package."""


class InvalidDimensionError(MubQuantError):
    pass


class DimensionMismatchError(MubQuantError):
    pass


class InvalidStateError(MubQuantError):
    """Raised when an array fails the ket or density-matrix invariants."""


class InconsistentInputError(MubQuantError):
    """Raised when a value cannot have come from any quantum state."""


class ConsistencyError(MubQuantError):
    """Raised when an internal identity check fails."""


class DivergentSeriesError(MubQuantError):
    pass
