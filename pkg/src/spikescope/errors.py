"""Exception types shared across the package.

Statistical routines distinguish two failure kinds that callers treat very
differently: not enough data (collect more and retry) and a statistic that
is undefined for the input no matter how much data arrives (a dead node has
no Fano factor). Aggregation layers catch `UndefinedStatistic`, count the
exclusion, and carry on; they never paper over it with NaN.
"""


class SpikescopeError(Exception):
    """Base class for every library-specific error."""


class TraceFormatError(SpikescopeError):
    """A trace or spike CSV file violates the v1 layout.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IdxFormatError(SpikescopeError):
    """An IDX file is malformed; carries the byte offset when known."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"offset {offset}: {message}"
        super().__init__(message)
        self.offset = offset


class ParamsFormatError(SpikescopeError):
    """A network parameter file is corrupted or from an unknown version."""


class InsufficientData(SpikescopeError):
    """Too few observations to compute the requested statistic."""


class UndefinedStatistic(SpikescopeError):
    """The statistic does not exist for this input.

    More data of the same kind would not help: a node that never fires has
    an undefined Fano factor, a constant series has no autocorrelation.
    """


class ArrivalNotReached(SpikescopeError):
    """Fewer arrivals were observed than requested.

    Carries the requested index and the total number of arrivals seen.
    """

    def __init__(self, requested, total):
        super().__init__(
            f"requested arrival {requested} but only {total} occurred"
        )
        self.requested = requested
        self.total = total


class TrainingDiverged(SpikescopeError):
    """The training loss became non-finite; carries epoch and batch index."""

    def __init__(self, epoch, batch):
        super().__init__(f"non-finite loss at epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch


class NumericalError(SpikescopeError):
    """A numerical procedure failed (singular system, overflow, ...)."""
