"""Exception hierarchy shared by all trackmetric modules."""


class TrackMetricError(Exception):
    """Base class for every error raised by this package."""


class BadParametersError(TrackMetricError):
    """A metric or scenario parameter violates its documented range."""


class ValidationError(TrackMetricError):
    """Base class for track-set validation failures."""


class EmptyTrackError(ValidationError):
    """A track has no existing state at any scan."""


class DimensionMismatchError(ValidationError):
    """A state vector's length does not match the declared state dimension."""


class ScanOutOfRangeError(ValidationError):
    """A track has a point at a scan index outside 1..T."""


class NonFiniteCoordinateError(ValidationError):
    """A state vector contains NaN or an infinite coordinate."""


class ScanMismatchError(TrackMetricError):
    """Two track sets declare a different number of scans."""


class TooLargeError(TrackMetricError):
    """Exhaustive assignment enumeration was requested above the size cap."""


class InfeasibleAssignmentError(TrackMetricError):
    """An assignment pairs tracks that never coexist at any scan."""


class NoConvergenceError(TrackMetricError):
    """Track splitting failed to reach a one-to-one assignment."""


class ParseError(TrackMetricError):
    """A track-set file is syntactically or structurally invalid."""
