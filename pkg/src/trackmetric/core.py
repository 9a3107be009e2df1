"""Domain types, validation and shared arithmetic.

A track is a sparse map from 1-based scan indices to state vectors; a scan
with no entry means the target does not exist then.  A track set fixes the
number of scans T and the state dimension for all of its tracks.  Everything
here is immutable after construction and all functions are pure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadParametersError,
    DimensionMismatchError,
    EmptyTrackError,
    NonFiniteCoordinateError,
    ScanMismatchError,
    ScanOutOfRangeError,
)

StateVector = tuple[float, ...]


@dataclass(frozen=True)
class Track:
    """One target trajectory: existing scans mapped to state vectors.

    ``label`` is carried for reporting only; it plays no role in any
    distance or in equality of track sets.
    """

    points: Mapping[int, StateVector]
    label: str | None = None

    def __post_init__(self) -> None:
        pts = {int(t): tuple(float(v) for v in x) for t, x in self.points.items()}
        object.__setattr__(self, "points", pts)

    def exists_at(self, t: int) -> bool:
        return t in self.points

    def state_at(self, t: int) -> StateVector | None:
        return self.points.get(t)

    @property
    def first_scan(self) -> int:
        return min(self.points)

    @property
    def last_scan(self) -> int:
        return max(self.points)

    def key(self) -> tuple:
        """Canonical value used to compare tracks as mathematical objects."""
        return tuple(sorted(self.points.items()))


@dataclass(frozen=True)
class TrackSet:
    """A finite (possibly empty) collection of tracks over scans 1..T."""

    scans: int
    state_dim: int
    tracks: tuple[Track, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tracks", tuple(self.tracks))

    def __len__(self) -> int:
        return len(self.tracks)

    def states_at(self, t: int) -> list[StateVector]:
        return [trk.points[t] for trk in self.tracks if t in trk.points]

    def existing_count(self, t: int) -> int:
        return sum(1 for trk in self.tracks if t in trk.points)

    def track_label(self, index: int) -> str:
        """Label of 1-based track ``index``, falling back to T<index>."""
        trk = self.tracks[index - 1]
        return trk.label if trk.label is not None else f"T{index}"

    def as_multiset(self) -> tuple:
        """Order-free canonical form (labels ignored)."""
        return tuple(sorted(trk.key() for trk in self.tracks))


def same_track_sets(a: TrackSet, b: TrackSet) -> bool:
    """Equality as multisets of tracks, ignoring order and labels."""
    return (
        a.scans == b.scans
        and a.state_dim == b.state_dim
        and a.as_multiset() == b.as_multiset()
    )


class Direction(Enum):
    """Which way the many-to-one assignment maps."""

    EST_TO_TRUTH = "est_to_truth"
    TRUTH_TO_EST = "truth_to_est"


@dataclass(frozen=True)
class Assignment:
    """A many-to-one map from source tracks to {0} or a target track.

    ``source_to_target[j-1]`` is the 1-based target index of source ``j`` or 0
    when unassigned.  ``orders[i-1]`` is the ordered tuple of 1-based source
    indices assigned to target ``i`` (empty when none); its first element is
    the one that escapes the extra-assignment penalty at scans it exists.
    """

    direction: Direction
    source_to_target: tuple[int, ...]
    orders: tuple[tuple[int, ...], ...]

    def preimage(self, target: int) -> tuple[int, ...]:
        return self.orders[target - 1]

    def unassigned_sources(self) -> tuple[int, ...]:
        return tuple(j + 1 for j, i in enumerate(self.source_to_target) if i == 0)

    def unassigned_targets(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, order in enumerate(self.orders) if not order)


@dataclass(frozen=True)
class MetricParams:
    """Parameters shared by the OSPAMT, OSPA and OSPAT computations.

    p        order parameter, 1 <= p < inf
    c        cutoff, > 0
    delta    extra-assignment penalty, 0 < delta <= c (warns at delta == c,
             the boundary the source material leaves open)
    alpha    label penalty used by OSPAT only, 0 <= alpha <= c
    p_prime  order of the base norm d(x, y); defaults to p
    scale    optional positive per-dimension multipliers applied to every
             coordinate before any distance is taken
    """

    p: float = 1.0
    c: float = 80.0
    delta: float = 10.0
    alpha: float = 10.0
    p_prime: float | None = None
    scale: tuple[float, ...] | None = field(default=None)

    def __post_init__(self) -> None:
        if not (1.0 <= self.p < math.inf):
            raise BadParametersError(f"order p must satisfy 1 <= p < inf, got {self.p}")
        if not (self.c > 0.0 and math.isfinite(self.c)):
            raise BadParametersError(f"cutoff c must be a positive real, got {self.c}")
        if not (0.0 < self.delta <= self.c):
            raise BadParametersError(
                f"assignment penalty delta must satisfy 0 < delta <= c, got {self.delta}"
            )
        if self.delta == self.c:
            warnings.warn(
                "delta == c is a boundary case with undocumented behaviour",
                stacklevel=2,
            )
        if not (0.0 <= self.alpha <= self.c):
            raise BadParametersError(
                f"label penalty alpha must satisfy 0 <= alpha <= c, got {self.alpha}"
            )
        if self.p_prime is not None and not (1.0 <= self.p_prime < math.inf):
            raise BadParametersError(
                f"base norm order p_prime must satisfy 1 <= p' < inf, got {self.p_prime}"
            )
        if self.scale is not None:
            scale = tuple(float(s) for s in self.scale)
            if any(not (s > 0.0 and math.isfinite(s)) for s in scale):
                raise BadParametersError("scale factors must be positive reals")
            object.__setattr__(self, "scale", scale)

    @property
    def base_order(self) -> float:
        return self.p if self.p_prime is None else self.p_prime


@dataclass(frozen=True)
class MetricReport:
    """Full result of one OSPAMT evaluation.

    ``total ** p * n`` equals both ``sum(per_time[t] ** p * n_t[t])`` and
    ``(loc ** p + card ** p) * n``; ``total <= c`` always.
    """

    total: float
    per_time: tuple[float, ...]
    loc: float
    card: float
    loc_t: tuple[float, ...]
    card_t: tuple[float, ...]
    assignment: Assignment
    n_t: tuple[int, ...]
    n: int


def validate(track_set: TrackSet) -> TrackSet:
    """Check every track-set invariant and return the set unchanged.

    Raises EmptyTrackError, DimensionMismatchError, ScanOutOfRangeError or
    NonFiniteCoordinateError naming the offending track and scan.  An empty
    set is legal.
    """
    if track_set.scans < 1:
        raise BadParametersError(f"scans must be >= 1, got {track_set.scans}")
    if track_set.state_dim < 1:
        raise BadParametersError(f"state_dim must be >= 1, got {track_set.state_dim}")
    for idx, trk in enumerate(track_set.tracks, start=1):
        name = track_set.track_label(idx)
        if not trk.points:
            raise EmptyTrackError(f"track {name} has no existing state at any scan")
        for t, x in trk.points.items():
            if not (1 <= t <= track_set.scans):
                raise ScanOutOfRangeError(
                    f"track {name} has a point at scan {t}, outside 1..{track_set.scans}"
                )
            if len(x) != track_set.state_dim:
                raise DimensionMismatchError(
                    f"track {name} at scan {t} has dimension {len(x)}, "
                    f"expected {track_set.state_dim}"
                )
            if any(not math.isfinite(v) for v in x):
                raise NonFiniteCoordinateError(
                    f"track {name} at scan {t} has a non-finite coordinate"
                )
    return track_set


def base_distance(x: Sequence[float], y: Sequence[float], params: MetricParams) -> float:
    """p'-norm of the coordinate difference after per-dimension scaling."""
    if params.scale is not None:
        if len(params.scale) != len(x):
            raise DimensionMismatchError(
                f"scale has {len(params.scale)} factors for dimension {len(x)}"
            )
        diffs = [s * (a - b) for s, a, b in zip(params.scale, x, y)]
    else:
        diffs = [a - b for a, b in zip(x, y)]
    q = params.base_order
    if q == 2.0:
        return math.hypot(*diffs)
    if q == 1.0:
        return sum(abs(d) for d in diffs)
    return sum(abs(d) ** q for d in diffs) ** (1.0 / q)


def cutoff_distance(
    x: StateVector | None, y: StateVector | None, params: MetricParams
) -> float:
    """min{c, d(x, y)} for two existing states, else 0."""
    if x is None or y is None:
        return 0.0
    return min(params.c, base_distance(x, y, params))


def count_distances(a: TrackSet, b: TrackSet) -> tuple[tuple[int, ...], int]:
    """Per-scan and total distance counts between two track sets.

    n_t is the larger of the two existing-target counts at scan t and n is
    the sum over all scans; both normalize the metrics.
    """
    if a.scans != b.scans:
        raise ScanMismatchError(f"scan counts differ: {a.scans} vs {b.scans}")
    n_t = tuple(
        max(a.existing_count(t), b.existing_count(t)) for t in range(1, a.scans + 1)
    )
    return n_t, sum(n_t)


def check_comparable(a: TrackSet, b: TrackSet) -> None:
    """Raise unless two validated sets share scans and state dimension."""
    if a.scans != b.scans:
        raise ScanMismatchError(f"scan counts differ: {a.scans} vs {b.scans}")
    if a.state_dim != b.state_dim:
        raise DimensionMismatchError(
            f"state dimensions differ: {a.state_dim} vs {b.state_dim}"
        )


def make_track(points: Mapping[int, Iterable[float]] | Mapping[int, float],
               label: str | None = None) -> Track:
    """Build a track, promoting bare numbers to 1-D state vectors."""
    fixed: dict[int, StateVector] = {}
    for t, x in points.items():
        if isinstance(x, (int, float)):
            fixed[int(t)] = (float(x),)
        else:
            fixed[int(t)] = tuple(float(v) for v in x)
    return Track(points=fixed, label=label)
