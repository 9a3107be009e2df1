"""Reference OSPAT distances: track reordering, labeling and per-scan scores.

OSPAT first picks one global one-to-one pairing between the two track sets
(the pairing minimizing the summed per-scan Euclidean costs, with unpaired
tracks of the larger set ignored), uses it to stamp labels onto every state,
and then scores each scan with an OSPA minimization over labeled states whose
base distance adds a penalty for mismatched labels.  The module reproduces
the known defects of this construction on purpose: the label penalty breaks
the triangle inequality, a zero penalty breaks identity, and equal-size sets
are always fully paired even across disjoint lifetimes.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
import numpy as np

from .assign import solve_one_to_one
from .core import (
    MetricParams,
    StateVector,
    TrackSet,
    base_distance,
    check_comparable,
)


@dataclass(frozen=True)
class LabeledState:
    label: int
    state: StateVector


@dataclass(frozen=True)
class LabeledTrackSet:
    """A track set with one label per track, aligned with track order."""

    tracks: TrackSet
    labels: tuple[int, ...]

    def labeled_states_at(self, t: int) -> list[tuple[int, LabeledState]]:
        """Existing labeled states at scan t, with 1-based track indices."""
        out = []
        for idx, (trk, label) in enumerate(
            zip(self.tracks.tracks, self.labels), start=1
        ):
            if trk.exists_at(t):
                out.append((idx, LabeledState(label, trk.points[t])))
        return out


@dataclass(frozen=True)
class OspatAssignment:
    """Global one-to-one pairing: 1-based (index in a, index in b) pairs."""

    pairs: tuple[tuple[int, int], ...]
    smaller: str  # "a" or "b"


def _pair_scan_cost(
    x: StateVector | None, y: StateVector | None, params: MetricParams
) -> float:
    """Per-scan reordering cost: 0, the cutoff, or the capped 2-norm."""
    if x is None and y is None:
        return 0.0
    if x is None or y is None:
        return params.c
    euclid = dataclasses.replace(params, p_prime=2.0)
    return min(params.c, base_distance(x, y, euclid))


def _reorder_cost_matrix(
    small: TrackSet, large: TrackSet, params: MetricParams
) -> np.ndarray:
    m, n = len(small.tracks), len(large.tracks)
    d = np.zeros((m, n))
    for i, s in enumerate(small.tracks):
        for j, l in enumerate(large.tracks):
            d[i, j] = sum(
                _pair_scan_cost(s.state_at(t), l.state_at(t), params)
                for t in range(1, small.scans + 1)
            )
    return d


def ospat_reorder(a: TrackSet, b: TrackSet, params: MetricParams) -> OspatAssignment:
    """Global pairing minimizing the summed per-scan costs.

    The smaller set maps injectively into the larger, so every track of the
    smaller set is paired no matter how far apart the lifetimes are, and
    leftover tracks of the larger set contribute nothing to the choice.
    Ties resolve to the lexicographically smallest assignment vector.
    """
    check_comparable(a, b)
    if not a.tracks or not b.tracks:
        return OspatAssignment((), "b" if len(b.tracks) <= len(a.tracks) else "a")
    if len(b.tracks) <= len(a.tracks):
        d = _reorder_cost_matrix(b, a, params)
        pi, _ = solve_one_to_one(d)
        pairs = tuple((pi[j] + 1, j + 1) for j in range(len(b.tracks)))
        return OspatAssignment(pairs, "b")
    d = _reorder_cost_matrix(a, b, params)
    pi, _ = solve_one_to_one(d)
    pairs = tuple((i + 1, pi[i] + 1) for i in range(len(a.tracks)))
    return OspatAssignment(pairs, "a")


def ospat_label(
    a: TrackSet, b: TrackSet, assignment: OspatAssignment
) -> tuple[LabeledTrackSet, LabeledTrackSet]:
    """Stamp labels from the global pairing onto both sets.

    Paired tracks share the label of the smaller-set track (its 1-based
    index); leftover tracks of the larger set take the next labels in their
    original order.
    """
    labels_a = [0] * len(a.tracks)
    labels_b = [0] * len(b.tracks)
    if assignment.smaller == "b":
        for ai, bi in assignment.pairs:
            labels_b[bi - 1] = bi
            labels_a[ai - 1] = bi
    else:
        for ai, bi in assignment.pairs:
            labels_a[ai - 1] = ai
            labels_b[bi - 1] = ai
    next_label = len(assignment.pairs)
    for labels in (labels_a, labels_b):
        for idx, lab in enumerate(labels):
            if lab == 0:
                next_label += 1
                labels[idx] = next_label
    return (
        LabeledTrackSet(a, tuple(labels_a)),
        LabeledTrackSet(b, tuple(labels_b)),
    )


def labeled_base_distance(
    x: LabeledState, y: LabeledState, params: MetricParams
) -> float:
    """min{c, (d(x, y)^p' + (alpha when labels differ)^p')^(1/p')}."""
    q = params.base_order
    d = base_distance(x.state, y.state, params)
    if x.label != y.label:
        d = (d**q + params.alpha**q) ** (1.0 / q)
    return min(params.c, d)


@dataclass(frozen=True)
class OspatAtTime:
    """OSPAT score at one scan with its OSPA-style loc/card split."""

    t: int
    total: float
    loc: float
    card: float
    pairs: tuple[tuple[int, int], ...]
    n_t: int


def ospat_at_time(
    labeled_a: LabeledTrackSet,
    labeled_b: LabeledTrackSet,
    t: int,
    params: MetricParams,
) -> OspatAtTime:
    """OSPA minimization over the labeled states existing at scan t."""
    sa = labeled_a.labeled_states_at(t)
    sb = labeled_b.labeled_states_at(t)
    m, n = len(sa), len(sb)
    n_t = max(m, n)
    if n_t == 0:
        return OspatAtTime(t, 0.0, 0.0, 0.0, (), 0)
    p, c = params.p, params.c
    swap = m > n
    small, big = (sb, sa) if swap else (sa, sb)
    if not small:
        return OspatAtTime(t, c, 0.0, c, (), n_t)
    cost = np.array(
        [
            [labeled_base_distance(x, y, params) ** p for _, y in big]
            for _, x in small
        ]
    )
    pi, loc_sum = solve_one_to_one(cost)
    k = len(big)
    loc = (loc_sum / k) ** (1.0 / p)
    card = (c**p * (k - len(small)) / k) ** (1.0 / p)
    total = ((loc_sum + c**p * (k - len(small))) / k) ** (1.0 / p)
    raw_pairs = [(small[i][0], big[j][0]) for i, j in enumerate(pi)]
    if swap:
        raw_pairs = [(aj, bi) for bi, aj in raw_pairs]
    return OspatAtTime(t, total, loc, card, tuple(sorted(raw_pairs)), n_t)


@dataclass(frozen=True)
class OspatGlobal:
    """Summed reordering costs of the winning pairing (not normalized)."""

    total: float
    per_time: tuple[float, ...]
    assignment: OspatAssignment


def ospat_global(a: TrackSet, b: TrackSet, params: MetricParams) -> OspatGlobal:
    """Global OSPAT distance and its per-scan terms.

    With one empty set there are no pairs to sum, so every existing state of
    the other set is treated as a lone target and charged the cutoff at each
    scan it exists.
    """
    check_comparable(a, b)
    assignment = ospat_reorder(a, b, params)
    per_time: list[float] = []
    if not a.tracks or not b.tracks:
        other = b if not a.tracks else a
        for t in range(1, a.scans + 1):
            per_time.append(params.c * other.existing_count(t))
        return OspatGlobal(sum(per_time), tuple(per_time), assignment)
    for t in range(1, a.scans + 1):
        per_time.append(
            sum(
                _pair_scan_cost(
                    a.tracks[ai - 1].state_at(t),
                    b.tracks[bi - 1].state_at(t),
                    params,
                )
                for ai, bi in assignment.pairs
            )
        )
    return OspatGlobal(sum(per_time), tuple(per_time), assignment)


def ospat_per_scan(
    a: TrackSet, b: TrackSet, params: MetricParams
) -> tuple[list[OspatAtTime], OspatAssignment]:
    """Reorder, label, then score every scan; the usual evaluation pipeline."""
    assignment = ospat_reorder(a, b, params)
    labeled_a, labeled_b = ospat_label(a, b, assignment)
    rows = [
        ospat_at_time(labeled_a, labeled_b, t, params) for t in range(1, a.scans + 1)
    ]
    return rows, assignment
