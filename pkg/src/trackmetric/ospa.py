"""Reference OSPA metric between finite sets of states, and its per-scan lift.

The distance between two state sets is the p-th order mean of the optimally
matched, cutoff-capped base distances plus a cutoff penalty per unmatched
state of the larger set.  Applied scan by scan to two track sets it gives the
classic per-time evaluation curve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .assign import solve_one_to_one
from .core import (
    MetricParams,
    StateVector,
    TrackSet,
    check_comparable,
    cutoff_distance,
)
from .errors import DimensionMismatchError


@dataclass(frozen=True)
class OspaResult:
    """Total distance with its localization/cardinality split.

    ``total ** p == loc ** p + card ** p`` exactly.  ``pairs`` holds the
    optimal matching as 1-based (x, y) element indices.
    """

    total: float
    loc: float
    card: float
    pairs: tuple[tuple[int, int], ...]


def ospa(
    xs: Sequence[StateVector], ys: Sequence[StateVector], params: MetricParams
) -> OspaResult:
    """OSPA distance between two finite sets of state vectors."""
    dims = {len(x) for x in xs} | {len(y) for y in ys}
    if len(dims) > 1:
        raise DimensionMismatchError(f"mixed state dimensions {sorted(dims)}")
    m, n = len(xs), len(ys)
    if m == 0 and n == 0:
        return OspaResult(0.0, 0.0, 0.0, ())
    if m > n:
        swapped = ospa(ys, xs, params)
        return OspaResult(
            swapped.total,
            swapped.loc,
            swapped.card,
            tuple(sorted((i, j) for j, i in swapped.pairs)),
        )
    p, c = params.p, params.c
    if m == 0:
        card = c
        return OspaResult(card, 0.0, card, ())
    cost = np.array(
        [[cutoff_distance(x, y, params) ** p for y in ys] for x in xs], dtype=float
    )
    pi, loc_sum = solve_one_to_one(cost)
    loc = (loc_sum / n) ** (1.0 / p)
    card = (c**p * (n - m) / n) ** (1.0 / p)
    total = ((loc_sum + c**p * (n - m)) / n) ** (1.0 / p)
    pairs = tuple((i + 1, j + 1) for i, j in enumerate(pi))
    return OspaResult(total, loc, card, pairs)


@dataclass(frozen=True)
class ScanOspa:
    """OSPA at one scan, with pairs as 1-based *track* indices (a, b)."""

    t: int
    total: float
    loc: float
    card: float
    pairs: tuple[tuple[int, int], ...]
    n_t: int


def ospa_per_scan(a: TrackSet, b: TrackSet, params: MetricParams) -> list[ScanOspa]:
    """OSPA of the existing states of ``a`` and ``b`` at every scan."""
    check_comparable(a, b)
    out: list[ScanOspa] = []
    for t in range(1, a.scans + 1):
        ia = [i for i, trk in enumerate(a.tracks, start=1) if trk.exists_at(t)]
        ib = [j for j, trk in enumerate(b.tracks, start=1) if trk.exists_at(t)]
        xs = [a.tracks[i - 1].points[t] for i in ia]
        ys = [b.tracks[j - 1].points[t] for j in ib]
        res = ospa(xs, ys, params)
        pairs = tuple((ia[i - 1], ib[j - 1]) for i, j in res.pairs)
        out.append(ScanOspa(t, res.total, res.loc, res.card, pairs, max(len(xs), len(ys))))
    return out
