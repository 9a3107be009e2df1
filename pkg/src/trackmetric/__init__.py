"""Distances between finite sets of target tracks: OSPAMT, OSPA and OSPAT."""

from .assign import (
    INFEASIBLE,
    ManyToOneResult,
    enumerate_assignments,
    greedy_many_to_one,
    solve_one_to_one,
)
from .core import (
    Assignment,
    Direction,
    MetricParams,
    MetricReport,
    Track,
    TrackSet,
    count_distances,
    cutoff_distance,
    make_track,
    same_track_sets,
    validate,
)
from .errors import (
    BadParametersError,
    DimensionMismatchError,
    EmptyTrackError,
    InfeasibleAssignmentError,
    NoConvergenceError,
    NonFiniteCoordinateError,
    ParseError,
    ScanMismatchError,
    ScanOutOfRangeError,
    TooLargeError,
    TrackMetricError,
    ValidationError,
)
from .io import load_track_set, save_track_set
from .ospa import OspaResult, ospa, ospa_per_scan
from .ospamt import (
    DirectionalBreakdown,
    Mode,
    directional_cost,
    directional_distance,
    directional_terms,
    order_at_time,
    ospamt_metric,
    pairwise_cost,
    quasi_ospamt,
    split_tracks,
)
from .ospat import (
    LabeledState,
    LabeledTrackSet,
    ospat_at_time,
    ospat_global,
    ospat_label,
    ospat_per_scan,
    ospat_reorder,
)
from .scenarios import FigureId, Scenario, ScenarioSpec, build, random_scenario

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BadParametersError",
    "DimensionMismatchError",
    "Direction",
    "DirectionalBreakdown",
    "EmptyTrackError",
    "FigureId",
    "INFEASIBLE",
    "InfeasibleAssignmentError",
    "LabeledState",
    "LabeledTrackSet",
    "ManyToOneResult",
    "MetricParams",
    "MetricReport",
    "Mode",
    "NoConvergenceError",
    "NonFiniteCoordinateError",
    "OspaResult",
    "ParseError",
    "Scenario",
    "ScenarioSpec",
    "ScanMismatchError",
    "ScanOutOfRangeError",
    "TooLargeError",
    "Track",
    "TrackMetricError",
    "TrackSet",
    "ValidationError",
    "build",
    "count_distances",
    "cutoff_distance",
    "directional_cost",
    "directional_distance",
    "directional_terms",
    "enumerate_assignments",
    "greedy_many_to_one",
    "load_track_set",
    "make_track",
    "order_at_time",
    "ospa",
    "ospa_per_scan",
    "ospamt_metric",
    "ospat_at_time",
    "ospat_global",
    "ospat_label",
    "ospat_per_scan",
    "ospat_reorder",
    "pairwise_cost",
    "quasi_ospamt",
    "random_scenario",
    "same_track_sets",
    "save_track_set",
    "solve_one_to_one",
    "split_tracks",
    "validate",
]
