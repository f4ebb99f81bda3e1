"""Distinct-distance subsets of exact point sets in the plane and on the sphere."""

from .counting import (
    ConfigCounts,
    config_counts,
    count_distinct_distances,
    count_isosceles,
    count_repeated_quadruples,
    pair_distance_multiset,
)
from .extraction import (
    ConflictReport,
    ExtractionParams,
    ExtractionResult,
    TrialRecord,
    exact_max_subset,
    expected_size_bound,
    greedy_extract,
    random_deletion_extract,
    verify_distinct,
)
from .generators import circle_equispaced, grid, random_plane, random_sphere
from .geometry import (
    ChordClass,
    CirclePoint,
    PlanePoint,
    PointSet,
    SpherePoint,
    SquaredDistance,
    chordal_squared,
    distance_key,
    inverse_stereographic,
    squared_distance,
)
from .pointfile import PointFileError, format_point_file, parse_point_file

__version__ = "0.1.0"
