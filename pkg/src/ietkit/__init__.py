"""Exact interval exchange transformations, length induction, and
weak-metric probes for near-identity powers."""

from .errors import (
    CapExceededError,
    InconsistentPathError,
    InductionTargetError,
    SaddleConnectionError,
    TowerDisjointnessError,
)
from .iet import (
    Admissibility,
    AdmissibilityReport,
    Iet,
    InducedMap,
    Permutation,
    is_admissible,
)
from .induction3 import (
    SYMMETRIC_3,
    VeechStep,
    block_path,
    brute_force_return_times,
    closed_path_sums,
    invariant_density,
    return_time_identity,
    veech_step,
)
from .numeric import (
    HalfOpenInterval,
    IntervalSet,
    Rational,
    interval_set,
    rational,
)
from .rauzy import (
    RauzyClass,
    RauzyMove,
    RauzyPath,
    RvStep,
    RvTrace,
    VisitationMatrix,
    act,
    detect_connection,
    max_row_ratio,
    normalized,
    rauzy_class,
    reverse_path,
    rv_iterate,
    rv_normalized,
    rv_step,
    step_matrix,
)
from .whirly import (
    ClaimsReport,
    CoverageReport,
    PairSets,
    PositiveLoop,
    ProbeReport,
    SelfShift,
    Tower,
    TowerStack,
    WeakMetricConfig,
    WhirlyWindow,
    WindowHit,
    WindowReport,
    WindowScan,
    analyze_window_hits,
    build_tower,
    construct_window_point,
    dyadic_generating_interval,
    find_positive_loop,
    find_window_hits,
    harvest_candidate_powers,
    in_window_core,
    small_window_constant,
    tower_coverage_bound,
    tower_stack,
    verify_overlap_claims,
    weak_distance,
    weak_distance_tail,
    whirly_probe,
)

__version__ = "0.1.0"
