"""Exact computation of foliation-detected slope sets on graph manifold
rational homology solid tori and the co-oriented taut foliation decision for
graph manifold rational homology spheres."""

from .slopes import (
    GluingMatrix,
    IDENTITY,
    Slope,
    SlopeArc,
    SlopeError,
    SlopeSet,
    VERTICAL,
    act,
    act_arc,
    arc_intersect,
    delta,
    simplest_slope,
    slope_from_pair,
    slope_from_string,
    slope_of_tau,
    tau_of_slope,
)
from .seifert import (
    ConstraintFamily,
    DetectionResult,
    ExceptionalSlope,
    FamilyError,
    JNCertificate,
    PieceError,
    SeifertPiece,
    Strength,
    TauStats,
    core_interval,
    detect_relative,
    jn_refine_high,
    jn_refine_low,
    tau_stats,
    v_count,
)
from .graph import (
    Edge,
    HomologySummary,
    LongitudeResult,
    ManifoldFormatError,
    PlumbingGraph,
    RoleError,
    dump_manifold,
    homology,
    load_manifold,
    normalize,
    parse_manifold,
    rational_longitude,
    split_at_edge,
    subtree,
    validate,
)
from .decide import (
    CtfVerdict,
    DecisionError,
    DegenerateReport,
    check_degenerate,
    classify_piece,
    decide_ctf,
    detect_tree,
    extract_witness,
    revalidate_witness,
)
from .oracle import GridSpec, grid_union, jn_exhaustive, jn_exhaustive_extremal

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
