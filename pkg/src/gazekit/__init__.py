"""gazekit: gaze analytics for attention-game eye-tracking sessions.

Ingest per-level CSV logs, classify fixations/saccades by velocity
threshold, match targets to clicks in time, score per-level and
cross-level performance, and emit tables, chart series, SVG snapshots,
and threshold recommendations — via Python API, CLI, or HTTP service.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .calibrate import (
    build_calibration_report,
    calibrate_rt_window,
    calibrate_velocity_threshold,
    linear_quantile,
    tolerance_sweep,
    velocity_distribution,
    velocity_histogram,
)
from .classify import (
    classify_ivt,
    fixation_rate,
    merge_fixations,
    spatial_metrics,
    velocities_of,
)
from .config import (
    AnalysisParams,
    ColumnMapping,
    DEFAULT_CONFIG_TOML,
    EngineConfig,
    MATCH_STRATEGIES,
    RuleTable,
    load_config,
    params_to_toml,
)
from .errors import (
    DuplicateLevel,
    EmptyAfterCleaning,
    EmptyAfterOutlierRemoval,
    EmptySession,
    FileUnreadable,
    GazekitError,
    IncompleteAnalysis,
    IOFailure,
    MalformedCoordinate,
    MissingColumn,
    MixedStudents,
    NoClassifiedSamples,
    NonMonotonicTimestamps,
    TooFewSamples,
    UnknownChart,
    ValidationError,
)
from .estimators import IVTClassifier, as_gaze_array, samples_to_array
from .events import build_timeline, match_responses
from .ingest import (
    derive_click_labels,
    filter_bounds,
    format_coordinate,
    in_bounds,
    load_level_file,
    merge_levels,
    parse_coordinate,
    parse_rows,
)
from .metrics import compare_levels, level_metrics, recommend
from .pipeline import (
    LevelAnalysis,
    SessionAnalysis,
    analyze_record,
    analyze_session,
)
from .report import (
    CHART_IDS,
    ChartBundle,
    build_chart_bundle,
    chart_bundle_json,
    export_tables,
    pct,
    rt_histogram,
)
from .svg import render_svg
from .synth import SynthSpec, generate_session, write_session
from .types import (
    CalibrationReport,
    ClassifiedSample,
    ClickLabel,
    CombinedDataset,
    DISTRACTOR_TYPES,
    EventKind,
    Evidence,
    FixationEvent,
    GameEvent,
    GazeSample,
    LevelMetrics,
    MatchedResponse,
    Movement,
    MultilevelComparison,
    ObjectEpisode,
    ObjectType,
    Recommendation,
    SessionRecord,
    Severity,
    SpatialMetrics,
    TARGET_TYPES,
    Timeline,
    Trend,
    TrendSeries,
    to_jsonable,
)

__all__ = [
    "__version__",
    # config
    "AnalysisParams",
    "ColumnMapping",
    "DEFAULT_CONFIG_TOML",
    "EngineConfig",
    "MATCH_STRATEGIES",
    "RuleTable",
    "load_config",
    "params_to_toml",
    # errors
    "DuplicateLevel",
    "EmptyAfterCleaning",
    "EmptyAfterOutlierRemoval",
    "EmptySession",
    "FileUnreadable",
    "GazekitError",
    "IncompleteAnalysis",
    "IOFailure",
    "MalformedCoordinate",
    "MissingColumn",
    "MixedStudents",
    "NoClassifiedSamples",
    "NonMonotonicTimestamps",
    "TooFewSamples",
    "UnknownChart",
    "ValidationError",
    # types
    "CalibrationReport",
    "ClassifiedSample",
    "ClickLabel",
    "CombinedDataset",
    "DISTRACTOR_TYPES",
    "EventKind",
    "Evidence",
    "FixationEvent",
    "GameEvent",
    "GazeSample",
    "LevelMetrics",
    "MatchedResponse",
    "Movement",
    "MultilevelComparison",
    "ObjectEpisode",
    "ObjectType",
    "Recommendation",
    "SessionRecord",
    "Severity",
    "SpatialMetrics",
    "TARGET_TYPES",
    "Timeline",
    "Trend",
    "TrendSeries",
    "to_jsonable",
    # ingest
    "derive_click_labels",
    "filter_bounds",
    "format_coordinate",
    "in_bounds",
    "load_level_file",
    "merge_levels",
    "parse_coordinate",
    "parse_rows",
    # classification
    "classify_ivt",
    "fixation_rate",
    "merge_fixations",
    "spatial_metrics",
    "velocities_of",
    # calibration
    "build_calibration_report",
    "calibrate_rt_window",
    "calibrate_velocity_threshold",
    "linear_quantile",
    "tolerance_sweep",
    "velocity_distribution",
    "velocity_histogram",
    # events
    "build_timeline",
    "match_responses",
    # metrics
    "compare_levels",
    "level_metrics",
    "recommend",
    # pipeline
    "LevelAnalysis",
    "SessionAnalysis",
    "analyze_record",
    "analyze_session",
    # report / svg
    "CHART_IDS",
    "ChartBundle",
    "build_chart_bundle",
    "chart_bundle_json",
    "export_tables",
    "pct",
    "render_svg",
    "rt_histogram",
    # estimators
    "IVTClassifier",
    "as_gaze_array",
    "samples_to_array",
    # synth
    "SynthSpec",
    "generate_session",
    "write_session",
]
