"""Core domain types shared across the analysis pipeline."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional


class EventKind(str, Enum):
    APPEAR = "appear"
    DISAPPEAR = "disappear"
    CLICK = "click"


class ObjectType(str, Enum):
    MUSHROOM_TARGET = "mushroom_target"
    BLUE_FLOWER = "blue_flower"
    YELLOW_PURPLE_FLOWER = "yellow_purple_flower"
    UNKNOWN = "unknown"


TARGET_TYPES = frozenset({ObjectType.MUSHROOM_TARGET})
DISTRACTOR_TYPES = frozenset({ObjectType.BLUE_FLOWER, ObjectType.YELLOW_PURPLE_FLOWER})


class ClickLabel(str, Enum):
    CORRECT = "correct"
    INCORRECT = "incorrect"
    NEUTRAL = "neutral"


class Movement(str, Enum):
    FIXATION = "fixation"
    SACCADE = "saccade"
    UNCLASSIFIED = "unclassified"


class Trend(str, Enum):
    IMPROVING = "improving"
    DECLINING = "declining"
    FLAT = "flat"


class Severity(str, Enum):
    INFO = "info"
    ATTENTION = "attention"
    ALERT = "alert"


@dataclass(frozen=True, slots=True)
class GazeSample:
    """One cleaned gaze coordinate, timestamp in ms since session start."""

    timestamp_ms: int
    x_px: float
    y_px: float


@dataclass(frozen=True, slots=True)
class GameEvent:
    """An appear/disappear/click occurrence from the game log.

    ``line_number`` is the 1-based physical line in the source file and is
    only used to break timestamp ties deterministically.
    """

    timestamp_ms: int
    kind: EventKind
    object_id: Optional[str] = None
    object_type: ObjectType = ObjectType.UNKNOWN
    position_px: Optional[tuple[float, float]] = None
    click_label: Optional[ClickLabel] = None
    line_number: int = 0


@dataclass
class SessionRecord:
    """One level's cleaned samples and events plus cleaning bookkeeping."""

    student_id: str
    level: int
    screen_w: int
    screen_h: int
    samples: list[GazeSample]
    events: list[GameEvent]
    rows_total: int
    rows_dropped: int
    warnings: list[str] = field(default_factory=list)


@dataclass
class CombinedDataset:
    """Per-level records for one student, keyed by level."""

    student_id: str
    records: dict[int, SessionRecord]

    @property
    def levels(self) -> list[int]:
        return sorted(self.records)


@dataclass(frozen=True, slots=True)
class ClassifiedSample:
    """Gaze sample plus point-to-point velocity and movement label.

    The first sample of a session has no predecessor, so its velocity is
    ``None`` and its movement is ``unclassified``.
    """

    sample: GazeSample
    velocity_px_s: Optional[float]
    movement: Movement


@dataclass(frozen=True)
class FixationEvent:
    """Maximal run of consecutive fixation-labelled samples."""

    start_ms: int
    end_ms: int
    duration_ms: int
    centroid_px: tuple[float, float]
    sample_count: int


@dataclass
class SpatialMetrics:
    path_length_px: float
    screen_utilization: float
    heatmap: list[list[int]]
    peak_velocity_px_s: float
    mean_velocity_px_s: float


@dataclass
class ObjectEpisode:
    """Lifetime of one on-screen object, from appear to disappear."""

    object_id: Optional[str]
    object_type: ObjectType
    appear_ms: int
    disappear_ms: Optional[int] = None
    position_px: Optional[tuple[float, float]] = None

    @property
    def visible_ms(self) -> Optional[int]:
        if self.disappear_ms is None:
            return None
        return self.disappear_ms - self.appear_ms


@dataclass
class MatchedResponse:
    """A target paired with the correct click that answered it."""

    target: ObjectEpisode
    click: GameEvent
    reaction_ms: int


@dataclass
class Timeline:
    """Chronological episodes and clicks extracted from raw events."""

    episodes: list[ObjectEpisode]
    clicks: list[GameEvent]
    warnings: list[str] = field(default_factory=list)


@dataclass
class LevelMetrics:
    level: int
    targets_shown: int
    distractors_shown: int
    matched_pairs: int
    hit_rate: float
    correct_clicks: int
    incorrect_clicks: int
    neutral_clicks: int
    false_alarm_rate: float
    reaction_times_ms: list[int]
    mean_rt_ms: float
    median_rt_ms: float
    spatial: SpatialMetrics
    fixation_rate: float
    duration_ms: int
    flags: list[str] = field(default_factory=list)


@dataclass
class TrendSeries:
    """Per-level values for one metric with step-wise relative deltas.

    ``deltas[i]`` is the relative change from level i to level i+1.
    ``step_directions`` qualify each step as improving/declining/flat taking
    the metric's polarity into account (lower reaction time is better).
    """

    metric: str
    values: list[float]
    deltas: list[float]
    step_directions: list[Trend]
    direction: Trend


@dataclass
class MultilevelComparison:
    per_level: list[LevelMetrics]
    hit_rate_trend: TrendSeries
    rt_trend: TrendSeries
    utilization_trend: TrendSeries
    mistakes_trend: TrendSeries


@dataclass
class Evidence:
    """Concrete metric comparison that made a recommendation fire."""

    metric: str
    value: float
    threshold: float
    comparator: str
    level: Optional[int] = None

    def holds(self) -> bool:
        if self.comparator == "<":
            return self.value < self.threshold
        if self.comparator == ">":
            return self.value > self.threshold
        raise ValueError(f"unknown comparator {self.comparator!r}")


@dataclass
class Recommendation:
    rule_id: str
    severity: Severity
    message: str
    evidence: Evidence


@dataclass
class CalibrationReport:
    """Data-driven parameter suggestions; advisory, never auto-applied."""

    velocity_percentiles: dict[float, float]
    chosen_threshold_px_s: float
    fixation_fraction_at_threshold: float
    rt_window_ms: tuple[int, int]
    retention_by_tolerance: dict[float, float]
    per_level_thresholds: dict[int, float] = field(default_factory=dict)
    histogram_bin_edges: list[float] = field(default_factory=list)
    histogram_counts: list[int] = field(default_factory=list)


def to_jsonable(obj: Any) -> Any:
    """Convert dataclasses / enums / tuples into JSON-serializable values.

    Non-finite floats become ``None`` so the output is strict JSON.
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {_key(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _key(k: Any) -> Any:
    if isinstance(k, Enum):
        return k.value
    if isinstance(k, float) and k.is_integer():
        return int(k)
    return k
