"""End-to-end analysis orchestration shared by the CLI and the service.

One level flows: classify samples → merge fixations → build the event
timeline → match targets to correct clicks → score. A session is the
per-level results plus the cross-level comparison and recommendations.
Everything here is a pure function of (data, config), so identical inputs
give identical outputs — the property the CLI manifest and the service
cache both rely on.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .classify import classify_ivt, merge_fixations
from .config import EngineConfig
from .events import build_timeline, match_responses
from .metrics import compare_levels, level_metrics, recommend
from .types import (
    ClassifiedSample,
    ClickLabel,
    CombinedDataset,
    FixationEvent,
    LevelMetrics,
    MatchedResponse,
    MultilevelComparison,
    Recommendation,
    SessionRecord,
    TARGET_TYPES,
    Timeline,
)


@dataclass
class LevelAnalysis:
    """Everything computed for one level, kept for chart building."""

    record: SessionRecord
    classified: list[ClassifiedSample]
    fixations: list[FixationEvent]
    timeline: Timeline
    matches: list[MatchedResponse]
    metrics: LevelMetrics


@dataclass
class SessionAnalysis:
    student_id: str
    levels: dict[int, LevelAnalysis]
    comparison: MultilevelComparison
    recommendations: list[Recommendation]
    config: EngineConfig = field(default_factory=EngineConfig)


def analyze_record(
    record: SessionRecord,
    config: EngineConfig,
) -> LevelAnalysis:
    """Run classification, matching, and scoring for a single level."""
    params = config.params
    classified = classify_ivt(record.samples, params.v_thresh_px_s)
    fixations = merge_fixations(classified)
    timeline = build_timeline(record.events)
    targets = [ep for ep in timeline.episodes if ep.object_type in TARGET_TYPES]
    correct_clicks = [
        c for c in timeline.clicks if c.click_label is ClickLabel.CORRECT
    ]
    matches = match_responses(
        targets,
        correct_clicks,
        params.rt_min_ms,
        params.rt_max_ms,
        strategy=config.match_strategy,
    )
    scored = level_metrics(record, classified, matches, params)
    return LevelAnalysis(record, classified, fixations, timeline, matches, scored)


def analyze_session(dataset: CombinedDataset, config: EngineConfig) -> SessionAnalysis:
    """Analyze every level of a combined dataset and compare them."""
    config.validate()
    levels = {
        level: analyze_record(dataset.records[level], config)
        for level in sorted(dataset.records)
    }
    comparison = compare_levels(
        [la.metrics for la in levels.values()], config.flat_trend_threshold
    )
    recommendations = recommend(comparison, config.rules)
    return SessionAnalysis(
        student_id=dataset.student_id,
        levels=levels,
        comparison=comparison,
        recommendations=recommendations,
        config=config,
    )
