"""Chart series and table documents derived from a finished analysis.

Five chart surfaces: timeline (object visibility bars, click markers,
match annotations), scanpath (fixation/saccade points over the screen),
velocity (per-sample speed with the threshold line), dashboard
(hit/miss, reaction-time histogram, movement shares), and multilevel
(four cross-level panels). Series contain only timestamps and values
already present in the analysis — nothing is resampled or interpolated.

Tables: one document per level plus a comparison document and a
recommendations document, as CSV (comma, UTF-8, header row) or JSON.
Percentages are rendered with one decimal place.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import IncompleteAnalysis, UnknownChart
from .pipeline import LevelAnalysis, SessionAnalysis
from .types import (
    LevelMetrics,
    MultilevelComparison,
    Recommendation,
    Movement,
    to_jsonable,
)

CHART_IDS = ("timeline", "scanpath", "velocity", "dashboard", "multilevel")
RT_HISTOGRAM_BIN_MS = 50
TABLE_FORMATS = ("csv", "json")


@dataclass
class ChartBundle:
    """JSON-ready series for the five chart surfaces.

    The four per-level surfaces hold one entry per level under
    ``"levels"``; ``multilevel`` carries an ``available`` flag that is
    False for single-level sessions.
    """

    timeline: dict = field(default_factory=dict)
    scanpath: dict = field(default_factory=dict)
    velocity: dict = field(default_factory=dict)
    dashboard: dict = field(default_factory=dict)
    multilevel: dict = field(default_factory=dict)

    def chart(self, which: str) -> dict:
        if which not in CHART_IDS:
            raise UnknownChart(which, CHART_IDS)
        return getattr(self, which)


def pct(fraction: float) -> str:
    """Render a 0..1 fraction as a one-decimal percentage string."""
    return f"{fraction * 100:.1f}"


def _timeline_series(la: LevelAnalysis) -> dict:
    episodes = [
        {
            "object_id": ep.object_id,
            "object_type": ep.object_type.value,
            "appear_ms": ep.appear_ms,
            "disappear_ms": ep.disappear_ms,
            "position_px": list(ep.position_px) if ep.position_px else None,
        }
        for ep in la.timeline.episodes
    ]
    clicks = [
        {
            "timestamp_ms": c.timestamp_ms,
            "label": c.click_label.value if c.click_label else None,
            "position_px": list(c.position_px) if c.position_px else None,
        }
        for c in la.timeline.clicks
    ]
    matches = [
        {
            "target_id": m.target.object_id,
            "target_appear_ms": m.target.appear_ms,
            "click_ms": m.click.timestamp_ms,
            "rt_ms": m.reaction_ms,
        }
        for m in la.matches
    ]
    return {
        "level": la.record.level,
        "episodes": episodes,
        "clicks": clicks,
        "matches": matches,
        "duration_ms": la.metrics.duration_ms,
    }


def _scanpath_series(la: LevelAnalysis) -> dict:
    fixation_points = []
    saccade_points = []
    for item in la.classified:
        point = {
            "t": item.sample.timestamp_ms,
            "x": item.sample.x_px,
            "y": item.sample.y_px,
        }
        if item.movement is Movement.FIXATION:
            fixation_points.append(point)
        elif item.movement is Movement.SACCADE:
            saccade_points.append(point)
    clicks = [
        {
            "timestamp_ms": c.timestamp_ms,
            "label": c.click_label.value if c.click_label else None,
            "position_px": list(c.position_px) if c.position_px else None,
        }
        for c in la.timeline.clicks
    ]
    fixation_events = [
        {
            "cx": f.centroid_px[0],
            "cy": f.centroid_px[1],
            "duration_ms": f.duration_ms,
            "samples": f.sample_count,
        }
        for f in la.fixations
    ]
    return {
        "level": la.record.level,
        "screen": [la.record.screen_w, la.record.screen_h],
        "fixation_points": fixation_points,
        "saccade_points": saccade_points,
        "fixation_events": fixation_events,
        "clicks": clicks,
        "heatmap": la.metrics.spatial.heatmap,
    }


def _velocity_series(la: LevelAnalysis, threshold_px_s: float) -> dict:
    points = [
        {
            "t": item.sample.timestamp_ms,
            "v": item.velocity_px_s,
            "label": item.movement.value,
        }
        for item in la.classified
        if item.velocity_px_s is not None
    ]
    return {
        "level": la.record.level,
        "threshold_px_s": threshold_px_s,
        "points": points,
        "clicks": [c.timestamp_ms for c in la.timeline.clicks],
        "peak_px_s": la.metrics.spatial.peak_velocity_px_s,
        "mean_px_s": la.metrics.spatial.mean_velocity_px_s,
    }


def rt_histogram(rts: Sequence[int], bin_ms: int = RT_HISTOGRAM_BIN_MS) -> dict:
    """Fixed-width histogram; counts always sum to len(rts)."""
    if not rts:
        return {"bin_ms": bin_ms, "edges": [], "counts": []}
    lo = (min(rts) // bin_ms) * bin_ms
    hi_edge = ((max(rts) // bin_ms) + 1) * bin_ms
    edges = list(range(lo, hi_edge + bin_ms, bin_ms))
    counts = [0] * (len(edges) - 1)
    for rt in rts:
        counts[min((rt - lo) // bin_ms, len(counts) - 1)] += 1
    return {"bin_ms": bin_ms, "edges": edges, "counts": counts}


def _dashboard_series(la: LevelAnalysis) -> dict:
    m = la.metrics
    counts = {"fixation": 0, "saccade": 0, "unclassified": 0}
    for item in la.classified:
        counts[item.movement.value] += 1
    labelled = counts["fixation"] + counts["saccade"]
    return {
        "level": m.level,
        "targets": {
            "shown": m.targets_shown,
            "matched": m.matched_pairs,
            "missed": m.targets_shown - m.matched_pairs,
            "hit_rate": m.hit_rate,
            "hit_rate_pct": pct(m.hit_rate),
        },
        "clicks": {
            "correct": m.correct_clicks,
            "incorrect": m.incorrect_clicks,
            "neutral": m.neutral_clicks,
            "false_alarm_rate": m.false_alarm_rate,
            "false_alarm_pct": pct(m.false_alarm_rate),
        },
        "rt": {
            "mean_ms": m.mean_rt_ms,
            "median_ms": m.median_rt_ms,
            "histogram": rt_histogram(m.reaction_times_ms),
        },
        "movement": {
            "counts": counts,
            "fixation_share": counts["fixation"] / labelled if labelled else 0.0,
            "saccade_share": counts["saccade"] / labelled if labelled else 0.0,
            "fixation_pct": pct(m.fixation_rate),
            "saccade_pct": pct(1.0 - m.fixation_rate) if labelled else pct(0.0),
        },
        "spatial": {
            "path_length_px": m.spatial.path_length_px,
            "screen_utilization": m.spatial.screen_utilization,
            "utilization_pct": pct(m.spatial.screen_utilization),
        },
    }


def _multilevel_series(comparison: MultilevelComparison) -> dict:
    if len(comparison.per_level) < 2:
        return {
            "available": False,
            "reason": "fewer than 2 levels analyzed; nothing to compare",
        }

    def panel(series, title):
        return {
            "title": title,
            "metric": series.metric,
            "levels": [m.level for m in comparison.per_level],
            "values": series.values,
            "deltas": series.deltas,
            "step_directions": [d.value for d in series.step_directions],
            "direction": series.direction.value,
        }

    return {
        "available": True,
        "panels": [
            panel(comparison.hit_rate_trend, "Success rate"),
            panel(comparison.rt_trend, "Response time"),
            panel(comparison.utilization_trend, "Screen area used"),
            panel(comparison.mistakes_trend, "Mistakes"),
        ],
    }


def build_chart_bundle(
    analysis: SessionAnalysis,
    comparison: Optional[MultilevelComparison] = None,
) -> ChartBundle:
    """All five chart series from a finished session analysis."""
    if not analysis.levels:
        raise IncompleteAnalysis("analysis contains no levels")
    comparison = comparison or analysis.comparison
    threshold = analysis.config.params.v_thresh_px_s
    ordered = [analysis.levels[k] for k in sorted(analysis.levels)]
    return ChartBundle(
        timeline={"levels": [_timeline_series(la) for la in ordered]},
        scanpath={"levels": [_scanpath_series(la) for la in ordered]},
        velocity={"levels": [_velocity_series(la, threshold) for la in ordered]},
        dashboard={"levels": [_dashboard_series(la) for la in ordered]},
        multilevel=_multilevel_series(comparison),
    )


def chart_bundle_json(bundle: ChartBundle) -> dict[str, str]:
    """One canonical JSON document per chart id."""
    return {
        chart_id: json.dumps(
            to_jsonable(bundle.chart(chart_id)), sort_keys=True, indent=2
        )
        + "\n"
        for chart_id in CHART_IDS
    }


# ---------------------------------------------------------------------------
# Tables


def _fmt(value: float) -> str:
    if isinstance(value, float) and not math.isfinite(value):
        return ""
    return f"{value:.1f}"


def _level_table(m: LevelMetrics) -> tuple[list[str], list[list[str]]]:
    rts = m.reaction_times_ms
    rows = [
        ["targets_shown", str(m.targets_shown)],
        ["distractors_shown", str(m.distractors_shown)],
        ["matched_pairs", str(m.matched_pairs)],
        ["hit_rate_pct", pct(m.hit_rate)],
        ["correct_clicks", str(m.correct_clicks)],
        ["incorrect_clicks", str(m.incorrect_clicks)],
        ["neutral_clicks", str(m.neutral_clicks)],
        ["false_alarm_rate_pct", pct(m.false_alarm_rate)],
        ["mean_rt_ms", _fmt(m.mean_rt_ms)],
        ["median_rt_ms", _fmt(m.median_rt_ms)],
        ["min_rt_ms", str(min(rts)) if rts else ""],
        ["max_rt_ms", str(max(rts)) if rts else ""],
        ["fixation_rate_pct", pct(m.fixation_rate)],
        ["path_length_px", _fmt(m.spatial.path_length_px)],
        ["screen_utilization_pct", pct(m.spatial.screen_utilization)],
        ["peak_velocity_px_s", _fmt(m.spatial.peak_velocity_px_s)],
        ["mean_velocity_px_s", _fmt(m.spatial.mean_velocity_px_s)],
        ["duration_ms", str(m.duration_ms)],
        ["flags", ";".join(m.flags)],
    ]
    return ["metric", "value"], rows


def _comparison_table(
    comparison: MultilevelComparison,
) -> tuple[list[str], list[list[str]]]:
    header = [
        "level",
        "hit_rate_pct",
        "mean_rt_ms",
        "screen_utilization_pct",
        "mistakes",
    ]
    rows = [
        [
            str(m.level),
            pct(m.hit_rate),
            _fmt(m.mean_rt_ms),
            pct(m.spatial.screen_utilization),
            str(m.incorrect_clicks),
        ]
        for m in comparison.per_level
    ]
    rows.append(
        [
            "trend",
            comparison.hit_rate_trend.direction.value,
            comparison.rt_trend.direction.value,
            comparison.utilization_trend.direction.value,
            comparison.mistakes_trend.direction.value,
        ]
    )
    return header, rows


def _recommendations_table(
    recommendations: Sequence[Recommendation],
) -> tuple[list[str], list[list[str]]]:
    header = [
        "rule_id",
        "severity",
        "level",
        "metric",
        "value",
        "threshold",
        "message",
    ]
    rows = [
        [
            r.rule_id,
            r.severity.value,
            "" if r.evidence.level is None else str(r.evidence.level),
            r.evidence.metric,
            f"{r.evidence.value:.4f}",
            f"{r.evidence.threshold:.4f}",
            r.message,
        ]
        for r in recommendations
    ]
    return header, rows


def _render_csv(header: list[str], rows: list[list[str]]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def _render_json(name: str, header: list[str], rows: list[list[str]]) -> str:
    doc = {"table": name, "columns": header, "rows": rows}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def export_tables(
    metrics: Sequence[LevelMetrics],
    comparison: MultilevelComparison,
    recommendations: Sequence[Recommendation],
    format: str = "csv",
) -> dict[str, str]:
    """The per-level + comparison + recommendations documents.

    Returns name → document text; n levels yield n + 2 documents (three
    levels give the full five-table set).
    """
    if format not in TABLE_FORMATS:
        raise ValueError(f"unknown table format {format!r}; expected {TABLE_FORMATS}")
    tables: dict[str, tuple[list[str], list[list[str]]]] = {}
    for m in sorted(metrics, key=lambda m: m.level):
        tables[f"level_{m.level}"] = _level_table(m)
    tables["comparison"] = _comparison_table(comparison)
    tables["recommendations"] = _recommendations_table(recommendations)
    if format == "csv":
        return {name: _render_csv(*parts) for name, parts in tables.items()}
    return {name: _render_json(name, *parts) for name, parts in tables.items()}
