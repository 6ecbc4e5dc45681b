"""Per-level performance metrics, cross-level trends, and recommendations.

hit_rate divides matched pairs by targets shown; false_alarm_rate divides
incorrect clicks by distractors shown (mistakes are judged against the
distractors that invited them, not against total clicks). Neutral clicks
count toward neither rate. Guarded divisions yield 0 plus a flag instead
of NaN. Trend labels take metric polarity into account — a falling
reaction time improves, a falling hit rate declines — and any step whose
relative change is smaller than the flat threshold is flat.

Recommendation thresholds are engine defaults for flagging, not clinical
cutoffs; they live in :class:`~gazekit.config.RuleTable` so studies can
edit them.
"""
from __future__ import annotations

import math
from statistics import median
from typing import Sequence

from .classify import velocities_of, spatial_metrics
from .config import AnalysisParams, RuleTable
from .errors import EmptySession
from .events import build_timeline
from .types import (
    ClassifiedSample,
    ClickLabel,
    DISTRACTOR_TYPES,
    Evidence,
    LevelMetrics,
    MatchedResponse,
    Movement,
    MultilevelComparison,
    Recommendation,
    SessionRecord,
    Severity,
    TARGET_TYPES,
    Trend,
    TrendSeries,
)


def level_metrics(
    session: SessionRecord,
    classified: Sequence[ClassifiedSample],
    matches: Sequence[MatchedResponse],
    params: AnalysisParams,
) -> LevelMetrics:
    """Assemble one level's performance numbers from its analyzed parts."""
    if not session.samples and not session.events:
        raise EmptySession(
            f"level {session.level} has no samples and no events to score"
        )
    flags: list[str] = []
    timeline = build_timeline(session.events)
    targets = sum(1 for ep in timeline.episodes if ep.object_type in TARGET_TYPES)
    distractors = sum(
        1 for ep in timeline.episodes if ep.object_type in DISTRACTOR_TYPES
    )
    correct = incorrect = neutral = 0
    for click in timeline.clicks:
        if click.click_label is ClickLabel.CORRECT:
            correct += 1
        elif click.click_label is ClickLabel.INCORRECT:
            incorrect += 1
        else:
            neutral += 1

    if targets:
        hit_rate = len(matches) / targets
    else:
        hit_rate = 0.0
        flags.append("no_targets")
    if distractors:
        false_alarm = incorrect / distractors
    else:
        false_alarm = 0.0
        flags.append("no_distractors")

    rts = [m.reaction_ms for m in matches]
    if rts:
        mean_rt = sum(rts) / len(rts)
        median_rt = float(median(rts))
    else:
        mean_rt = median_rt = 0.0
        flags.append("no_matched_pairs")

    labelled = [c for c in classified if c.movement is not Movement.UNCLASSIFIED]
    if labelled:
        fixation = sum(
            1 for c in labelled if c.movement is Movement.FIXATION
        ) / len(labelled)
    else:
        fixation = 0.0
        flags.append("no_classified_samples")

    spatial = spatial_metrics(
        session.samples,
        velocities_of(classified),
        session.screen_w,
        session.screen_h,
        params.grid_cols,
        params.grid_rows,
    )
    last_sample = session.samples[-1].timestamp_ms if session.samples else 0
    last_event = max((e.timestamp_ms for e in session.events), default=0)
    return LevelMetrics(
        level=session.level,
        targets_shown=targets,
        distractors_shown=distractors,
        matched_pairs=len(matches),
        hit_rate=hit_rate,
        correct_clicks=correct,
        incorrect_clicks=incorrect,
        neutral_clicks=neutral,
        false_alarm_rate=false_alarm,
        reaction_times_ms=rts,
        mean_rt_ms=mean_rt,
        median_rt_ms=median_rt,
        spatial=spatial,
        fixation_rate=fixation,
        duration_ms=max(last_sample, last_event),
        flags=flags,
    )


def _relative_delta(a: float, b: float) -> float:
    if a == 0:
        return 0.0 if b == 0 else math.copysign(math.inf, b - a)
    return (b - a) / abs(a)


def _qualify(delta: float, higher_is_better: bool, flat_threshold: float) -> Trend:
    if abs(delta) < flat_threshold:
        return Trend.FLAT
    improving = delta > 0 if higher_is_better else delta < 0
    return Trend.IMPROVING if improving else Trend.DECLINING


def _trend(
    metric: str,
    values: list[float],
    higher_is_better: bool,
    flat_threshold: float,
) -> TrendSeries:
    deltas = [
        _relative_delta(values[i], values[i + 1]) for i in range(len(values) - 1)
    ]
    steps = [_qualify(d, higher_is_better, flat_threshold) for d in deltas]
    if len(values) < 2:
        direction = Trend.FLAT
    else:
        direction = _qualify(
            _relative_delta(values[0], values[-1]), higher_is_better, flat_threshold
        )
    return TrendSeries(metric, values, deltas, steps, direction)


def compare_levels(
    metrics: Sequence[LevelMetrics], flat_threshold: float = 0.05
) -> MultilevelComparison:
    """Cross-level trends for hit rate, reaction time, coverage, mistakes.

    Input order does not matter; levels are sorted by number internally.
    With a single level every trend is flat and all delta lists are empty.
    """
    if not metrics:
        raise ValueError("compare_levels needs at least one level")
    ordered = sorted(metrics, key=lambda m: m.level)
    return MultilevelComparison(
        per_level=ordered,
        hit_rate_trend=_trend(
            "hit_rate", [m.hit_rate for m in ordered], True, flat_threshold
        ),
        rt_trend=_trend(
            "mean_rt_ms", [m.mean_rt_ms for m in ordered], False, flat_threshold
        ),
        utilization_trend=_trend(
            "screen_utilization",
            [m.spatial.screen_utilization for m in ordered],
            True,
            flat_threshold,
        ),
        mistakes_trend=_trend(
            "incorrect_clicks",
            [float(m.incorrect_clicks) for m in ordered],
            False,
            flat_threshold,
        ),
    )


def recommend(
    comparison: MultilevelComparison, rules: RuleTable | None = None
) -> list[Recommendation]:
    """Evaluate the threshold rules; empty list when nothing fires.

    Deterministic: rules run in a fixed order and levels ascend, so the
    same comparison always yields the same list.
    """
    rules = rules or RuleTable()
    recs: list[Recommendation] = []
    for m in comparison.per_level:
        if m.targets_shown and m.hit_rate < rules.min_hit_rate:
            recs.append(
                Recommendation(
                    rule_id="attention-support",
                    severity=Severity.ALERT,
                    message=(
                        f"Hit rate {m.hit_rate:.1%} on level {m.level} is below "
                        f"the {rules.min_hit_rate:.0%} floor; targeted "
                        "attention-support practice is advised."
                    ),
                    evidence=Evidence(
                        "hit_rate", m.hit_rate, rules.min_hit_rate, "<", m.level
                    ),
                )
            )
    for m in comparison.per_level:
        if m.matched_pairs and m.mean_rt_ms > rules.max_mean_rt_ms:
            recs.append(
                Recommendation(
                    rule_id="processing-speed",
                    severity=Severity.ATTENTION,
                    message=(
                        f"Mean reaction time {m.mean_rt_ms:.0f} ms on level "
                        f"{m.level} exceeds {rules.max_mean_rt_ms:.0f} ms; "
                        "responses are slower than expected."
                    ),
                    evidence=Evidence(
                        "mean_rt_ms", m.mean_rt_ms, rules.max_mean_rt_ms, ">", m.level
                    ),
                )
            )
    for m in comparison.per_level:
        if m.distractors_shown and m.false_alarm_rate > rules.max_false_alarm_rate:
            recs.append(
                Recommendation(
                    rule_id="impulse-control",
                    severity=Severity.ATTENTION,
                    message=(
                        f"False-alarm rate {m.false_alarm_rate:.1%} on level "
                        f"{m.level} exceeds {rules.max_false_alarm_rate:.0%}; "
                        "clicks on distractors suggest impulse-control "
                        "difficulty."
                    ),
                    evidence=Evidence(
                        "false_alarm_rate",
                        m.false_alarm_rate,
                        rules.max_false_alarm_rate,
                        ">",
                        m.level,
                    ),
                )
            )

    rt_deltas = comparison.rt_trend.deltas
    if rt_deltas and math.isfinite(rt_deltas[-1]):
        increase = rt_deltas[-1]
        if increase > rules.fatigue_rt_increase:
            final = comparison.per_level[-1]
            recs.append(
                Recommendation(
                    rule_id="fatigue-break",
                    severity=Severity.ATTENTION,
                    message=(
                        f"Mean reaction time rose {increase:.1%} going into the "
                        f"final level (level {final.level}); schedule a break "
                        "before performance declines further."
                    ),
                    evidence=Evidence(
                        "rt_relative_increase_final_level",
                        increase,
                        rules.fatigue_rt_increase,
                        ">",
                        final.level,
                    ),
                )
            )

    util = comparison.utilization_trend.values
    if len(util) >= 2 and util[0] > 0:
        drop = (util[0] - util[-1]) / util[0]
        if drop > rules.utilization_drop:
            recs.append(
                Recommendation(
                    rule_id="focus-narrowing",
                    severity=Severity.INFO,
                    message=(
                        f"Screen utilization dropped {drop:.1%} between the "
                        "first and last level; gaze coverage is narrowing to "
                        "a smaller region."
                    ),
                    evidence=Evidence(
                        "utilization_relative_drop",
                        drop,
                        rules.utilization_drop,
                        ">",
                        comparison.per_level[-1].level,
                    ),
                )
            )
    return recs
