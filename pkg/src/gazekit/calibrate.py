"""Data-driven parameter calibration.

Derives a velocity threshold from the empirical gaze-velocity
distribution (percentile after outlier trimming), a reaction-time window
from observed responses, and retention curves over bounds tolerances.
Calibration output is advisory: analyses always run with the explicit
AnalysisParams the caller supplies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .errors import EmptyAfterOutlierRemoval, NonMonotonicTimestamps, TooFewSamples
from .ingest import filter_bounds
from .types import (
    CalibrationReport,
    ClickLabel,
    GazeSample,
    SessionRecord,
    TARGET_TYPES,
)

REPORT_PERCENTILES = (5.0, 10.0, 25.0, 50.0, 75.0, 90.0, 95.0, 99.0)
DEFAULT_RT_WINDOW = (522, 5000)


class VelocityDistribution(NamedTuple):
    velocities: list[float]
    nonfinite_excluded: int


@dataclass
class ThresholdCalibration:
    """Velocity-threshold fragment of a CalibrationReport."""

    chosen_threshold_px_s: float
    fixation_fraction_at_threshold: float
    velocity_percentiles: dict[float, float]
    outlier_cut_px_s: float
    n_used: int
    n_trimmed: int


def velocity_distribution(samples: Sequence[GazeSample]) -> VelocityDistribution:
    """Point-to-point velocities (px/s) between consecutive samples.

    Requires at least two samples with strictly increasing timestamps.
    """
    if len(samples) < 2:
        raise TooFewSamples(f"need >= 2 samples for velocities, got {len(samples)}")
    velocities: list[float] = []
    excluded = 0
    prev = samples[0]
    for sample in samples[1:]:
        dt_ms = sample.timestamp_ms - prev.timestamp_ms
        if dt_ms <= 0:
            raise NonMonotonicTimestamps(
                f"timestamps must be strictly increasing (dt={dt_ms} ms at "
                f"t={sample.timestamp_ms})"
            )
        v = math.hypot(sample.x_px - prev.x_px, sample.y_px - prev.y_px) / (dt_ms / 1000.0)
        if math.isfinite(v):
            velocities.append(v)
        else:
            excluded += 1
        prev = sample
    return VelocityDistribution(velocities, excluded)


def linear_quantile(values: Sequence[float], percentile: float) -> float:
    """Percentile with linear interpolation between closest ranks."""
    if not 0.0 <= percentile <= 100.0:
        raise ValueError("percentile must be in [0, 100]")
    if len(values) == 0:
        raise ValueError("cannot take a percentile of no values")
    return float(np.percentile(np.asarray(values, dtype=float), percentile))


def calibrate_velocity_threshold(
    velocities: Sequence[float],
    percentile: float = 75.0,
    outlier_cut_percentile: float = 99.5,
) -> ThresholdCalibration:
    """Choose the fixation/saccade cutoff from the velocity distribution.

    Velocities above the outlier-cut percentile (and non-finite values)
    are discarded, then the requested percentile of the trimmed set is the
    threshold. Pass outlier_cut_percentile=100 to disable trimming.
    """
    if not 0.0 < percentile < 100.0:
        raise ValueError("percentile must be in (0, 100)")
    if not 0.0 < outlier_cut_percentile <= 100.0:
        raise ValueError("outlier_cut_percentile must be in (0, 100]")
    finite = [v for v in velocities if math.isfinite(v)]
    if not finite:
        raise EmptyAfterOutlierRemoval("no finite velocities to calibrate from")
    cut = linear_quantile(finite, outlier_cut_percentile)
    trimmed = [v for v in finite if v <= cut]
    if not trimmed:
        raise EmptyAfterOutlierRemoval("outlier trim removed every velocity")
    threshold = linear_quantile(trimmed, percentile)
    fixation_fraction = sum(1 for v in trimmed if v <= threshold) / len(trimmed)
    return ThresholdCalibration(
        chosen_threshold_px_s=threshold,
        fixation_fraction_at_threshold=fixation_fraction,
        velocity_percentiles={p: linear_quantile(trimmed, p) for p in REPORT_PERCENTILES},
        outlier_cut_px_s=cut,
        n_used=len(trimmed),
        n_trimmed=len(finite) - len(trimmed),
    )


def calibrate_rt_window(
    matched_rts_ms: Sequence[int],
    low_pct: float = 2.5,
    high_pct: float = 97.5,
    hard_cap_ms: int = 5000,
) -> tuple[int, int]:
    """Reaction-time window from the empirical response distribution.

    Falls back to the validated defaults (522, 5000) when fewer than 10
    responses are available or the percentiles collapse.
    """
    if len(matched_rts_ms) < 10:
        return DEFAULT_RT_WINDOW
    rt_min = int(round(linear_quantile(matched_rts_ms, low_pct)))
    rt_max = min(int(round(linear_quantile(matched_rts_ms, high_pct))), hard_cap_ms)
    if not 0 < rt_min < rt_max:
        return DEFAULT_RT_WINDOW
    return rt_min, rt_max


def tolerance_sweep(
    samples: Sequence[GazeSample],
    screen_w: int,
    screen_h: int,
    tolerances: Sequence[float],
) -> dict[float, float]:
    """Fraction of samples retained by filter_bounds at each tolerance."""
    if not samples:
        raise TooFewSamples("tolerance_sweep needs at least one sample")
    retention: dict[float, float] = {}
    for tol in tolerances:
        kept, _ = filter_bounds(samples, screen_w, screen_h, tol)
        retention[float(tol)] = len(kept) / len(samples)
    return retention


def velocity_histogram(
    velocities: Sequence[float],
    bins: int = 60,
    clip_percentile: float = 99.5,
) -> tuple[list[float], list[int]]:
    """Histogram series (bin edges + counts) clipped at the outlier cut."""
    finite = [v for v in velocities if math.isfinite(v)]
    if not finite:
        return [], []
    cut = linear_quantile(finite, clip_percentile)
    clipped = [v for v in finite if v <= cut]
    hi = max(cut, 1e-9)
    counts, edges = np.histogram(np.asarray(clipped), bins=bins, range=(0.0, hi))
    return [float(e) for e in edges], [int(c) for c in counts]


def build_calibration_report(
    records: Mapping[int, SessionRecord],
    percentile: float = 75.0,
    outlier_cut_percentile: float = 99.5,
    tolerances: Sequence[float] = (0.0, 25.0, 50.0, 75.0, 100.0),
    raw_samples: Sequence[GazeSample] | None = None,
) -> CalibrationReport:
    """Full calibration over one or more levels.

    The headline threshold pools all levels' velocities; per-level
    thresholds are reported alongside so both views are available. The
    reaction-time window is derived from responses matched with a wide-open
    window so the empirical distribution is observed unconstrained.

    The retention sweep runs over ``raw_samples`` when given (samples
    ingested with an effectively unlimited tolerance), otherwise over the
    records' already-cleaned samples, where it only shows the margin above
    the ingest tolerance.
    """
    from .events import build_timeline, match_responses

    pooled: list[float] = []
    per_level: dict[int, float] = {}
    all_rts: list[int] = []
    all_samples: list[GazeSample] = []
    screen = None
    for level in sorted(records):
        record = records[level]
        screen = (record.screen_w, record.screen_h)
        all_samples.extend(record.samples)
        if len(record.samples) >= 2:
            dist = velocity_distribution(record.samples)
            pooled.extend(dist.velocities)
            try:
                per_level[level] = calibrate_velocity_threshold(
                    dist.velocities, percentile, outlier_cut_percentile
                ).chosen_threshold_px_s
            except EmptyAfterOutlierRemoval:
                pass
        timeline = build_timeline(record.events)
        targets = [ep for ep in timeline.episodes if ep.object_type in TARGET_TYPES]
        clicks = [c for c in timeline.clicks if c.click_label is ClickLabel.CORRECT]
        wide = match_responses(targets, clicks, rt_min=1, rt_max=10 * 60 * 1000)
        all_rts.extend(m.reaction_ms for m in wide)

    fragment = calibrate_velocity_threshold(pooled, percentile, outlier_cut_percentile)
    edges, counts = velocity_histogram(pooled, clip_percentile=outlier_cut_percentile)
    sweep_samples = list(raw_samples) if raw_samples is not None else all_samples
    retention: dict[float, float] = {}
    if screen is not None and sweep_samples:
        retention = tolerance_sweep(sweep_samples, screen[0], screen[1], tolerances)
    return CalibrationReport(
        velocity_percentiles=fragment.velocity_percentiles,
        chosen_threshold_px_s=fragment.chosen_threshold_px_s,
        fixation_fraction_at_threshold=fragment.fixation_fraction_at_threshold,
        rt_window_ms=calibrate_rt_window(all_rts),
        retention_by_tolerance=retention,
        per_level_thresholds=per_level,
        histogram_bin_edges=edges,
        histogram_counts=counts,
    )
