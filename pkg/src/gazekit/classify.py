"""Velocity-threshold (I-VT) gaze classification and spatial measures.

Each sample after the first gets a point-to-point velocity

    v = sqrt(dx^2 + dy^2) / (dt_ms / 1000)

in px/s and is labelled fixation when v <= threshold, saccade otherwise.
The comparison is inclusive on the fixation side: a sample at exactly the
threshold is a fixation. The first sample has no predecessor and stays
unclassified; no smoothing is applied.
"""
from __future__ import annotations

import math
from typing import Optional, Sequence

from .errors import NoClassifiedSamples, NonMonotonicTimestamps
from .types import ClassifiedSample, FixationEvent, GazeSample, Movement, SpatialMetrics


def classify_ivt(
    samples: Sequence[GazeSample], v_thresh_px_s: float
) -> list[ClassifiedSample]:
    """Label samples fixation/saccade by point-to-point velocity."""
    if not samples:
        return []
    classified = [ClassifiedSample(samples[0], None, Movement.UNCLASSIFIED)]
    prev = samples[0]
    for sample in samples[1:]:
        dt_ms = sample.timestamp_ms - prev.timestamp_ms
        if dt_ms <= 0:
            raise NonMonotonicTimestamps(
                f"dt={dt_ms} ms at t={sample.timestamp_ms}; timestamps must "
                "be strictly increasing"
            )
        velocity = math.hypot(sample.x_px - prev.x_px, sample.y_px - prev.y_px) / (
            dt_ms / 1000.0
        )
        movement = Movement.FIXATION if velocity <= v_thresh_px_s else Movement.SACCADE
        classified.append(ClassifiedSample(sample, velocity, movement))
        prev = sample
    return classified


def merge_fixations(
    classified: Sequence[ClassifiedSample], min_duration_ms: int = 0
) -> list[FixationEvent]:
    """Collapse maximal runs of fixation samples into fixation events.

    Events shorter than min_duration_ms are discarded; a single-sample run
    has duration 0 and survives only when min_duration_ms is 0.
    """
    events: list[FixationEvent] = []
    run: list[GazeSample] = []
    for item in classified:
        if item.movement is Movement.FIXATION:
            run.append(item.sample)
        elif run:
            events.append(_run_to_event(run))
            run = []
    if run:
        events.append(_run_to_event(run))
    return [e for e in events if e.duration_ms >= min_duration_ms]


def _run_to_event(run: list[GazeSample]) -> FixationEvent:
    cx = sum(s.x_px for s in run) / len(run)
    cy = sum(s.y_px for s in run) / len(run)
    return FixationEvent(
        start_ms=run[0].timestamp_ms,
        end_ms=run[-1].timestamp_ms,
        duration_ms=run[-1].timestamp_ms - run[0].timestamp_ms,
        centroid_px=(cx, cy),
        sample_count=len(run),
    )


def fixation_rate(classified: Sequence[ClassifiedSample]) -> float:
    """Fraction of classified (non-first) samples labelled fixation."""
    labelled = [c for c in classified if c.movement is not Movement.UNCLASSIFIED]
    if not labelled:
        raise NoClassifiedSamples("no classified samples to rate")
    fixations = sum(1 for c in labelled if c.movement is Movement.FIXATION)
    return fixations / len(labelled)


def velocities_of(classified: Sequence[ClassifiedSample]) -> list[float]:
    """The defined (non-first) velocities from a classified sequence."""
    return [c.velocity_px_s for c in classified if c.velocity_px_s is not None]


def spatial_metrics(
    samples: Sequence[GazeSample],
    velocities: Sequence[float],
    screen_w: int,
    screen_h: int,
    grid_cols: int = 20,
    grid_rows: int = 20,
) -> SpatialMetrics:
    """Path length, grid heatmap, utilization, and velocity extremes.

    The heatmap counts only samples inside the screen rectangle (samples
    kept by a non-zero bounds tolerance can sit slightly outside); the
    right/bottom screen edge is clamped into the last cell. Utilization is
    the fraction of grid cells visited at least once.
    """
    if not samples:
        raise ValueError("spatial_metrics needs at least one sample")
    if grid_cols < 1 or grid_rows < 1:
        raise ValueError("grid dimensions must be >= 1")
    path_length = 0.0
    prev: Optional[GazeSample] = None
    for sample in samples:
        if prev is not None:
            path_length += math.hypot(sample.x_px - prev.x_px, sample.y_px - prev.y_px)
        prev = sample

    heatmap = [[0] * grid_cols for _ in range(grid_rows)]
    cell_w = screen_w / grid_cols
    cell_h = screen_h / grid_rows
    for sample in samples:
        if 0.0 <= sample.x_px <= screen_w and 0.0 <= sample.y_px <= screen_h:
            col = min(int(sample.x_px // cell_w), grid_cols - 1)
            row = min(int(sample.y_px // cell_h), grid_rows - 1)
            heatmap[row][col] += 1

    occupied = sum(1 for row in heatmap for count in row if count > 0)
    utilization = occupied / (grid_cols * grid_rows)
    peak = max(velocities, default=0.0)
    mean = sum(velocities) / len(velocities) if velocities else 0.0
    return SpatialMetrics(
        path_length_px=path_length,
        screen_utilization=utilization,
        heatmap=heatmap,
        peak_velocity_px_s=peak,
        mean_velocity_px_s=mean,
    )
