"""Velocity classification, fixation merging, and spatial measures."""
from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gazekit import (
    GazeSample,
    Movement,
    NoClassifiedSamples,
    NonMonotonicTimestamps,
    classify_ivt,
    fixation_rate,
    merge_fixations,
    spatial_metrics,
    velocities_of,
)

from conftest import samples_from_velocities
from oracles import labels_oracle_mp, path_length_oracle_mp, velocity_oracle_mp


class TestClassifyIVT:
    def test_velocity_formula(self):
        # 3-4-5 triangle over 20 ms: 5 px / 0.02 s = 250 px/s
        samples = [GazeSample(0, 0, 0), GazeSample(20, 3, 4)]
        [_, c] = classify_ivt(samples, 721.0)
        assert c.velocity_px_s == 250.0
        assert c.movement is Movement.FIXATION

    def test_first_sample_unclassified(self):
        samples = samples_from_velocities([100.0, 100.0])
        classified = classify_ivt(samples, 721.0)
        assert classified[0].movement is Movement.UNCLASSIFIED
        assert classified[0].velocity_px_s is None
        assert all(c.movement is not Movement.UNCLASSIFIED for c in classified[1:])

    def test_threshold_boundary_is_fixation(self):
        # exactly 7.21 px in 10 ms = exactly 721.0 px/s (x starts at 0 so
        # the coordinate difference is exact in floating point)
        samples = [GazeSample(0, 0.0, 500.0), GazeSample(10, 7.21, 500.0)]
        [_, c] = classify_ivt(samples, 721.0)
        assert c.velocity_px_s == 721.0
        assert c.movement is Movement.FIXATION

    def test_just_above_threshold_is_saccade(self):
        samples = [GazeSample(0, 0.0, 500.0), GazeSample(10, 7.22, 500.0)]
        [_, c] = classify_ivt(samples, 721.0)
        assert c.movement is Movement.SACCADE

    def test_empty_input(self):
        assert classify_ivt([], 721.0) == []

    def test_single_sample(self):
        classified = classify_ivt([GazeSample(0, 1, 2)], 721.0)
        assert len(classified) == 1
        assert classified[0].movement is Movement.UNCLASSIFIED

    def test_non_monotonic_rejected(self):
        samples = [GazeSample(0, 0, 0), GazeSample(0, 1, 1)]
        with pytest.raises(NonMonotonicTimestamps):
            classify_ivt(samples, 721.0)
        samples = [GazeSample(10, 0, 0), GazeSample(5, 1, 1)]
        with pytest.raises(NonMonotonicTimestamps):
            classify_ivt(samples, 721.0)

    def test_matches_high_precision_oracle(self):
        rng = random.Random(7)
        t, samples = 0, []
        for _ in range(500):
            t += rng.randint(1, 40)
            samples.append(GazeSample(t, rng.uniform(0, 1920), rng.uniform(0, 1080)))
        classified = classify_ivt(samples, 721.0)
        expected_labels = labels_oracle_mp(samples, 721.0)
        assert [c.movement.value for c in classified] == expected_labels
        for c, v_mp in zip(classified[1:], velocity_oracle_mp(samples)[1:]):
            assert abs(c.velocity_px_s - float(v_mp)) <= 1e-9 * float(v_mp)

    def test_timestamp_shift_changes_nothing(self):
        rng = random.Random(3)
        velocities = [rng.uniform(1, 3000) for _ in range(200)]
        base = samples_from_velocities(velocities)
        shifted = [GazeSample(s.timestamp_ms + 123_456, s.x_px, s.y_px) for s in base]
        a = classify_ivt(base, 721.0)
        b = classify_ivt(shifted, 721.0)
        assert [c.movement for c in a] == [c.movement for c in b]
        assert velocities_of(a) == velocities_of(b)  # bit-identical


@settings(max_examples=150, deadline=None)
@given(
    st.lists(
        st.one_of(st.floats(1.0, 700.0), st.floats(722.0, 40_000.0)),
        min_size=1,
        max_size=80,
    ),
    st.floats(0.01, 100.0),
)
def test_scaling_property(velocities, k):
    """Scaling coordinates by k scales velocities by k (1e-9 relative) and
    preserves labels against a k-scaled threshold."""
    base = samples_from_velocities(velocities)
    scaled = [GazeSample(s.timestamp_ms, s.x_px * k, s.y_px * k) for s in base]
    a = classify_ivt(base, 721.0)
    b = classify_ivt(scaled, 721.0 * k)
    assert [c.movement for c in a] == [c.movement for c in b]
    for ca, cb in zip(a[1:], b[1:]):
        assert math.isclose(cb.velocity_px_s, ca.velocity_px_s * k, rel_tol=1e-9)


class TestMergeFixations:
    def test_runs_collapse(self):
        classified = classify_ivt(
            samples_from_velocities([100, 100, 5000, 100, 100, 100]), 721.0
        )
        events = merge_fixations(classified)
        assert len(events) == 2
        # the first sample is unclassified, so the leading run has 2 samples
        assert events[0].sample_count == 2
        assert events[1].sample_count == 3

    def test_sample_counts_and_durations(self):
        classified = classify_ivt(samples_from_velocities([100, 100, 100]), 721.0)
        [event] = merge_fixations(classified)
        assert event.start_ms == 10 and event.end_ms == 30
        assert event.duration_ms == 20

    def test_min_duration_filter(self):
        classified = classify_ivt(
            samples_from_velocities([100, 5000, 100, 100, 100]), 721.0
        )
        assert len(merge_fixations(classified, min_duration_ms=0)) == 2
        kept = merge_fixations(classified, min_duration_ms=15)
        assert len(kept) == 1 and kept[0].sample_count == 3

    def test_centroid(self):
        samples = [GazeSample(0, 0, 0), GazeSample(10, 2, 2), GazeSample(20, 4, 0)]
        classified = classify_ivt(samples, 1e9)
        [event] = merge_fixations(classified)
        assert event.centroid_px == (3.0, 1.0)  # first sample is unclassified

    def test_no_fixations(self):
        classified = classify_ivt(samples_from_velocities([5000, 5000]), 721.0)
        assert merge_fixations(classified) == []


class TestFixationRate:
    def test_rate_over_classified_only(self):
        velocities = [100.0] * 149 + [5000.0] * 18
        classified = classify_ivt(samples_from_velocities(velocities), 721.0)
        rate = fixation_rate(classified)
        assert rate == 149 / 167
        assert f"{rate * 100:.1f}" == "89.2"

    def test_needs_classified_samples(self):
        with pytest.raises(NoClassifiedSamples):
            fixation_rate(classify_ivt([GazeSample(0, 1, 1)], 721.0))


class TestSpatialMetrics:
    def test_path_length(self):
        samples = [GazeSample(0, 0, 0), GazeSample(10, 3, 4), GazeSample(20, 3, 14)]
        m = spatial_metrics(samples, [], 1920, 1080)
        assert m.path_length_px == 15.0

    def test_utilization_counts_occupied_cells(self):
        # 1920/20 = 96 px cells; three samples in two distinct cells
        samples = [GazeSample(0, 10, 10), GazeSample(10, 20, 20), GazeSample(20, 200, 200)]
        m = spatial_metrics(samples, [], 1920, 1080)
        assert m.screen_utilization == 2 / 400
        assert sum(sum(row) for row in m.heatmap) == 3

    def test_heatmap_excludes_out_of_bounds(self):
        samples = [GazeSample(0, 10, 10), GazeSample(10, 1950.0, 10)]
        m = spatial_metrics(samples, [], 1920, 1080)
        assert sum(sum(row) for row in m.heatmap) == 1

    def test_right_bottom_edges_clamp_into_last_cell(self):
        samples = [GazeSample(0, 1920.0, 1080.0)]
        m = spatial_metrics(samples, [], 1920, 1080)
        assert m.heatmap[19][19] == 1

    def test_velocity_extremes(self):
        m = spatial_metrics([GazeSample(0, 1, 1)], [10.0, 30.0, 20.0], 1920, 1080)
        assert m.peak_velocity_px_s == 30.0
        assert m.mean_velocity_px_s == 20.0

    def test_empty_velocities(self):
        m = spatial_metrics([GazeSample(0, 1, 1)], [], 1920, 1080)
        assert m.peak_velocity_px_s == 0.0 and m.mean_velocity_px_s == 0.0

    def test_needs_samples(self):
        with pytest.raises(ValueError):
            spatial_metrics([], [], 1920, 1080)

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            spatial_metrics([GazeSample(0, 1, 1)], [], 1920, 1080, grid_cols=0)

    def test_path_length_against_oracle(self):
        rng = random.Random(11)
        samples = [
            GazeSample(i * 10, rng.uniform(0, 1920), rng.uniform(0, 1080))
            for i in range(300)
        ]
        m = spatial_metrics(samples, [], 1920, 1080)
        expected = float(path_length_oracle_mp(samples))
        assert math.isclose(m.path_length_px, expected, rel_tol=1e-9)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.tuples(st.floats(0, 1920), st.floats(0, 1080)),
        min_size=1,
        max_size=50,
    )
)
def test_heatmap_total_equals_inbounds_count(points):
    samples = [GazeSample(i * 10, x, y) for i, (x, y) in enumerate(points)]
    m = spatial_metrics(samples, [], 1920, 1080)
    assert sum(sum(row) for row in m.heatmap) == len(samples)
    occupied = sum(1 for row in m.heatmap for c in row if c > 0)
    assert m.screen_utilization == occupied / 400
    assert 0.0 <= m.screen_utilization <= 1.0
