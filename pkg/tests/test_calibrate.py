"""Data-driven calibration: thresholds, RT windows, retention sweeps."""
from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gazekit import (
    EmptyAfterOutlierRemoval,
    GazeSample,
    NonMonotonicTimestamps,
    SessionRecord,
    TooFewSamples,
    build_calibration_report,
    calibrate_rt_window,
    calibrate_velocity_threshold,
    linear_quantile,
    tolerance_sweep,
    velocity_distribution,
    velocity_histogram,
)

from conftest import appear, click, disappear, samples_from_velocities
from oracles import quantile_oracle


class TestLinearQuantile:
    def test_closed_forms(self):
        values = list(range(1, 1001))  # 1..1000
        assert linear_quantile(values, 75.0) == pytest.approx(750.25)
        assert linear_quantile(values, 50.0) == pytest.approx(500.5)
        assert linear_quantile(values, 0.0) == 1.0
        assert linear_quantile(values, 100.0) == 1000.0

    def test_two_points_interpolates(self):
        assert linear_quantile([10.0, 20.0], 50.0) == pytest.approx(15.0)
        assert linear_quantile([10.0, 20.0], 25.0) == pytest.approx(12.5)

    def test_matches_reference_implementation(self):
        rng = random.Random(11)
        for _ in range(200):
            n = rng.randint(1, 60)
            values = [rng.uniform(-1000, 1000) for _ in range(n)]
            p = rng.uniform(0, 100)
            assert linear_quantile(values, p) == pytest.approx(
                quantile_oracle(values, p), rel=1e-12, abs=1e-9
            )

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            linear_quantile([], 50.0)
        with pytest.raises(ValueError):
            linear_quantile([1.0], 101.0)


@settings(max_examples=150, deadline=None)
@given(
    st.lists(
        st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
        min_size=1,
        max_size=50,
    ),
    st.floats(min_value=0.0, max_value=100.0),
)
def test_quantile_within_data_range(values, p):
    q = linear_quantile(values, p)
    assert min(values) <= q <= max(values)


class TestVelocityDistribution:
    def test_counts_and_values(self):
        samples = samples_from_velocities([100.0, 200.0, 300.0])
        dist = velocity_distribution(samples)
        assert dist.velocities == pytest.approx([100.0, 200.0, 300.0])
        assert dist.nonfinite_excluded == 0

    def test_non_monotonic_raises(self):
        samples = [GazeSample(0, 0, 0), GazeSample(0, 1, 1)]
        with pytest.raises(NonMonotonicTimestamps):
            velocity_distribution(samples)

    def test_too_few(self):
        with pytest.raises(TooFewSamples):
            velocity_distribution([GazeSample(0, 0, 0)])


class TestCalibrateThreshold:
    def test_percentile_and_fixation_fraction(self):
        velocities = [float(v) for v in range(1, 101)]  # 1..100, no outliers
        cal = calibrate_velocity_threshold(
            velocities, percentile=75.0, outlier_cut_percentile=100.0
        )
        assert cal.chosen_threshold_px_s == pytest.approx(
            quantile_oracle(velocities, 75.0)
        )
        # by construction at least 75% of velocities sit at or below the cut
        assert cal.fixation_fraction_at_threshold >= 0.75
        assert cal.n_trimmed == 0
        assert cal.n_used == 100

    def test_outlier_trim_removes_tail(self):
        velocities = [100.0] * 999 + [1e9]
        cal = calibrate_velocity_threshold(velocities, outlier_cut_percentile=99.5)
        assert cal.n_trimmed == 1
        assert cal.chosen_threshold_px_s == 100.0

    def test_nonfinite_ignored(self):
        velocities = [100.0, 200.0, math.inf, math.nan, 300.0]
        cal = calibrate_velocity_threshold(velocities, outlier_cut_percentile=100.0)
        assert cal.n_used == 3

    def test_empty_raises(self):
        with pytest.raises(EmptyAfterOutlierRemoval):
            calibrate_velocity_threshold([math.inf])
        with pytest.raises(ValueError):
            calibrate_velocity_threshold([1.0], percentile=0.0)

    def test_reported_percentiles_cover_ladder(self):
        cal = calibrate_velocity_threshold(
            [float(v) for v in range(200)], outlier_cut_percentile=100.0
        )
        assert set(cal.velocity_percentiles) == {
            5.0, 10.0, 25.0, 50.0, 75.0, 90.0, 95.0, 99.0,
        }
        ladder = [cal.velocity_percentiles[p] for p in sorted(cal.velocity_percentiles)]
        assert ladder == sorted(ladder)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.floats(min_value=0.0, max_value=5000.0, allow_nan=False),
        min_size=4,
        max_size=80,
    )
)
def test_fixation_fraction_lower_bound(velocities):
    # with linear interpolation the value at percentile p sits at rank
    # 1 + p(n-1)/100, so at least floor() of that many points lie at or
    # below it; the fraction approaches p/100 from either side as n grows
    cal = calibrate_velocity_threshold(velocities, percentile=75.0)
    n = cal.n_used
    at_or_below = round(cal.fixation_fraction_at_threshold * n)
    assert at_or_below >= math.floor(1 + 0.75 * (n - 1))


class TestRtWindow:
    def test_fallback_below_ten_responses(self):
        assert calibrate_rt_window([700] * 9) == (522, 5000)
        assert calibrate_rt_window([]) == (522, 5000)

    def test_empirical_window(self):
        rts = list(range(600, 1600, 10))  # 100 responses
        lo, hi = calibrate_rt_window(rts)
        assert lo == round(quantile_oracle(rts, 2.5))
        assert hi == round(quantile_oracle(rts, 97.5))
        assert 600 <= lo < hi <= 1590

    def test_hard_cap(self):
        rts = [100_000 + i for i in range(50)]
        lo, hi = calibrate_rt_window(rts)
        assert hi == 5000 or (lo, hi) == (522, 5000)

    def test_degenerate_distribution_falls_back(self):
        # all-identical RTs collapse the percentiles -> defaults
        assert calibrate_rt_window([700] * 50) == (522, 5000)


class TestToleranceSweep:
    def test_monotone_retention(self):
        samples = [
            GazeSample(i * 10, -5.0 + i * 3, 540.0) for i in range(40)
        ]  # some slightly off-screen on the left
        sweep = tolerance_sweep(samples, 1920, 1080, (0.0, 25.0, 50.0))
        assert sweep[0.0] <= sweep[25.0] <= sweep[50.0]
        assert sweep[50.0] == 1.0

    def test_exact_fractions(self):
        samples = [GazeSample(0, -30.0, 10.0), GazeSample(10, 100.0, 10.0)]
        sweep = tolerance_sweep(samples, 1920, 1080, (0.0, 30.0))
        assert sweep[0.0] == 0.5
        assert sweep[30.0] == 1.0

    def test_empty_raises(self):
        with pytest.raises(TooFewSamples):
            tolerance_sweep([], 1920, 1080, (0.0,))


class TestVelocityHistogram:
    def test_counts_sum_to_clipped_population(self):
        velocities = [float(v) for v in range(100)] + [1e8]
        edges, counts = velocity_histogram(velocities, bins=10)
        assert sum(counts) == 100  # the 1e8 outlier is clipped away
        assert len(edges) == 11
        assert edges == sorted(edges)

    def test_empty(self):
        assert velocity_histogram([]) == ([], [])


def _record(level, samples, events):
    return SessionRecord(
        student_id="s1",
        level=level,
        screen_w=1920,
        screen_h=1080,
        samples=samples,
        events=events,
        rows_total=len(samples) + len(events),
        rows_dropped=0,
    )


class TestBuildCalibrationReport:
    def _records(self):
        rng = random.Random(3)
        records = {}
        for level in (1, 2):
            velocities = [rng.uniform(10, 600) for _ in range(400)]
            samples = samples_from_velocities(velocities)
            events = []
            for i in range(12):
                t0 = 1000 + i * 6000
                events.append(appear(t0, f"m{i}"))
                events.append(disappear(t0 + 800, f"m{i}"))
                events.append(click(t0 + 650 + 10 * i, line=500 + i))
            records[level] = _record(level, samples, events)
        return records

    def test_report_fields(self):
        report = build_calibration_report(self._records())
        assert report.chosen_threshold_px_s > 0
        assert report.fixation_fraction_at_threshold >= 0.75
        assert set(report.per_level_thresholds) == {1, 2}
        assert sum(report.histogram_counts) > 0
        assert set(report.retention_by_tolerance) == {0.0, 25.0, 50.0, 75.0, 100.0}
        lo, hi = report.rt_window_ms
        assert 0 < lo < hi <= 5000

    def test_pooled_threshold_between_level_extremes(self):
        report = build_calibration_report(self._records())
        per = list(report.per_level_thresholds.values())
        assert min(per) * 0.5 <= report.chosen_threshold_px_s <= max(per) * 1.5

    def test_raw_samples_govern_retention(self):
        records = self._records()
        raw = [GazeSample(0, -500.0, 10.0), GazeSample(10, 10.0, 10.0)]
        report = build_calibration_report(records, raw_samples=raw)
        assert report.retention_by_tolerance[0.0] == 0.5
        assert report.retention_by_tolerance[100.0] == 0.5

    def test_rt_fallback_when_no_clicks(self):
        records = self._records()
        for rec in records.values():
            rec.events[:] = [e for e in rec.events if e.kind.value != "click"]
        report = build_calibration_report(records)
        assert report.rt_window_ms == (522, 5000)
