"""Estimator-style wrapper around the velocity classifier."""
from __future__ import annotations

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from gazekit import (
    IVTClassifier,
    NonMonotonicTimestamps,
    TooFewSamples,
    ValidationError,
    as_gaze_array,
    classify_ivt,
    samples_to_array,
)

from conftest import samples_from_velocities


def gaze_array(velocities, dt=10):
    return samples_to_array(samples_from_velocities(velocities, dt_ms=dt))


class TestAsGazeArray:
    def test_accepts_lists_and_arrays(self):
        X = as_gaze_array([[0, 1.0, 2.0], [10, 3.0, 4.0]])
        assert X.shape == (2, 3)
        assert X.dtype == np.float64

    def test_rejects_wrong_width(self):
        with pytest.raises(ValidationError):
            as_gaze_array([[0, 1.0]])

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            as_gaze_array([[0, np.nan, 2.0]])

    def test_round_trip_with_samples(self):
        samples = samples_from_velocities([100.0, 200.0])
        X = samples_to_array(samples)
        assert X.shape == (3, 3)
        assert list(X[:, 0]) == [s.timestamp_ms for s in samples]


class TestIVTClassifier:
    def test_get_set_params_and_clone(self):
        est = IVTClassifier(velocity_threshold=500.0, percentile=80.0)
        params = est.get_params()
        assert params["velocity_threshold"] == 500.0
        assert params["percentile"] == 80.0
        est.set_params(percentile=90.0)
        assert est.get_params()["percentile"] == 90.0
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_fixed_threshold_fit(self):
        est = IVTClassifier(velocity_threshold=721.0)
        X = gaze_array([100.0, 800.0, 100.0])
        est.fit(X)
        assert est.threshold_ == 721.0
        assert est.n_features_in_ == 3
        # 2 of 3 velocities are at or below the cutoff
        assert est.fixation_fraction_ == pytest.approx(2 / 3)

    def test_auto_threshold_tracks_distribution(self):
        rng = np.random.default_rng(4)
        velocities = rng.uniform(50, 600, size=500).tolist()
        est = IVTClassifier().fit(gaze_array(velocities))
        lo, hi = np.percentile(velocities, [70, 80])
        assert lo <= est.threshold_ <= hi

    def test_predict_agrees_with_function_api(self):
        velocities = [100.0, 900.0, 50.0, 2000.0, 10.0]
        samples = samples_from_velocities(velocities)
        est = IVTClassifier(velocity_threshold=721.0).fit(samples_to_array(samples))
        predicted = est.predict(samples_to_array(samples))
        expected = [
            c.movement.value for c in classify_ivt(samples, 721.0)
        ]
        assert list(predicted) == expected
        assert predicted[0] == "unclassified"

    def test_transform_velocities_nan_first(self):
        velocities = [100.0, 200.0]
        est = IVTClassifier(velocity_threshold=721.0)
        X = gaze_array(velocities)
        V = est.fit_transform(X)
        assert V.shape == (3, 1)
        assert np.isnan(V[0, 0])
        assert V[1:, 0] == pytest.approx([100.0, 200.0])

    def test_predict_before_fit_raises(self):
        with pytest.raises(NotFittedError):
            IVTClassifier().predict(gaze_array([100.0]))

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamples):
            IVTClassifier().fit(np.array([[0.0, 1.0, 2.0]]))

    def test_non_monotonic_rejected_with_row_index(self):
        X = np.array([[0.0, 0, 0], [10.0, 1, 1], [10.0, 2, 2]])
        with pytest.raises(NonMonotonicTimestamps, match="row 2"):
            IVTClassifier(velocity_threshold=721.0).fit(X)

    def test_bad_threshold_param(self):
        with pytest.raises(ValidationError):
            IVTClassifier(velocity_threshold=-5.0).fit(gaze_array([100.0, 200.0]))
        with pytest.raises(ValidationError):
            IVTClassifier(velocity_threshold="fast").fit(gaze_array([100.0, 200.0]))

    def test_fit_predict_shortcut(self):
        X = gaze_array([100.0, 900.0])
        est = IVTClassifier(velocity_threshold=721.0)
        assert list(est.fit_predict(X)) == ["unclassified", "fixation", "saccade"]
