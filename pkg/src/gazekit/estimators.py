"""scikit-learn style adapters around velocity classification.

`IVTClassifier` wraps the same classification core the pipeline uses:
fit() picks (or accepts) the velocity threshold, transform() returns
per-sample velocities, predict() returns movement labels. Input is an
(n, 3) array of [timestamp_ms, x_px, y_px] rows; the first sample has no
velocity (NaN) and an "unclassified" label, matching the pipeline.
"""
from __future__ import annotations

import numbers
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .calibrate import calibrate_velocity_threshold
from .classify import classify_ivt, velocities_of
from .errors import NonMonotonicTimestamps, TooFewSamples, ValidationError
from .types import GazeSample


def as_gaze_array(X) -> np.ndarray:
    """Validate and coerce input into an (n, 3) float array [t_ms, x, y].

    Timestamps must be finite and strictly increasing; coordinates must
    be finite.
    """
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValidationError(
            f"expected an (n, 3) array of [timestamp_ms, x_px, y_px], "
            f"got shape {getattr(arr, 'shape', None)}"
        )
    if not np.isfinite(arr).all():
        raise ValidationError("gaze array contains NaN or infinite values")
    dt = np.diff(arr[:, 0])
    if (dt <= 0).any():
        bad = int(np.argmax(dt <= 0))
        raise NonMonotonicTimestamps(
            f"timestamps must be strictly increasing (violated at row {bad + 1})"
        )
    return arr


def _to_samples(arr: np.ndarray) -> list[GazeSample]:
    return [GazeSample(t, x, y) for t, x, y in arr.tolist()]


class IVTClassifier(BaseEstimator, TransformerMixin):
    """Velocity-threshold movement classifier with optional data-driven fit.

    Parameters
    ----------
    velocity_threshold : "auto" or positive number, default "auto"
        Fixed fixation/saccade cutoff in px/s, or "auto" to calibrate it
        from the fitted data (percentile of the trimmed velocity
        distribution).
    percentile : float, default 75.0
        Percentile used when calibrating automatically.
    outlier_cut_percentile : float, default 99.5
        Velocities above this percentile are trimmed before calibrating.

    Attributes
    ----------
    threshold_ : float
        The cutoff used by predict/transform after fit.
    fixation_fraction_ : float
        Fraction of fitted (trimmed) velocities at or below threshold_.
    """

    def __init__(
        self,
        velocity_threshold: float | str = "auto",
        percentile: float = 75.0,
        outlier_cut_percentile: float = 99.5,
    ) -> None:
        self.velocity_threshold = velocity_threshold
        self.percentile = percentile
        self.outlier_cut_percentile = outlier_cut_percentile

    def _validate_threshold_param(self) -> None:
        vt = self.velocity_threshold
        if vt == "auto":
            return
        if isinstance(vt, numbers.Real) and float(vt) > 0:
            return
        raise ValidationError(
            f"velocity_threshold must be 'auto' or a positive number, got {vt!r}"
        )

    def fit(self, X, y=None) -> "IVTClassifier":
        self._validate_threshold_param()
        arr = as_gaze_array(X)
        if len(arr) < 2:
            raise TooFewSamples("fit needs at least 2 samples to form a velocity")
        velocities = velocities_of(classify_ivt(_to_samples(arr), np.inf))
        if self.velocity_threshold == "auto":
            calibration = calibrate_velocity_threshold(
                velocities, self.percentile, self.outlier_cut_percentile
            )
            self.threshold_ = calibration.chosen_threshold_px_s
            self.fixation_fraction_ = calibration.fixation_fraction_at_threshold
        else:
            self.threshold_ = float(self.velocity_threshold)
            self.fixation_fraction_ = float(
                np.mean(np.asarray(velocities) <= self.threshold_)
            )
        self.n_features_in_ = 3
        return self

    def transform(self, X) -> np.ndarray:
        """Per-sample velocities in px/s as an (n, 1) column; first is NaN."""
        arr = as_gaze_array(X)
        out = np.full((len(arr), 1), np.nan)
        if len(arr) >= 2:
            classified = classify_ivt(_to_samples(arr), np.inf)
            out[1:, 0] = velocities_of(classified)
        return out

    def predict(self, X) -> np.ndarray:
        """Movement label per sample: fixation / saccade / unclassified."""
        check_is_fitted(self, "threshold_")
        arr = as_gaze_array(X)
        classified = classify_ivt(_to_samples(arr), self.threshold_)
        return np.array([c.movement.value for c in classified], dtype=object)

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X, y).predict(X)


def samples_to_array(samples: Sequence[GazeSample]) -> np.ndarray:
    """Convenience inverse of the array form for cleaned session samples."""
    return np.array(
        [[s.timestamp_ms, s.x_px, s.y_px] for s in samples], dtype=float
    ).reshape(-1, 3)
