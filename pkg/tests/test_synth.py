"""Synthetic session generator and its ground-truth sidecar."""
from __future__ import annotations

import json
import statistics

import pytest

from gazekit import (
    ColumnMapping,
    EngineConfig,
    SynthSpec,
    analyze_session,
    generate_session,
    merge_levels,
    parse_rows,
    write_session,
)


def parse(text, level=1):
    return parse_rows(
        text.splitlines(),
        ColumnMapping(),
        level=level,
        student_id="s1",
        screen_w=1920,
        screen_h=1080,
        bounds_tol_px=50.0,
    )


class TestSpecValidation:
    def test_defaults_valid(self):
        SynthSpec().validate()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"targets": -1},
            {"hit_rate": 1.5},
            {"hit_rate": -0.1},
            {"rt_spread_ms": -1.0},
            {"sample_dt_ms": 0},
            {"screen_w": 0},
            {"invalid_rows": -2},
        ],
    )
    def test_bad_specs_rejected(self, kwargs):
        with pytest.raises(ValueError):
            SynthSpec(**kwargs).validate()


class TestDeterminism:
    def test_same_seed_byte_identical(self):
        spec = SynthSpec(seed=42)
        t1, truth1 = generate_session(spec)
        t2, truth2 = generate_session(spec)
        assert t1 == t2
        assert truth1 == truth2

    def test_seed_changes_output(self):
        t1, _ = generate_session(SynthSpec(seed=1))
        t2, _ = generate_session(SynthSpec(seed=2))
        assert t1 != t2


class TestClosedLoop:
    """Analyzing a generated session reproduces the sidecar's numbers."""

    @pytest.mark.parametrize("seed", [0, 7, 99])
    @pytest.mark.parametrize("strategy", ["single-candidate", "scan-forward"])
    def test_analysis_matches_truth(self, seed, strategy):
        spec = SynthSpec(
            targets=12, distractors=5, hit_rate=0.75, incorrect_clicks=2, seed=seed
        )
        text, truth = generate_session(spec)
        config = EngineConfig(student_id="s1", match_strategy=strategy)
        analysis = analyze_session(merge_levels([parse(text)]), config)
        m = analysis.levels[1].metrics
        exp = truth["expected"]
        assert m.targets_shown == exp["targets_shown"]
        assert m.distractors_shown == exp["distractors_shown"]
        assert m.matched_pairs == exp["matched_pairs"]
        assert m.hit_rate == pytest.approx(exp["hit_rate"])
        assert m.incorrect_clicks == exp["incorrect_clicks"]
        assert m.false_alarm_rate == pytest.approx(exp["false_alarm_rate"])
        assert sorted(m.reaction_times_ms) == sorted(exp["reaction_times_ms"])
        assert m.mean_rt_ms == pytest.approx(exp["mean_rt_ms"])
        assert m.median_rt_ms == pytest.approx(exp["median_rt_ms"])

    def test_truth_statistics_self_consistent(self):
        _, truth = generate_session(SynthSpec(targets=10, hit_rate=0.8, seed=3))
        exp = truth["expected"]
        rts = exp["reaction_times_ms"]
        assert len(rts) == exp["matched_pairs"]
        assert exp["mean_rt_ms"] == pytest.approx(sum(rts) / len(rts))
        assert exp["median_rt_ms"] == pytest.approx(statistics.median(rts))
        assert exp["hit_rate_pct"] == f"{exp['hit_rate'] * 100:.1f}"

    def test_row_accounting_with_invalid_rows(self):
        spec = SynthSpec(
            targets=0, distractors=0, gaze_rows=274, invalid_rows=30, seed=5
        )
        text, truth = generate_session(spec)
        record = parse(text)
        assert truth["expected"]["rows_total"] == 304
        assert record.rows_total == 304
        assert record.rows_dropped == 30
        assert len(record.samples) == 274
        assert record.events == []

    def test_rt_values_respect_generator_clip(self):
        _, truth = generate_session(
            SynthSpec(targets=30, hit_rate=1.0, rt_spread_ms=2000.0, seed=11)
        )
        for rt in truth["expected"]["reaction_times_ms"]:
            assert 560 <= rt <= 4500


class TestWriteSession:
    def test_writes_csv_and_sidecar(self, tmp_path):
        csv_path, truth_path = write_session(
            SynthSpec(targets=3, seed=1), tmp_path / "level_1.csv"
        )
        assert csv_path.exists()
        assert truth_path.name == "level_1.csv.truth.json"
        sidecar = json.loads(truth_path.read_text())
        assert sidecar["spec"]["targets"] == 3
        text = csv_path.read_text()
        _, truth = generate_session(SynthSpec(targets=3, seed=1))
        assert json.loads(truth_path.read_text()) == json.loads(
            json.dumps(truth)
        )
        assert text == generate_session(SynthSpec(targets=3, seed=1))[0]
