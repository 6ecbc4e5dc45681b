"""Chart series, table exports, and SVG rendering."""
from __future__ import annotations

import csv
import io
import json

import pytest

from gazekit import (
    ColumnMapping,
    EngineConfig,
    IncompleteAnalysis,
    SynthSpec,
    UnknownChart,
    analyze_session,
    build_chart_bundle,
    chart_bundle_json,
    export_tables,
    generate_session,
    merge_levels,
    parse_rows,
    pct,
    rt_histogram,
)
from gazekit.report import CHART_IDS
from gazekit.svg import render_svg


@pytest.fixture(scope="module")
def analysis3():
    """Three synthetic levels analyzed end to end."""
    records = []
    for level, hit in ((1, 0.9375), (2, 0.875), (3, 0.75)):
        text, _ = generate_session(
            SynthSpec(
                targets=16,
                distractors=4,
                hit_rate=hit,
                incorrect_clicks=level - 1,
                seed=level,
            )
        )
        records.append(
            parse_rows(
                text.splitlines(),
                ColumnMapping(),
                level=level,
                student_id="s1",
                screen_w=1920,
                screen_h=1080,
                bounds_tol_px=50.0,
            )
        )
    config = EngineConfig(student_id="s1")
    return analyze_session(merge_levels(records), config)


@pytest.fixture(scope="module")
def analysis1():
    text, _ = generate_session(SynthSpec(seed=9))
    record = parse_rows(
        text.splitlines(),
        ColumnMapping(),
        level=1,
        student_id="s1",
        screen_w=1920,
        screen_h=1080,
        bounds_tol_px=50.0,
    )
    return analyze_session(merge_levels([record]), EngineConfig(student_id="s1"))


class TestPct:
    def test_one_decimal(self):
        assert pct(15 / 16) == "93.8"
        assert pct(0.892) == "89.2"
        assert pct(1.0) == "100.0"
        assert pct(0.0) == "0.0"


class TestRtHistogram:
    def test_counts_sum_and_bins(self):
        rts = [610, 620, 660, 710, 1200]
        hist = rt_histogram(rts, bin_ms=50)
        assert sum(hist["counts"]) == len(rts)
        assert hist["bin_ms"] == 50
        assert hist["edges"][0] == 600  # floor of min onto the bin grid
        assert all(e % 50 == 0 for e in hist["edges"])
        assert len(hist["edges"]) == len(hist["counts"]) + 1

    def test_empty(self):
        hist = rt_histogram([])
        assert hist["counts"] == []


class TestTables:
    def test_three_levels_make_five_documents(self, analysis3):
        metrics = [la.metrics for la in analysis3.levels.values()]
        docs = export_tables(
            metrics, analysis3.comparison, analysis3.recommendations
        )
        assert sorted(docs) == [
            "comparison",
            "level_1",
            "level_2",
            "level_3",
            "recommendations",
        ]

    def test_one_level_makes_three_documents(self, analysis1):
        metrics = [la.metrics for la in analysis1.levels.values()]
        docs = export_tables(
            metrics, analysis1.comparison, analysis1.recommendations
        )
        assert sorted(docs) == ["comparison", "level_1", "recommendations"]

    def test_csv_round_trips_through_reader(self, analysis3):
        metrics = [la.metrics for la in analysis3.levels.values()]
        docs = export_tables(
            metrics, analysis3.comparison, analysis3.recommendations, format="csv"
        )
        for name, text in docs.items():
            rows = list(csv.reader(io.StringIO(text)))
            assert len(rows) >= 2, name
            width = len(rows[0])
            assert all(len(r) == width for r in rows), name

    def test_level_table_values(self, analysis3):
        m = analysis3.levels[1].metrics
        docs = export_tables(
            [m], analysis3.comparison, analysis3.recommendations
        )
        rows = dict(
            (r[0], r[1])
            for r in list(csv.reader(io.StringIO(docs["level_1"])))[1:]
        )
        assert rows["targets_shown"] == "16"
        assert rows["hit_rate_pct"] == pct(m.hit_rate)
        assert rows["matched_pairs"] == str(m.matched_pairs)

    def test_comparison_table_has_trend_row(self, analysis3):
        metrics = [la.metrics for la in analysis3.levels.values()]
        docs = export_tables(metrics, analysis3.comparison, [])
        rows = list(csv.reader(io.StringIO(docs["comparison"])))
        assert rows[-1][0] == "trend"
        level_rows = [r for r in rows[1:-1]]
        assert [r[0] for r in level_rows] == ["1", "2", "3"]

    def test_json_format(self, analysis3):
        metrics = [la.metrics for la in analysis3.levels.values()]
        docs = export_tables(metrics, analysis3.comparison, [], format="json")
        for name, text in docs.items():
            payload = json.loads(text)
            assert payload["table"] == name
            assert isinstance(payload["columns"], list)
            assert all(len(r) == len(payload["columns"]) for r in payload["rows"])

    def test_unknown_format(self, analysis3):
        with pytest.raises(ValueError):
            export_tables([], analysis3.comparison, [], format="xlsx")


class TestChartBundle:
    def test_all_chart_ids_present(self, analysis3):
        bundle = build_chart_bundle(analysis3, analysis3.comparison)
        for which in CHART_IDS:
            assert isinstance(bundle.chart(which), dict)
        with pytest.raises(UnknownChart):
            bundle.chart("fig9")

    def test_timeline_matches_appear_once(self, analysis3):
        bundle = build_chart_bundle(analysis3, analysis3.comparison)
        la = analysis3.levels[1]
        level_series = bundle.timeline["levels"][0]
        assert level_series["level"] == 1
        assert len(level_series["matches"]) == len(la.matches)
        assert len(level_series["episodes"]) == len(la.timeline.episodes)
        matched_clicks = [m["click_ms"] for m in level_series["matches"]]
        assert len(matched_clicks) == len(set(matched_clicks))

    def test_velocity_series_has_threshold(self, analysis3):
        bundle = build_chart_bundle(analysis3, analysis3.comparison)
        series = bundle.velocity["levels"][0]
        assert series["threshold_px_s"] == 721.0
        assert all(p["label"] in ("fixation", "saccade") for p in series["points"])
        # first sample is unclassified and therefore not on the trace
        n_samples = len(analysis3.levels[1].record.samples)
        assert len(series["points"]) == n_samples - 1

    def test_dashboard_percent_strings(self, analysis3):
        bundle = build_chart_bundle(analysis3, analysis3.comparison)
        dash = bundle.dashboard["levels"][0]
        m = analysis3.levels[1].metrics
        assert dash["targets"]["hit_rate_pct"] == pct(m.hit_rate)
        assert dash["movement"]["fixation_pct"] == pct(m.fixation_rate)

    def test_multilevel_available_with_three_levels(self, analysis3):
        bundle = build_chart_bundle(analysis3, analysis3.comparison)
        assert bundle.multilevel["available"] is True
        panels = bundle.multilevel["panels"]
        assert len(panels) == 4
        for panel in panels:
            assert panel["levels"] == [1, 2, 3]
            assert len(panel["values"]) == 3
            assert len(panel["deltas"]) == 2

    def test_multilevel_unavailable_with_one_level(self, analysis1):
        bundle = build_chart_bundle(analysis1, analysis1.comparison)
        assert bundle.multilevel["available"] is False
        assert "reason" in bundle.multilevel

    def test_empty_analysis_rejected(self, analysis3):
        import dataclasses

        hollow = dataclasses.replace(analysis3, levels={})
        with pytest.raises(IncompleteAnalysis):
            build_chart_bundle(hollow, None)

    def test_json_deterministic(self, analysis3):
        bundle = build_chart_bundle(analysis3, analysis3.comparison)
        first = chart_bundle_json(bundle)
        second = chart_bundle_json(build_chart_bundle(analysis3, analysis3.comparison))
        assert first == second
        assert sorted(first) == sorted(CHART_IDS)
        for text in first.values():
            json.loads(text)  # strict JSON
            assert text.endswith("\n")


class TestSvg:
    def test_every_chart_renders_valid_xmlish_svg(self, analysis3):
        bundle = build_chart_bundle(analysis3, analysis3.comparison)
        for which in CHART_IDS:
            doc = render_svg(bundle, which)
            assert doc.startswith("<?xml")
            assert "<svg" in doc and doc.rstrip().endswith("</svg>")

    def test_byte_identical_across_runs(self, analysis3):
        b1 = build_chart_bundle(analysis3, analysis3.comparison)
        b2 = build_chart_bundle(analysis3, analysis3.comparison)
        for which in CHART_IDS:
            assert render_svg(b1, which) == render_svg(b2, which)

    def test_timeline_episode_bar_count(self, analysis3):
        bundle = build_chart_bundle(analysis3, analysis3.comparison)
        doc = render_svg(bundle, "timeline")
        episodes = len(bundle.timeline["levels"][0]["episodes"])
        assert doc.count('class="episode"') == episodes

    def test_two_object_timeline_has_two_bars(self):
        text, _ = generate_session(
            SynthSpec(targets=2, distractors=0, hit_rate=1.0, seed=1)
        )
        record = parse_rows(
            text.splitlines(),
            ColumnMapping(),
            level=1,
            student_id="s1",
            screen_w=1920,
            screen_h=1080,
            bounds_tol_px=50.0,
        )
        analysis = analyze_session(
            merge_levels([record]), EngineConfig(student_id="s1")
        )
        bundle = build_chart_bundle(analysis, analysis.comparison)
        assert render_svg(bundle, "timeline").count('class="episode"') == 2

    def test_unknown_chart(self, analysis3):
        bundle = build_chart_bundle(analysis3, analysis3.comparison)
        with pytest.raises(UnknownChart):
            render_svg(bundle, "fig9")

    def test_multilevel_svg_notes_insufficient_levels(self, analysis1):
        bundle = build_chart_bundle(analysis1, analysis1.comparison)
        doc = render_svg(bundle, "multilevel")
        assert "fewer than 2 levels" in doc
