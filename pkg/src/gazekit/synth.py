"""Deterministic synthetic session generator with a ground-truth sidecar.

Generated files exercise the whole pipeline with known answers: targets
appear on a fixed 6-second cadence and stay visible 0.8 s, matched clicks
land strictly inside the reaction window and before the next target, and
misses get no click at all — so greedy matching recovers exactly the
planted pairs under either strategy. The sidecar JSON records the
expected counts; acceptance tests compare pipeline output against it.

Clicks carry explicit correct/incorrect labels (the game engine knows
correctness even when the click lands after the object disappears, so
visibility-derived labels are not used here).

All randomness flows through one seeded ``random.Random``; the same spec
always produces byte-identical CSV and sidecar text.
"""
from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import asdict, dataclass
from pathlib import Path
from statistics import median

from .ingest import format_coordinate

TARGET_PERIOD_MS = 6000
TARGET_VISIBLE_MS = 800
FIRST_TARGET_MS = 1000
FIRST_DISTRACTOR_MS = 4000
RT_FLOOR_MS = 560
RT_CEIL_MS = 4500

_HEADER = (
    "timestamp_ms",
    "gaze",
    "event_kind",
    "object_id",
    "object_type",
    "object_pos",
    "click_label",
)


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic level."""

    targets: int = 16
    distractors: int = 8
    hit_rate: float = 0.9375
    rt_mean_ms: float = 1200.0
    rt_spread_ms: float = 250.0
    incorrect_clicks: int = 0
    invalid_rows: int = 0
    gaze_rows: int | None = None
    sample_dt_ms: int = 10
    seed: int = 0
    screen_w: int = 1920
    screen_h: int = 1080

    def validate(self) -> None:
        if self.targets < 0 or self.distractors < 0:
            raise ValueError("targets and distractors must be >= 0")
        if not 0.0 <= self.hit_rate <= 1.0:
            raise ValueError("hit-rate must be within [0, 1]")
        if not RT_FLOOR_MS <= self.rt_mean_ms <= RT_CEIL_MS:
            raise ValueError(
                f"rt-mean must be within [{RT_FLOOR_MS}, {RT_CEIL_MS}] ms so "
                "generated clicks stay inside the matching window"
            )
        if self.rt_spread_ms < 0:
            raise ValueError("rt-spread must be >= 0")
        if self.incorrect_clicks < 0 or self.incorrect_clicks > self.distractors:
            raise ValueError("incorrect-clicks must be within [0, distractors]")
        if self.invalid_rows < 0:
            raise ValueError("invalid-rows must be >= 0")
        if self.gaze_rows is not None and self.gaze_rows < 2:
            raise ValueError("gaze-rows must be >= 2")
        if self.sample_dt_ms < 1:
            raise ValueError("sample-dt-ms must be >= 1")
        if self.screen_w < 200 or self.screen_h < 200:
            raise ValueError("screen must be at least 200x200 px")


def _draw_rt(rng: random.Random, spec: SynthSpec) -> int:
    rt = rng.normalvariate(spec.rt_mean_ms, spec.rt_spread_ms)
    return int(round(min(RT_CEIL_MS, max(RT_FLOOR_MS, rt))))


def _random_point(rng: random.Random, spec: SynthSpec) -> tuple[float, float]:
    return (
        rng.uniform(60.0, spec.screen_w - 60.0),
        rng.uniform(60.0, spec.screen_h - 60.0),
    )


def generate_session(spec: SynthSpec) -> tuple[str, dict]:
    """Build (csv_text, truth_sidecar) for one synthetic level."""
    spec.validate()
    rng = random.Random(spec.seed)

    # Game events: targets on a fixed cadence, distractors offset between
    # them, clicks planted for the first `matched` targets.
    matched = round(spec.hit_rate * spec.targets)
    events: list[tuple[int, int, list[str]]] = []  # (ts, order, row-tail)
    rts: list[int] = []
    last_event_ms = 0

    for i in range(spec.targets):
        appear = FIRST_TARGET_MS + i * TARGET_PERIOD_MS
        disappear = appear + TARGET_VISIBLE_MS
        object_id = f"t{i + 1}"
        pos = format_coordinate(*_random_point(rng, spec))
        events.append((appear, 0, ["appear", object_id, "mushroom_target", pos, ""]))
        events.append(
            (disappear, 1, ["disappear", object_id, "mushroom_target", pos, ""])
        )
        last_event_ms = max(last_event_ms, disappear)
        if i < matched:
            rt = _draw_rt(rng, spec)
            rts.append(rt)
            click = appear + rt
            events.append(
                (click, 2, ["click", object_id, "mushroom_target", pos, "correct"])
            )
            last_event_ms = max(last_event_ms, click)

    for j in range(spec.distractors):
        appear = FIRST_DISTRACTOR_MS + j * TARGET_PERIOD_MS
        disappear = appear + TARGET_VISIBLE_MS
        object_id = f"d{j + 1}"
        kind = "blue_flower" if j % 2 == 0 else "yellow_purple_flower"
        pos = format_coordinate(*_random_point(rng, spec))
        events.append((appear, 0, ["appear", object_id, kind, pos, ""]))
        events.append((disappear, 1, ["disappear", object_id, kind, pos, ""]))
        last_event_ms = max(last_event_ms, disappear)
        if j < spec.incorrect_clicks:
            click = appear + 300
            events.append((click, 2, ["click", object_id, kind, pos, "incorrect"]))
            last_event_ms = max(last_event_ms, click)

    # Gaze: dwell-and-jump pattern, always strictly inside the screen.
    if spec.gaze_rows is not None:
        n_gaze = spec.gaze_rows
    else:
        n_gaze = max((last_event_ms + 1000) // spec.sample_dt_ms + 1, 100)
    gaze_rows: list[tuple[int, str]] = []
    anchor = _random_point(rng, spec)
    dwell_left = rng.randint(20, 60)
    for k in range(n_gaze):
        if dwell_left == 0:
            anchor = _random_point(rng, spec)
            dwell_left = rng.randint(20, 60)
        x = anchor[0] + rng.uniform(-2.0, 2.0)
        y = anchor[1] + rng.uniform(-2.0, 2.0)
        gaze_rows.append((k * spec.sample_dt_ms, format_coordinate(x, y)))
        dwell_left -= 1

    # Invalid rows cycle through the three cleaning cases: missing gaze,
    # the (0, 0) dropout marker, and malformed coordinate text. Their
    # timestamps sit between sample ticks so nothing else is disturbed.
    invalid_variants = ("", "(0, 0)", "(banana, 7)")
    invalid_rows = [
        (k * spec.sample_dt_ms + max(spec.sample_dt_ms // 2, 1), invalid_variants[k % 3])
        for k in range(spec.invalid_rows)
    ]

    table: list[tuple[tuple[int, int, int], list[str]]] = []
    for ts, gaze_text in gaze_rows:
        table.append(((ts, 0, 0), [str(ts), gaze_text, "", "", "", "", ""]))
    for idx, (ts, gaze_text) in enumerate(invalid_rows):
        table.append(((ts, 1, idx), [str(ts), gaze_text, "", "", "", "", ""]))
    for idx, (ts, order, tail) in enumerate(sorted(events, key=lambda e: (e[0], e[1]))):
        table.append(((ts, 2, idx), [str(ts), ""] + tail))
    table.sort(key=lambda item: item[0])

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_HEADER)
    writer.writerows(row for _, row in table)

    hit_rate = matched / spec.targets if spec.targets else 0.0
    false_alarm = (
        spec.incorrect_clicks / spec.distractors if spec.distractors else 0.0
    )
    truth = {
        "spec": asdict(spec),
        "expected": {
            "targets_shown": spec.targets,
            "distractors_shown": spec.distractors,
            "matched_pairs": matched,
            "hit_rate": hit_rate,
            "hit_rate_pct": f"{hit_rate * 100:.1f}",
            "correct_clicks": matched,
            "incorrect_clicks": spec.incorrect_clicks,
            "neutral_clicks": 0,
            "false_alarm_rate": false_alarm,
            "false_alarm_pct": f"{false_alarm * 100:.1f}",
            "reaction_times_ms": rts,
            "mean_rt_ms": sum(rts) / len(rts) if rts else 0.0,
            "median_rt_ms": float(median(rts)) if rts else 0.0,
            "gaze_rows_written": n_gaze,
            "invalid_rows_written": spec.invalid_rows,
            "rows_total": len(table),
        },
    }
    return out.getvalue(), truth


def write_session(spec: SynthSpec, out_path: str | Path) -> tuple[Path, Path]:
    """Write the CSV and its ``<name>.truth.json`` sidecar."""
    out_path = Path(out_path)
    csv_text, truth = generate_session(spec)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(csv_text, encoding="utf-8")
    truth_path = out_path.with_name(out_path.name + ".truth.json")
    truth_path.write_text(
        json.dumps(truth, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return out_path, truth_path
