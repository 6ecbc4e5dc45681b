"""Shared builders for tests: crafted samples, events, and CSV files."""
from __future__ import annotations

import csv
import io
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make `oracles` importable

from gazekit import EventKind, GameEvent, GazeSample, ObjectType

HEADER = [
    "timestamp_ms",
    "gaze",
    "event_kind",
    "object_id",
    "object_type",
    "object_pos",
    "click_label",
]


def samples_from_velocities(
    velocities, dt_ms: int = 10, x0: float = 100.0, y: float = 500.0
):
    """Build samples whose point-to-point velocities are exactly the given
    values: each step moves dx = v * dt / 1000 along the x axis."""
    samples = [GazeSample(0, x0, y)]
    t, x = 0, x0
    for v in velocities:
        t += dt_ms
        x += v * dt_ms / 1000.0
        samples.append(GazeSample(t, x, y))
    return samples


def appear(ts, object_id, object_type=ObjectType.MUSHROOM_TARGET, pos=None, line=0):
    return GameEvent(ts, EventKind.APPEAR, object_id, object_type, pos, None, line)


def disappear(ts, object_id, object_type=ObjectType.MUSHROOM_TARGET, pos=None, line=0):
    return GameEvent(ts, EventKind.DISAPPEAR, object_id, object_type, pos, None, line)


def click(ts, label=None, object_id=None, object_type=ObjectType.UNKNOWN, pos=None, line=0):
    return GameEvent(ts, EventKind.CLICK, object_id, object_type, pos, label, line)


def csv_text(rows, header=HEADER) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def gaze_row(ts, coord_text):
    return [str(ts), coord_text, "", "", "", "", ""]


def event_row(ts, kind, object_id="", object_type="", pos="", label=""):
    return [str(ts), "", kind, object_id, object_type, pos, label]


@pytest.fixture
def write_csv(tmp_path):
    def _write(rows, name="level1.csv", header=HEADER):
        path = tmp_path / name
        path.write_text(csv_text(rows, header), encoding="utf-8")
        return path

    return _write
