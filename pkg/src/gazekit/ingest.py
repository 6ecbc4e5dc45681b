"""CSV ingestion: parse attention-game logs into validated session records.

A log is a comma-delimited UTF-8 file with a header row. Each data row
carries a timestamp plus either a gaze coordinate (``"(x, y)"`` text), a
game event (appear/disappear/click), or both. Cleaning drops rows whose
gaze is missing, malformed, exactly ``(0, 0)`` (tracker dropout marker),
outside the screen bounds plus tolerance, or a duplicate timestamp; rows
that still carry a valid event are kept as event-only rows.
"""
from __future__ import annotations

import csv
import math
import re
from dataclasses import replace
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import ColumnMapping
from .errors import (
    DuplicateLevel,
    EmptyAfterCleaning,
    FileUnreadable,
    MalformedCoordinate,
    MissingColumn,
    MixedStudents,
)
from .types import (
    ClickLabel,
    CombinedDataset,
    DISTRACTOR_TYPES,
    EventKind,
    GameEvent,
    GazeSample,
    ObjectType,
    SessionRecord,
    TARGET_TYPES,
)

_NUMBER_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)\Z")

_EVENT_KIND_ALIASES = {
    "appear": EventKind.APPEAR,
    "appeared": EventKind.APPEAR,
    "disappear": EventKind.DISAPPEAR,
    "disappeared": EventKind.DISAPPEAR,
    "click": EventKind.CLICK,
    "clicked": EventKind.CLICK,
}

_OBJECT_TYPE_ALIASES = {
    "mushroom_target": ObjectType.MUSHROOM_TARGET,
    "mushroom": ObjectType.MUSHROOM_TARGET,
    "target": ObjectType.MUSHROOM_TARGET,
    "blue_flower": ObjectType.BLUE_FLOWER,
    "yellow_purple_flower": ObjectType.YELLOW_PURPLE_FLOWER,
}

_EVENT_ORDER = {EventKind.APPEAR: 0, EventKind.DISAPPEAR: 1, EventKind.CLICK: 2}


def parse_coordinate(text: str) -> tuple[float, float]:
    """Parse ``"(x, y)"`` text into an (x, y) float pair.

    Raises MalformedCoordinate when parentheses are missing, the pair has
    the wrong arity, or a token is not a number.
    """
    stripped = text.strip()
    if not (stripped.startswith("(") and stripped.endswith(")")):
        raise MalformedCoordinate("missing parenthesis", text)
    parts = stripped[1:-1].split(",")
    if len(parts) != 2:
        raise MalformedCoordinate(f"expected 2 values, got {len(parts)}", text)
    values = []
    for part in parts:
        token = part.strip()
        if not _NUMBER_RE.match(token):
            raise MalformedCoordinate(f"non-numeric token {token!r}", text)
        values.append(float(token))
    return values[0], values[1]


def format_coordinate(x: float, y: float) -> str:
    """Serialize a coordinate pair to the same grammar parse_coordinate reads.

    Uses positional (never scientific) notation so the result always
    round-trips exactly through parse_coordinate.
    """
    return f"({_format_number(x)}, {_format_number(y)})"


def _format_number(value: float) -> str:
    text = repr(float(value))
    if "e" in text or "E" in text or "n" in text:  # exponent, nan or inf
        text = np.format_float_positional(float(value), trim="0")
    return text


def in_bounds(x: float, y: float, screen_w: float, screen_h: float, tol_px: float) -> bool:
    return (-tol_px <= x <= screen_w + tol_px) and (-tol_px <= y <= screen_h + tol_px)


def filter_bounds(
    samples: Sequence[GazeSample],
    screen_w: float,
    screen_h: float,
    tol_px: float,
) -> tuple[list[GazeSample], int]:
    """Keep samples inside the screen rectangle grown by tol_px on each side.

    Returns (kept_samples, dropped_count); order is preserved.
    """
    if tol_px < 0:
        raise ValueError("tol_px must be >= 0")
    kept = [s for s in samples if in_bounds(s.x_px, s.y_px, screen_w, screen_h, tol_px)]
    return kept, len(samples) - len(kept)


def load_level_file(
    path: str | Path,
    schema_map: Optional[ColumnMapping] = None,
    level: int = 1,
    student_id: str = "student",
    *,
    screen_w: int = 1920,
    screen_h: int = 1080,
    bounds_tol_px: float = 50.0,
) -> SessionRecord:
    """Parse one level's CSV into a cleaned, normalized SessionRecord."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise FileUnreadable(f"cannot read {path}: {exc}") from exc
    try:
        text = raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise FileUnreadable(f"{path} is not valid UTF-8: {exc}") from exc
    return parse_rows(
        text.splitlines(),
        schema_map or ColumnMapping(),
        level=level,
        student_id=student_id,
        screen_w=screen_w,
        screen_h=screen_h,
        bounds_tol_px=bounds_tol_px,
        source=str(path),
    )


def parse_rows(
    lines: Iterable[str],
    columns: ColumnMapping,
    *,
    level: int,
    student_id: str,
    screen_w: int,
    screen_h: int,
    bounds_tol_px: float,
    source: str = "<memory>",
) -> SessionRecord:
    """Core of load_level_file, operating on already-decoded CSV lines."""
    reader = csv.DictReader(lines)
    if reader.fieldnames is None:
        raise EmptyAfterCleaning(f"{source}: file has no header row")
    header = set(reader.fieldnames)
    for name in columns.required:
        if name not in header:
            raise MissingColumn(name)

    samples: list[tuple[int, GazeSample]] = []  # (line_number, sample)
    events: list[GameEvent] = []
    warnings: list[str] = []
    seen_ts: set[int] = set()
    rows_total = 0
    event_only_rows = 0

    for line_number, row in enumerate(reader, start=2):
        rows_total += 1
        timestamp = _parse_timestamp(row.get(columns.timestamp))
        event = None
        if timestamp is not None:
            event = _parse_event(row, columns, timestamp, line_number, warnings)
        sample = None
        if timestamp is not None:
            sample = _parse_gaze(
                row.get(columns.gaze), timestamp, seen_ts, screen_w, screen_h, bounds_tol_px
            )
        if sample is not None:
            seen_ts.add(sample.timestamp_ms)
            samples.append((line_number, sample))
            if event is not None:
                events.append(event)
        elif event is not None:
            event_only_rows += 1
            events.append(event)

    rows_dropped = rows_total - len(samples) - event_only_rows
    if not samples:
        raise EmptyAfterCleaning(
            f"{source}: no valid gaze samples left after cleaning "
            f"({rows_total} rows, {rows_dropped} dropped)"
        )

    samples.sort(key=lambda pair: pair[1].timestamp_ms)
    offset = samples[0][1].timestamp_ms
    normalized = [
        GazeSample(s.timestamp_ms - offset, s.x_px, s.y_px) for _, s in samples
    ]
    events = [replace(e, timestamp_ms=e.timestamp_ms - offset) for e in events]
    events.sort(key=lambda e: (e.timestamp_ms, _EVENT_ORDER[e.kind], e.line_number))
    events = _drop_orphan_disappears(events, warnings)
    events = derive_click_labels(events)

    return SessionRecord(
        student_id=student_id,
        level=level,
        screen_w=screen_w,
        screen_h=screen_h,
        samples=normalized,
        events=events,
        rows_total=rows_total,
        rows_dropped=rows_dropped,
        warnings=warnings,
    )


def _parse_timestamp(text: Optional[str]) -> Optional[int]:
    if text is None:
        return None
    token = text.strip()
    if not token:
        return None
    try:
        value = float(token)
    except ValueError:
        return None
    if not math.isfinite(value):
        return None
    return int(round(value))


def _parse_gaze(
    text: Optional[str],
    timestamp: int,
    seen_ts: set[int],
    screen_w: int,
    screen_h: int,
    tol_px: float,
) -> Optional[GazeSample]:
    if text is None or not text.strip():
        return None
    try:
        x, y = parse_coordinate(text)
    except MalformedCoordinate:
        return None
    if x == 0.0 and y == 0.0:
        return None  # tracker dropout marker
    if not in_bounds(x, y, screen_w, screen_h, tol_px):
        return None
    if timestamp in seen_ts:
        return None  # duplicate timestamp; velocity needs dt > 0
    return GazeSample(timestamp, x, y)


def _parse_event(
    row: dict[str, Optional[str]],
    columns: ColumnMapping,
    timestamp: int,
    line_number: int,
    warnings: list[str],
) -> Optional[GameEvent]:
    kind_text = (row.get(columns.event_kind) or "").strip().lower()
    if not kind_text:
        return None
    kind = _EVENT_KIND_ALIASES.get(kind_text)
    if kind is None:
        warnings.append(f"line {line_number}: unknown event kind {kind_text!r}")
        return None

    object_type = _parse_object_type(row.get(columns.object_type))
    if kind is not EventKind.CLICK and object_type is ObjectType.UNKNOWN:
        warnings.append(
            f"line {line_number}: {kind.value} event without a known object type"
        )
        return None

    object_id = (row.get(columns.object_id) or "").strip() or None
    position = None
    pos_text = (row.get(columns.object_pos) or "").strip()
    if pos_text:
        try:
            position = parse_coordinate(pos_text)
        except MalformedCoordinate:
            warnings.append(f"line {line_number}: malformed object position {pos_text!r}")

    click_label = None
    if kind is EventKind.CLICK:
        label_text = (row.get(columns.click_label) or "").strip().lower()
        if label_text:
            try:
                click_label = ClickLabel(label_text)
            except ValueError:
                warnings.append(f"line {line_number}: unknown click label {label_text!r}")

    return GameEvent(
        timestamp_ms=timestamp,
        kind=kind,
        object_id=object_id,
        object_type=object_type,
        position_px=position,
        click_label=click_label,
        line_number=line_number,
    )


def _parse_object_type(text: Optional[str]) -> ObjectType:
    token = (text or "").strip().lower()
    return _OBJECT_TYPE_ALIASES.get(token, ObjectType.UNKNOWN)


def _drop_orphan_disappears(events: list[GameEvent], warnings: list[str]) -> list[GameEvent]:
    """Drop id-carrying disappears whose appear was never seen."""
    appeared: set[str] = set()
    kept = []
    for event in events:
        if event.kind is EventKind.APPEAR and event.object_id:
            appeared.add(event.object_id)
        if (
            event.kind is EventKind.DISAPPEAR
            and event.object_id
            and event.object_id not in appeared
        ):
            warnings.append(
                f"line {event.line_number}: disappear for {event.object_id!r} "
                "without a preceding appear"
            )
            continue
        kept.append(event)
    return kept


def derive_click_labels(events: Sequence[GameEvent]) -> list[GameEvent]:
    """Fill in missing click labels from what was visible at click time.

    A click while at least one target is visible is correct, while only
    distractors are visible is incorrect, and with nothing on screen is
    neutral. Events must already be sorted chronologically.
    """
    visible_targets = 0
    visible_distractors = 0
    labelled: list[GameEvent] = []
    for event in events:
        if event.kind is EventKind.APPEAR:
            if event.object_type in TARGET_TYPES:
                visible_targets += 1
            elif event.object_type in DISTRACTOR_TYPES:
                visible_distractors += 1
        elif event.kind is EventKind.DISAPPEAR:
            if event.object_type in TARGET_TYPES:
                visible_targets = max(0, visible_targets - 1)
            elif event.object_type in DISTRACTOR_TYPES:
                visible_distractors = max(0, visible_distractors - 1)
        elif event.kind is EventKind.CLICK and event.click_label is None:
            if visible_targets > 0:
                label = ClickLabel.CORRECT
            elif visible_distractors > 0:
                label = ClickLabel.INCORRECT
            else:
                label = ClickLabel.NEUTRAL
            event = replace(event, click_label=label)
        labelled.append(event)
    return labelled


def merge_levels(records: Sequence[SessionRecord]) -> CombinedDataset:
    """Combine per-level records for one student into one dataset."""
    if not records:
        raise ValueError("merge_levels needs at least one record")
    student_ids = {r.student_id for r in records}
    if len(student_ids) > 1:
        raise MixedStudents(f"records span multiple students: {sorted(student_ids)}")
    by_level: dict[int, SessionRecord] = {}
    for record in records:
        if record.level in by_level:
            raise DuplicateLevel(f"level {record.level} provided twice")
        by_level[record.level] = record
    return CombinedDataset(student_id=records[0].student_id, records=by_level)
