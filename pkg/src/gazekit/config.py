"""Analysis parameters, CSV column bindings, and config-file loading.

Config files are TOML (preferred) or JSON with the same structure; see
``DEFAULT_CONFIG_TOML`` at the bottom for the documented layout. Every
value is optional and falls back to the engine defaults below.
"""
from __future__ import annotations

import dataclasses
import json
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from .errors import FileUnreadable, ValidationError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

MATCH_STRATEGIES = ("single-candidate", "scan-forward")


@dataclass(frozen=True)
class AnalysisParams:
    """Knobs of the classification / matching pipeline.

    Defaults are the validated values for the attention-game dataset:
    721 px/s velocity cutoff, 522-5000 ms reaction window, 50 px screen
    bounds tolerance, 20x20 utilization grid.
    """

    v_thresh_px_s: float = 721.0
    rt_min_ms: int = 522
    rt_max_ms: int = 5000
    bounds_tol_px: float = 50.0
    grid_cols: int = 20
    grid_rows: int = 20

    def validate(self) -> "AnalysisParams":
        if not self.v_thresh_px_s > 0:
            raise ValidationError("v_thresh_px_s must be > 0")
        if not 0 < self.rt_min_ms < self.rt_max_ms:
            raise ValidationError("require 0 < rt_min_ms < rt_max_ms")
        if self.bounds_tol_px < 0:
            raise ValidationError("bounds_tol_px must be >= 0")
        if self.grid_cols < 1 or self.grid_rows < 1:
            raise ValidationError("grid dimensions must be >= 1")
        return self


@dataclass(frozen=True)
class ColumnMapping:
    """Binding from the logical CSV schema to physical column headers.

    ``timestamp``, ``gaze`` and ``event_kind`` are required in the file
    header; the rest are used only when present.
    """

    timestamp: str = "timestamp_ms"
    gaze: str = "gaze"
    event_kind: str = "event_kind"
    object_id: str = "object_id"
    object_type: str = "object_type"
    object_pos: str = "object_pos"
    click_label: str = "click_label"

    @property
    def required(self) -> tuple[str, ...]:
        return (self.timestamp, self.gaze, self.event_kind)


@dataclass(frozen=True)
class RuleTable:
    """Thresholds for the recommendation rules.

    These are engine defaults for flagging, not clinically validated
    cutoffs; edit them in the config file to suit the study.
    """

    min_hit_rate: float = 0.70
    max_mean_rt_ms: float = 1000.0
    max_false_alarm_rate: float = 0.20
    fatigue_rt_increase: float = 0.05
    utilization_drop: float = 0.50


@dataclass(frozen=True)
class EngineConfig:
    """Everything a run needs besides the input files."""

    screen_w: int = 1920
    screen_h: int = 1080
    student_id: str = "student"
    params: AnalysisParams = field(default_factory=AnalysisParams)
    columns: ColumnMapping = field(default_factory=ColumnMapping)
    rules: RuleTable = field(default_factory=RuleTable)
    match_strategy: str = "single-candidate"
    flat_trend_threshold: float = 0.05

    def validate(self) -> "EngineConfig":
        if self.screen_w <= 0 or self.screen_h <= 0:
            raise ValidationError("screen dimensions must be positive")
        if self.match_strategy not in MATCH_STRATEGIES:
            raise ValidationError(
                f"match_strategy must be one of {MATCH_STRATEGIES}, got {self.match_strategy!r}"
            )
        self.params.validate()
        return self


def _build(data: dict[str, Any]) -> EngineConfig:
    cfg = EngineConfig()
    screen = data.get("screen", {})
    params = data.get("params", {})
    cols = data.get("columns", {})
    rules = data.get("rules", {})
    matching = data.get("matching", {})
    comparison = data.get("comparison", {})
    known = {"screen", "params", "columns", "rules", "matching", "comparison", "student_id"}
    unknown = set(data) - known
    if unknown:
        raise ValidationError(f"unknown config sections: {sorted(unknown)}")
    return EngineConfig(
        screen_w=int(screen.get("width", cfg.screen_w)),
        screen_h=int(screen.get("height", cfg.screen_h)),
        student_id=str(data.get("student_id", cfg.student_id)),
        params=_merge(AnalysisParams(), params),
        columns=_merge(ColumnMapping(), cols),
        rules=_merge(RuleTable(), rules),
        match_strategy=str(matching.get("strategy", cfg.match_strategy)),
        flat_trend_threshold=float(comparison.get("flat_threshold", cfg.flat_trend_threshold)),
    ).validate()


def _merge(base: Any, overrides: dict[str, Any]) -> Any:
    names = {f.name: f.type for f in dataclasses.fields(base)}
    unknown = set(overrides) - set(names)
    if unknown:
        raise ValidationError(
            f"unknown keys for {type(base).__name__}: {sorted(unknown)}"
        )
    coerced = {}
    for key, value in overrides.items():
        current = getattr(base, key)
        coerced[key] = type(current)(value)
    return replace(base, **coerced)


def load_config(path: str | Path) -> EngineConfig:
    """Load an EngineConfig from a TOML or JSON file."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise FileUnreadable(f"cannot read config {path}: {exc}") from exc
    if path.suffix.lower() == ".json":
        data = json.loads(raw.decode("utf-8"))
    else:
        try:
            data = tomllib.loads(raw.decode("utf-8"))
        except tomllib.TOMLDecodeError:
            # JSON fallback for files without a .toml suffix
            try:
                data = json.loads(raw.decode("utf-8"))
            except json.JSONDecodeError as exc:
                raise ValidationError(f"config {path} is neither TOML nor JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"config {path} must contain a table/object at top level")
    return _build(data)


def params_to_toml(params: AnalysisParams) -> str:
    """Render params as a config-file fragment (used for --calibrate output)."""
    lines = ["[params]"]
    for f in dataclasses.fields(params):
        value = getattr(params, f.name)
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


DEFAULT_CONFIG_TOML = """\
# gazekit run configuration (all values optional; defaults shown)
student_id = "student"

[screen]
width = 1920
height = 1080

[params]
v_thresh_px_s = 721.0
rt_min_ms = 522
rt_max_ms = 5000
bounds_tol_px = 50.0
grid_cols = 20
grid_rows = 20

[columns]
timestamp = "timestamp_ms"
gaze = "gaze"
event_kind = "event_kind"
object_id = "object_id"
object_type = "object_type"
object_pos = "object_pos"
click_label = "click_label"

[matching]
strategy = "single-candidate"  # or "scan-forward"

[rules]
min_hit_rate = 0.70
max_mean_rt_ms = 1000.0
max_false_alarm_rate = 0.20
fatigue_rt_increase = 0.05
utilization_drop = 0.50

[comparison]
flat_threshold = 0.05
"""
