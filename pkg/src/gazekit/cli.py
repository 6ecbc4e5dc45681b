"""Command-line interface: analyze recorded sessions, generate synthetic
ones, and serve the HTTP API.

Exit codes: 0 success, 1 I/O failure (unreadable/missing files), 2
validation failure (bad flags, bad config, bad data). All artifacts are
written atomically (temp file + rename) and contain no timestamps, so a
rerun over identical inputs produces byte-identical output; the manifest
records input and artifact hashes to make that checkable.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import re
import sys
import tempfile
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from .calibrate import build_calibration_report
from .config import EngineConfig, MATCH_STRATEGIES, load_config, params_to_toml
from .errors import IOFailure, ValidationError
from .ingest import load_level_file, merge_levels
from .pipeline import analyze_session
from .report import (
    CHART_IDS,
    TABLE_FORMATS,
    build_chart_bundle,
    chart_bundle_json,
    export_tables,
)
from .svg import render_svg
from .synth import SynthSpec, write_session
from .types import to_jsonable

log = logging.getLogger("gazekit")

_LEVEL_RE = re.compile(r"(\d+)")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def _sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _collect_inputs(raw_inputs: Sequence[str]) -> list[Path]:
    files: list[Path] = []
    for raw in raw_inputs:
        path = Path(raw)
        if path.is_dir():
            files.extend(sorted(p for p in path.glob("*.csv") if p.is_file()))
        elif path.is_file():
            files.append(path)
        else:
            raise IOFailure(f"input {path} does not exist")
    if not files:
        raise IOFailure(f"no .csv input files found under {', '.join(raw_inputs)}")
    return files


def _infer_level(path: Path, position: int) -> int:
    match = _LEVEL_RE.search(path.stem)
    return int(match.group(1)) if match else position + 1


def _config_from_args(args: argparse.Namespace) -> EngineConfig:
    config = load_config(args.config) if args.config else EngineConfig()
    overrides = {}
    if args.match_strategy:
        overrides["match_strategy"] = args.match_strategy
    if args.student:
        overrides["student_id"] = args.student
    param_overrides = {}
    if args.v_thresh is not None:
        param_overrides["v_thresh_px_s"] = args.v_thresh
    if args.rt_min is not None:
        param_overrides["rt_min_ms"] = args.rt_min
    if args.rt_max is not None:
        param_overrides["rt_max_ms"] = args.rt_max
    if param_overrides:
        overrides["params"] = replace(config.params, **param_overrides)
    if overrides:
        config = replace(config, **overrides)
    return config.validate()


def run_analyze(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    files = _collect_inputs(args.input)
    if args.level is not None and len(files) > 1:
        raise ValidationError("--level only applies to a single input file")

    records = []
    inputs_meta = []
    for position, path in enumerate(files):
        level = args.level if args.level is not None else _infer_level(path, position)
        record = load_level_file(
            path,
            config.columns,
            level=level,
            student_id=config.student_id,
            screen_w=config.screen_w,
            screen_h=config.screen_h,
            bounds_tol_px=config.params.bounds_tol_px,
        )
        records.append(record)
        inputs_meta.append(
            {
                "name": path.name,
                "sha256": hashlib.sha256(path.read_bytes()).hexdigest(),
                "level": level,
                "rows_total": record.rows_total,
                "rows_dropped": record.rows_dropped,
                "samples": len(record.samples),
            }
        )
        for warning in record.warnings:
            log.warning("%s: %s", path.name, warning)

    dataset = merge_levels(records)
    analysis = analyze_session(dataset, config)
    bundle = build_chart_bundle(analysis)

    out_dir = Path(args.out)
    artifacts: dict[str, str] = {}

    table_docs = export_tables(
        [la.metrics for la in analysis.levels.values()],
        analysis.comparison,
        analysis.recommendations,
        format=args.table_format,
    )
    for name, text in table_docs.items():
        rel = f"tables/{name}.{args.table_format}"
        _atomic_write(out_dir / rel, text)
        artifacts[rel] = _sha256_text(text)

    for chart_id, text in chart_bundle_json(bundle).items():
        rel = f"charts/{chart_id}.json"
        _atomic_write(out_dir / rel, text)
        artifacts[rel] = _sha256_text(text)

    for chart_id in CHART_IDS:
        text = render_svg(bundle, chart_id)
        rel = f"charts/{chart_id}.svg"
        _atomic_write(out_dir / rel, text)
        artifacts[rel] = _sha256_text(text)

    if args.calibrate:
        # Re-ingest with an effectively unlimited bounds tolerance so the
        # retention sweep can see samples the configured tolerance drops.
        raw_samples = []
        for position, path in enumerate(files):
            level = (
                args.level if args.level is not None else _infer_level(path, position)
            )
            raw = load_level_file(
                path,
                config.columns,
                level=level,
                student_id=config.student_id,
                screen_w=config.screen_w,
                screen_h=config.screen_h,
                bounds_tol_px=1e9,
            )
            raw_samples.extend(raw.samples)
        report = build_calibration_report(dataset.records, raw_samples=raw_samples)
        text = json.dumps(to_jsonable(report), sort_keys=True, indent=2) + "\n"
        _atomic_write(out_dir / "calibration.json", text)
        artifacts["calibration.json"] = _sha256_text(text)
        suggested = replace(
            config.params,
            v_thresh_px_s=report.chosen_threshold_px_s,
            rt_min_ms=report.rt_window_ms[0],
            rt_max_ms=report.rt_window_ms[1],
        )
        toml_text = params_to_toml(suggested)
        _atomic_write(out_dir / "params_suggested.toml", toml_text)
        artifacts["params_suggested.toml"] = _sha256_text(toml_text)

    manifest = {
        "tool": "gazekit",
        "version": _version(),
        "student_id": analysis.student_id,
        "levels": sorted(analysis.levels),
        "match_strategy": config.match_strategy,
        "inputs": inputs_meta,
        "config": to_jsonable(config),
        "artifacts": artifacts,
    }
    _atomic_write(
        out_dir / "manifest.json",
        json.dumps(manifest, sort_keys=True, indent=2) + "\n",
    )
    print(f"analyzed {len(files)} level file(s) -> {out_dir}")
    return 0


def run_synth(args: argparse.Namespace) -> int:
    spec = SynthSpec(
        targets=args.targets,
        distractors=args.distractors,
        hit_rate=args.hit_rate,
        rt_mean_ms=args.rt_mean,
        rt_spread_ms=args.rt_spread,
        incorrect_clicks=args.incorrect_clicks,
        invalid_rows=args.invalid_rows,
        gaze_rows=args.gaze_rows,
        sample_dt_ms=args.sample_dt_ms,
        seed=args.seed,
        screen_w=args.screen_w,
        screen_h=args.screen_h,
    )
    try:
        spec.validate()
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    csv_path, truth_path = write_session(spec, args.out)
    print(f"wrote {csv_path} and {truth_path}")
    return 0


def run_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(storage_dir=args.storage)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _version() -> str:
    from . import __version__

    return __version__


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazekit",
        description="Attention-game eye-tracking analysis toolkit",
    )
    parser.add_argument("--version", action="version", version=f"gazekit {_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze recorded level CSV files")
    analyze.add_argument(
        "--input",
        nargs="+",
        required=True,
        metavar="PATH",
        help="level CSV files and/or directories containing them",
    )
    analyze.add_argument("--config", help="TOML or JSON config file")
    analyze.add_argument("--out", required=True, help="output directory")
    analyze.add_argument(
        "--level", type=int, help="level number (single input file only)"
    )
    analyze.add_argument(
        "--calibrate",
        action="store_true",
        help="also write a data-driven parameter calibration report",
    )
    analyze.add_argument(
        "--match-strategy",
        choices=MATCH_STRATEGIES,
        help="target-click matching strategy (default from config)",
    )
    analyze.add_argument(
        "--table-format", choices=TABLE_FORMATS, default="csv", help="table output format"
    )
    analyze.add_argument("--student", help="student id recorded in outputs")
    analyze.add_argument("--v-thresh", type=float, help="velocity threshold px/s")
    analyze.add_argument("--rt-min", type=int, help="reaction window lower bound ms")
    analyze.add_argument("--rt-max", type=int, help="reaction window upper bound ms")
    analyze.set_defaults(func=run_analyze)

    synth = sub.add_parser("synth", help="generate a synthetic level file")
    synth.add_argument("--targets", type=int, default=16)
    synth.add_argument("--distractors", type=int, default=8)
    synth.add_argument("--hit-rate", type=float, default=0.9375)
    synth.add_argument("--rt-mean", type=float, default=1200.0)
    synth.add_argument("--rt-spread", type=float, default=250.0)
    synth.add_argument("--incorrect-clicks", type=int, default=0)
    synth.add_argument(
        "--invalid-rows",
        type=int,
        default=0,
        help="invalid gaze rows to inject (cleaning-test support)",
    )
    synth.add_argument(
        "--gaze-rows", type=int, default=None, help="gaze sample count override"
    )
    synth.add_argument("--sample-dt-ms", type=int, default=10)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--screen-w", type=int, default=1920)
    synth.add_argument("--screen-h", type=int, default=1080)
    synth.add_argument("--out", required=True, help="output CSV path")
    synth.set_defaults(func=run_synth)

    serve = sub.add_parser("serve", help="run the HTTP analysis service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument(
        "--storage", default=None, help="directory for uploaded sessions and results"
    )
    serve.set_defaults(func=run_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=os.environ.get("GAZEKIT_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IOFailure, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
