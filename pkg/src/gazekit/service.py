"""HTTP analysis service used by the web UI.

Versioned JSON API over the same pure pipeline the CLI runs:

- ``POST /v1/sessions`` — multipart CSV upload (one file per level);
  files are validated immediately and stored content-addressed, so a
  session id is a pure function of its bytes.
- ``POST /v1/sessions/{id}/analyze`` — run (or reuse) an analysis with
  parameter overrides; the analysis id hashes (session id, effective
  config), which makes the cache exact: identical inputs always return
  the identical stored payload.
- ``GET /v1/analyses/{id}/tables | /charts/{chart} | /calibration |
  /recommendations`` — projections of the stored payload.
- ``GET /v1/health``.

Analyses run synchronously (desk-scale files) in the request worker.
Results are written atomically (temp + rename); concurrent identical
requests may both compute, but they write identical bytes, so last
rename wins harmlessly. No authentication: bind to loopback.
"""
from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from dataclasses import replace
from pathlib import Path
from typing import Literal, Optional

from fastapi import FastAPI, File, HTTPException, UploadFile
from pydantic import BaseModel, ConfigDict

from .calibrate import build_calibration_report
from .config import AnalysisParams, EngineConfig, MATCH_STRATEGIES, RuleTable
from .errors import GazekitError, ValidationError
from .ingest import merge_levels, parse_rows
from .pipeline import analyze_session
from .report import CHART_IDS, build_chart_bundle, export_tables
from .types import to_jsonable

MAX_UPLOAD_BYTES = 10 * 1024 * 1024  # per level file
API_PREFIX = "/v1"

_LEVEL_DIGITS = re.compile(r"(\d+)")


class ParamsPatch(BaseModel):
    """Partial AnalysisParams; omitted fields keep engine defaults."""

    model_config = ConfigDict(extra="forbid")

    v_thresh_px_s: Optional[float] = None
    rt_min_ms: Optional[int] = None
    rt_max_ms: Optional[int] = None
    bounds_tol_px: Optional[float] = None
    grid_cols: Optional[int] = None
    grid_rows: Optional[int] = None


class RulesPatch(BaseModel):
    model_config = ConfigDict(extra="forbid")

    min_hit_rate: Optional[float] = None
    max_mean_rt_ms: Optional[float] = None
    max_false_alarm_rate: Optional[float] = None
    fatigue_rt_increase: Optional[float] = None
    utilization_drop: Optional[float] = None


class AnalyzeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    params: ParamsPatch = ParamsPatch()
    rules: RulesPatch = RulesPatch()
    match_strategy: Optional[Literal["single-candidate", "scan-forward"]] = None
    flat_trend_threshold: Optional[float] = None
    screen_w: Optional[int] = None
    screen_h: Optional[int] = None
    student_id: Optional[str] = None


class _Store:
    """Content-addressed file layout: blobs, session indexes, analyses."""

    def __init__(self, root: Path) -> None:
        self.root = root
        for sub in ("blobs", "sessions", "analyses"):
            (root / sub).mkdir(parents=True, exist_ok=True)

    def _write_atomic(self, path: Path, data: bytes) -> None:
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp, path)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise

    def put_blob(self, data: bytes) -> str:
        digest = hashlib.sha256(data).hexdigest()
        path = self.root / "blobs" / digest
        if not path.exists():
            self._write_atomic(path, data)
        return digest

    def get_blob(self, digest: str) -> bytes:
        path = self.root / "blobs" / digest
        if not path.exists():
            raise KeyError(digest)
        return path.read_bytes()

    def put_json(self, kind: str, key: str, payload: dict) -> None:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
        self._write_atomic(self.root / kind / f"{key}.json", text.encode("utf-8"))

    def get_json(self, kind: str, key: str) -> dict:
        path = self.root / kind / f"{key}.json"
        if not path.exists():
            raise KeyError(key)
        return json.loads(path.read_text(encoding="utf-8"))

    def has_json(self, kind: str, key: str) -> bool:
        return (self.root / kind / f"{key}.json").exists()


def _infer_level(filename: str, position: int) -> int:
    stem = Path(filename or f"upload_{position + 1}").stem
    match = _LEVEL_DIGITS.search(stem)
    return int(match.group(1)) if match else position + 1


def _effective_config(body: AnalyzeRequest) -> EngineConfig:
    base = EngineConfig()
    params_patch = {
        k: v for k, v in body.params.model_dump().items() if v is not None
    }
    rules_patch = {k: v for k, v in body.rules.model_dump().items() if v is not None}
    config = replace(
        base,
        params=replace(AnalysisParams(), **params_patch),
        rules=replace(RuleTable(), **rules_patch),
        match_strategy=body.match_strategy or base.match_strategy,
        flat_trend_threshold=(
            body.flat_trend_threshold
            if body.flat_trend_threshold is not None
            else base.flat_trend_threshold
        ),
        screen_w=body.screen_w or base.screen_w,
        screen_h=body.screen_h or base.screen_h,
        student_id=body.student_id or base.student_id,
    )
    try:
        return config.validate()
    except ValidationError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def _run_analysis(store: _Store, session: dict, config: EngineConfig) -> dict:
    records = []
    for entry in session["files"]:
        text = store.get_blob(entry["sha256"]).decode("utf-8-sig")
        records.append(
            parse_rows(
                text.splitlines(),
                config.columns,
                level=entry["level"],
                student_id=config.student_id,
                screen_w=config.screen_w,
                screen_h=config.screen_h,
                bounds_tol_px=config.params.bounds_tol_px,
                source=entry["name"],
            )
        )
    dataset = merge_levels(records)
    analysis = analyze_session(dataset, config)
    bundle = build_chart_bundle(analysis)

    table_docs = export_tables(
        [la.metrics for la in analysis.levels.values()],
        analysis.comparison,
        analysis.recommendations,
        format="json",
    )
    tables = {name: json.loads(doc) for name, doc in table_docs.items()}
    order = [f"level_{lvl}" for lvl in sorted(analysis.levels)]
    order += ["comparison", "recommendations"]

    try:
        calibration = {
            "available": True,
            **to_jsonable(build_calibration_report(dataset.records)),
        }
    except GazekitError as exc:
        calibration = {"available": False, "reason": str(exc)}

    return {
        "student_id": analysis.student_id,
        "levels": sorted(analysis.levels),
        "params": to_jsonable(config.params),
        "match_strategy": config.match_strategy,
        "metrics": {
            str(lvl): to_jsonable(la.metrics) for lvl, la in analysis.levels.items()
        },
        "comparison": to_jsonable(analysis.comparison),
        "recommendations": to_jsonable(analysis.recommendations),
        "tables": {"order": order, "documents": tables},
        "charts": {chart_id: to_jsonable(bundle.chart(chart_id)) for chart_id in CHART_IDS},
        "calibration": calibration,
    }


def create_app(storage_dir: str | os.PathLike | None = None) -> FastAPI:
    """Build the service app; storage defaults to GAZEKIT_STORAGE or a
    fresh temporary directory."""
    root = Path(
        storage_dir
        or os.environ.get("GAZEKIT_STORAGE")
        or tempfile.mkdtemp(prefix="gazekit-")
    )
    store = _Store(root)
    app = FastAPI(title="gazekit", version=_package_version())
    app.state.store = store

    @app.get(f"{API_PREFIX}/health")
    def health() -> dict:
        return {"status": "ok", "version": _package_version()}

    @app.post(f"{API_PREFIX}/sessions", status_code=201)
    def upload_session(files: list[UploadFile] = File(...)) -> dict:
        if not files:
            raise HTTPException(status_code=400, detail="no files uploaded")
        entries = []
        seen_levels: set[int] = set()
        for position, upload in enumerate(files):
            data = upload.file.read()
            if len(data) > MAX_UPLOAD_BYTES:
                raise HTTPException(
                    status_code=413,
                    detail=(
                        f"{upload.filename}: {len(data)} bytes exceeds the "
                        f"{MAX_UPLOAD_BYTES} byte upload limit"
                    ),
                )
            name = upload.filename or f"upload_{position + 1}.csv"
            level = _infer_level(name, position)
            if level in seen_levels:
                raise HTTPException(
                    status_code=400,
                    detail=f"{name}: level {level} appears more than once",
                )
            seen_levels.add(level)
            # Validate now so bad files fail the upload, not the analysis.
            try:
                record = parse_rows(
                    data.decode("utf-8-sig").splitlines(),
                    EngineConfig().columns,
                    level=level,
                    student_id="upload",
                    screen_w=EngineConfig().screen_w,
                    screen_h=EngineConfig().screen_h,
                    bounds_tol_px=AnalysisParams().bounds_tol_px,
                    source=name,
                )
            except UnicodeDecodeError as exc:
                raise HTTPException(
                    status_code=400, detail=f"{name}: not valid UTF-8 ({exc})"
                ) from exc
            except ValidationError as exc:
                raise HTTPException(
                    status_code=400, detail=f"{name}: {exc}"
                ) from exc
            entries.append(
                {
                    "name": name,
                    "sha256": store.put_blob(data),
                    "level": level,
                    "rows_total": record.rows_total,
                    "rows_dropped": record.rows_dropped,
                    "samples": len(record.samples),
                    "warnings": record.warnings,
                }
            )
        entries.sort(key=lambda e: e["level"])
        session_id = hashlib.sha256(
            "\n".join(f"{e['level']}:{e['sha256']}" for e in entries).encode()
        ).hexdigest()
        session = {"session_id": session_id, "files": entries}
        store.put_json("sessions", session_id, session)
        return session

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/analyze")
    def analyze(session_id: str, body: AnalyzeRequest = AnalyzeRequest()) -> dict:
        try:
            session = store.get_json("sessions", session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        config = _effective_config(body)
        cache_key = hashlib.sha256(
            (
                session_id
                + "\n"
                + json.dumps(to_jsonable(config), sort_keys=True)
            ).encode()
        ).hexdigest()
        if store.has_json("analyses", cache_key):
            return {"analysis_id": cache_key, "cached": True}
        try:
            payload = _run_analysis(store, session, config)
        except ValidationError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        payload["analysis_id"] = cache_key
        payload["session_id"] = session_id
        store.put_json("analyses", cache_key, payload)
        return {"analysis_id": cache_key, "cached": False}

    def _load_analysis(analysis_id: str) -> dict:
        try:
            return store.get_json("analyses", analysis_id)
        except KeyError:
            raise HTTPException(
                status_code=404, detail=f"unknown analysis {analysis_id}"
            )

    @app.get(f"{API_PREFIX}/analyses/{{analysis_id}}")
    def get_analysis(analysis_id: str) -> dict:
        return _load_analysis(analysis_id)

    @app.get(f"{API_PREFIX}/analyses/{{analysis_id}}/tables")
    def get_tables(analysis_id: str) -> dict:
        payload = _load_analysis(analysis_id)
        return {"analysis_id": analysis_id, **payload["tables"]}

    @app.get(f"{API_PREFIX}/analyses/{{analysis_id}}/charts/{{chart_id}}")
    def get_chart(analysis_id: str, chart_id: str) -> dict:
        payload = _load_analysis(analysis_id)
        if chart_id not in CHART_IDS:
            raise HTTPException(
                status_code=404,
                detail=f"unknown chart {chart_id!r}; known: {', '.join(CHART_IDS)}",
            )
        return {
            "analysis_id": analysis_id,
            "chart": chart_id,
            "series": payload["charts"][chart_id],
        }

    @app.get(f"{API_PREFIX}/analyses/{{analysis_id}}/calibration")
    def get_calibration(analysis_id: str) -> dict:
        payload = _load_analysis(analysis_id)
        return {"analysis_id": analysis_id, **payload["calibration"]}

    @app.get(f"{API_PREFIX}/analyses/{{analysis_id}}/recommendations")
    def get_recommendations(analysis_id: str) -> dict:
        payload = _load_analysis(analysis_id)
        return {
            "analysis_id": analysis_id,
            "recommendations": payload["recommendations"],
        }

    return app


def _package_version() -> str:
    from . import __version__

    return __version__
