#!/usr/bin/env python3
"""Regenerate tests/fixtures.json from the real analysis service.

The web client's tests mock fetch() with canned payloads; generating those
payloads through the actual HTTP app (upload -> analyze -> fetch) keeps the
mock shapes honest instead of hand-maintained.

Run from frontend/:  python3 scripts/make-fixtures.py
"""
from __future__ import annotations

import json
import pathlib
import sys

from fastapi.testclient import TestClient

from gazekit.service import create_app
from gazekit.synth import SynthSpec, generate_session

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures.json"


def synth_level(hit_rate: float, seed: int) -> bytes:
    spec = SynthSpec(
        targets=3,
        distractors=1,
        hit_rate=hit_rate,
        incorrect_clicks=1,
        sample_dt_ms=50,
        seed=seed,
    )
    csv_text, _truth = generate_session(spec)
    return csv_text.encode()


def upload(client: TestClient, blobs: dict[str, bytes]) -> dict:
    files = [("files", (name, data, "text/csv")) for name, data in sorted(blobs.items())]
    resp = client.post("/v1/sessions", files=files)
    resp.raise_for_status()
    return resp.json()


def analyze(client: TestClient, session_id: str, body: dict) -> dict:
    resp = client.post(f"/v1/sessions/{session_id}/analyze", json=body)
    resp.raise_for_status()
    started = resp.json()
    full = client.get(f"/v1/analyses/{started['analysis_id']}")
    full.raise_for_status()
    return full.json()


def main() -> int:
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        client = TestClient(create_app(storage_dir=pathlib.Path(tmp)))

        three = {
            "level_1.csv": synth_level(1.0, seed=11),
            "level_2.csv": synth_level(1.0, seed=22),
            "level_3.csv": synth_level(2 / 3, seed=33),
        }
        session3 = upload(client, three)
        analysis3 = analyze(client, session3["session_id"], {})
        analysis3_thresh500 = analyze(
            client, session3["session_id"], {"params": {"v_thresh_px_s": 500.0}}
        )

        one = {"level_1.csv": three["level_1.csv"]}
        session1 = upload(client, one)
        analysis1 = analyze(client, session1["session_id"], {})

    fixtures = {
        "session3": session3,
        "analysis3": analysis3,
        "analysis3_thresh500": analysis3_thresh500,
        "session1": session1,
        "analysis1": analysis1,
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(fixtures, indent=1, sort_keys=True) + "\n")
    print(f"wrote {OUT} ({OUT.stat().st_size} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
