"""Self-contained deterministic SVG snapshots of the chart bundle.

Rendering is a pure string transformation of the bundle: no timestamps,
no randomness, fixed attribute order, and fixed-precision coordinates,
so the same bundle always produces byte-identical documents (golden-file
friendly). The per-level surfaces draw the first (lowest-numbered) level;
the full per-level series remain available in the bundle JSON.

The scanpath heatmap is smoothed with a small Gaussian kernel for display
only — the canonical grid counts in the bundle stay raw.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import UnknownChart
from .report import CHART_IDS, ChartBundle

WIDTH = 960.0
HEIGHT = 540.0
MARGIN = 48.0
HEATMAP_SIGMA_CELLS = 1.5

_TYPE_FILL = {
    "mushroom_target": "#2e8b57",
    "blue_flower": "#4169e1",
    "yellow_purple_flower": "#9370db",
    "unknown": "#9e9e9e",
}
_CLICK_STROKE = {
    "correct": "#1a7f37",
    "incorrect": "#c62828",
    "neutral": "#757575",
    None: "#757575",
}
_FIXATION_FILL = "#2d6cdf"
_SACCADE_FILL = "#e4572e"


def _fmt(value: float) -> str:
    """Fixed two-decimal coordinate text with trailing zeros trimmed."""
    text = f"{value:.2f}"
    return text.rstrip("0").rstrip(".") if "." in text else text


def _el(tag: str, attrs: dict, body: str | None = None) -> str:
    parts = "".join(f' {k}="{v}"' for k, v in attrs.items())
    if body is None:
        return f"<{tag}{parts}/>"
    return f"<{tag}{parts}>{body}</{tag}>"


def _text(x: float, y: float, content: str, size: int = 12, anchor: str = "start") -> str:
    return _el(
        "text",
        {
            "x": _fmt(x),
            "y": _fmt(y),
            "font-family": "monospace",
            "font-size": str(size),
            "text-anchor": anchor,
            "fill": "#222222",
        },
        _escape(content),
    )


def _escape(content: str) -> str:
    return (
        content.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def _document(title: str, body: Iterable[str]) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(WIDTH)} '
        f'{_fmt(HEIGHT)}" width="{_fmt(WIDTH)}" height="{_fmt(HEIGHT)}">'
    )
    background = _el(
        "rect",
        {"x": "0", "y": "0", "width": _fmt(WIDTH), "height": _fmt(HEIGHT), "fill": "#ffffff"},
    )
    title_el = _el("title", {}, _escape(title))
    return head + title_el + background + "".join(body) + "</svg>\n"


def _xscale(t: float, t_max: float, left: float = MARGIN, right: float = WIDTH - MARGIN) -> float:
    span = t_max if t_max > 0 else 1.0
    return left + (t / span) * (right - left)


def _first_level(chart: dict) -> dict | None:
    levels = chart.get("levels") or []
    return levels[0] if levels else None


# ---------------------------------------------------------------------------
# Per-chart renderers


def _render_timeline(chart: dict) -> str:
    series = _first_level(chart)
    if series is None:
        return _document("Timeline", [_text(MARGIN, HEIGHT / 2, "no data")])
    episodes = series["episodes"]
    duration = max(
        [series.get("duration_ms") or 0]
        + [e["appear_ms"] for e in episodes]
        + [e["disappear_ms"] or e["appear_ms"] for e in episodes]
        + [c["timestamp_ms"] for c in series["clicks"]]
    )
    body: list[str] = []
    row_h = (HEIGHT - 2 * MARGIN) / max(len(episodes), 1)
    bar_h = min(max(row_h * 0.6, 4.0), 24.0)
    for i, ep in enumerate(episodes):
        x0 = _xscale(ep["appear_ms"], duration)
        end_ms = ep["disappear_ms"] if ep["disappear_ms"] is not None else duration
        x1 = _xscale(end_ms, duration)
        y = MARGIN + i * row_h + (row_h - bar_h) / 2
        body.append(
            _el(
                "rect",
                {
                    "class": "episode",
                    "x": _fmt(x0),
                    "y": _fmt(y),
                    "width": _fmt(max(x1 - x0, 1.0)),
                    "height": _fmt(bar_h),
                    "fill": _TYPE_FILL.get(ep["object_type"], _TYPE_FILL["unknown"]),
                },
            )
        )
    for click in series["clicks"]:
        x = _xscale(click["timestamp_ms"], duration)
        body.append(
            _el(
                "line",
                {
                    "class": "click",
                    "x1": _fmt(x),
                    "y1": _fmt(MARGIN / 2),
                    "x2": _fmt(x),
                    "y2": _fmt(HEIGHT - MARGIN / 2),
                    "stroke": _CLICK_STROKE.get(click["label"], "#757575"),
                    "stroke-dasharray": "4 3",
                },
            )
        )
    for match in series["matches"]:
        x0 = _xscale(match["target_appear_ms"], duration)
        x1 = _xscale(match["click_ms"], duration)
        body.append(
            _el(
                "line",
                {
                    "class": "match",
                    "x1": _fmt(x0),
                    "y1": _fmt(HEIGHT - MARGIN / 2),
                    "x2": _fmt(x1),
                    "y2": _fmt(HEIGHT - MARGIN / 2),
                    "stroke": "#1a7f37",
                    "stroke-width": "2",
                },
            )
        )
    body.append(_text(MARGIN, MARGIN / 2, f"objects and clicks over {duration} ms"))
    return _document("Timeline", body)


def _smooth_heatmap(grid: Sequence[Sequence[int]], sigma: float) -> list[list[float]]:
    """Separable Gaussian blur with edge renormalization, display-only."""
    radius = max(int(math.ceil(3 * sigma)), 1)
    kernel = [math.exp(-(d * d) / (2 * sigma * sigma)) for d in range(-radius, radius + 1)]
    rows = len(grid)
    cols = len(grid[0]) if rows else 0

    def blur_line(line: list[float]) -> list[float]:
        out = []
        for i in range(len(line)):
            acc = weight = 0.0
            for k, w in enumerate(kernel):
                j = i + k - radius
                if 0 <= j < len(line):
                    acc += w * line[j]
                    weight += w
            out.append(acc / weight if weight else 0.0)
        return out

    horizontal = [blur_line([float(v) for v in row]) for row in grid]
    smoothed = [[0.0] * cols for _ in range(rows)]
    for c in range(cols):
        column = blur_line([horizontal[r][c] for r in range(rows)])
        for r in range(rows):
            smoothed[r][c] = column[r]
    return smoothed


def _render_scanpath(chart: dict) -> str:
    series = _first_level(chart)
    if series is None:
        return _document("Scanpath", [_text(MARGIN, HEIGHT / 2, "no data")])
    screen_w, screen_h = series["screen"]
    sx = (WIDTH - 2 * MARGIN) / screen_w
    sy = (HEIGHT - 2 * MARGIN) / screen_h

    def px(x: float) -> float:
        return MARGIN + x * sx

    def py(y: float) -> float:
        return MARGIN + y * sy

    body: list[str] = [
        _el(
            "rect",
            {
                "class": "screen",
                "x": _fmt(MARGIN),
                "y": _fmt(MARGIN),
                "width": _fmt(WIDTH - 2 * MARGIN),
                "height": _fmt(HEIGHT - 2 * MARGIN),
                "fill": "none",
                "stroke": "#444444",
            },
        )
    ]
    heatmap = series.get("heatmap") or []
    if heatmap:
        smoothed = _smooth_heatmap(heatmap, HEATMAP_SIGMA_CELLS)
        peak = max((v for row in smoothed for v in row), default=0.0)
        rows = len(smoothed)
        cols = len(smoothed[0])
        cell_w = (WIDTH - 2 * MARGIN) / cols
        cell_h = (HEIGHT - 2 * MARGIN) / rows
        for r in range(rows):
            for c in range(cols):
                if peak <= 0 or smoothed[r][c] <= 0:
                    continue
                opacity = 0.55 * smoothed[r][c] / peak
                if opacity < 0.004:
                    continue
                body.append(
                    _el(
                        "rect",
                        {
                            "class": "heat",
                            "x": _fmt(MARGIN + c * cell_w),
                            "y": _fmt(MARGIN + r * cell_h),
                            "width": _fmt(cell_w),
                            "height": _fmt(cell_h),
                            "fill": "#ff8c00",
                            "fill-opacity": f"{opacity:.3f}",
                        },
                    )
                )
    for point in series["saccade_points"]:
        body.append(
            _el(
                "circle",
                {
                    "class": "saccade",
                    "cx": _fmt(px(point["x"])),
                    "cy": _fmt(py(point["y"])),
                    "r": "1.5",
                    "fill": _SACCADE_FILL,
                },
            )
        )
    for point in series["fixation_points"]:
        body.append(
            _el(
                "circle",
                {
                    "class": "fixation",
                    "cx": _fmt(px(point["x"])),
                    "cy": _fmt(py(point["y"])),
                    "r": "2.5",
                    "fill": _FIXATION_FILL,
                },
            )
        )
    for click in series["clicks"]:
        if not click["position_px"]:
            continue
        cx, cy = px(click["position_px"][0]), py(click["position_px"][1])
        stroke = _CLICK_STROKE.get(click["label"], "#757575")
        for dx0, dy0, dx1, dy1 in ((-5, -5, 5, 5), (-5, 5, 5, -5)):
            body.append(
                _el(
                    "line",
                    {
                        "class": "click",
                        "x1": _fmt(cx + dx0),
                        "y1": _fmt(cy + dy0),
                        "x2": _fmt(cx + dx1),
                        "y2": _fmt(cy + dy1),
                        "stroke": stroke,
                        "stroke-width": "2",
                    },
                )
            )
    body.append(_text(MARGIN, MARGIN - 10, "gaze scanpath with attention heatmap"))
    return _document("Scanpath", body)


def _render_velocity(chart: dict) -> str:
    series = _first_level(chart)
    if series is None:
        return _document("Velocity", [_text(MARGIN, HEIGHT / 2, "no data")])
    points = series["points"]
    threshold = series["threshold_px_s"]
    t_max = max([p["t"] for p in points] + [c for c in series["clicks"]] + [1])
    v_max = max([p["v"] for p in points] + [threshold]) * 1.05 or 1.0

    def vy(v: float) -> float:
        return HEIGHT - MARGIN - (v / v_max) * (HEIGHT - 2 * MARGIN)

    body: list[str] = []
    if len(points) >= 2:
        path = " ".join(
            f"{'M' if i == 0 else 'L'}{_fmt(_xscale(p['t'], t_max))},{_fmt(vy(p['v']))}"
            for i, p in enumerate(points)
        )
        body.append(
            _el(
                "path",
                {"class": "trace", "d": path, "fill": "none", "stroke": "#888888"},
            )
        )
    for p in points:
        fill = _FIXATION_FILL if p["label"] == "fixation" else _SACCADE_FILL
        body.append(
            _el(
                "circle",
                {
                    "class": p["label"],
                    "cx": _fmt(_xscale(p["t"], t_max)),
                    "cy": _fmt(vy(p["v"])),
                    "r": "2",
                    "fill": fill,
                },
            )
        )
    ty = vy(threshold)
    body.append(
        _el(
            "line",
            {
                "class": "threshold",
                "x1": _fmt(MARGIN),
                "y1": _fmt(ty),
                "x2": _fmt(WIDTH - MARGIN),
                "y2": _fmt(ty),
                "stroke": "#444444",
                "stroke-dasharray": "6 4",
            },
        )
    )
    body.append(
        _text(WIDTH - MARGIN, ty - 6, f"threshold {_fmt(threshold)} px/s", anchor="end")
    )
    for t in series["clicks"]:
        x = _xscale(t, t_max)
        body.append(
            _el(
                "line",
                {
                    "class": "click",
                    "x1": _fmt(x),
                    "y1": _fmt(MARGIN),
                    "x2": _fmt(x),
                    "y2": _fmt(HEIGHT - MARGIN),
                    "stroke": "#757575",
                    "stroke-dasharray": "2 3",
                },
            )
        )
    body.append(_text(MARGIN, MARGIN - 10, "gaze velocity (px/s) over time (ms)"))
    return _document("Velocity", body)


def _bar(x: float, y: float, w: float, h: float, fill: str, cls: str) -> str:
    return _el(
        "rect",
        {
            "class": cls,
            "x": _fmt(x),
            "y": _fmt(y),
            "width": _fmt(w),
            "height": _fmt(max(h, 0.0)),
            "fill": fill,
        },
    )


def _render_dashboard(chart: dict) -> str:
    series = _first_level(chart)
    if series is None:
        return _document("Dashboard", [_text(MARGIN, HEIGHT / 2, "no data")])
    body: list[str] = []
    half_w = WIDTH / 2
    half_h = HEIGHT / 2

    # Panel 1 (top-left): targets matched vs missed.
    targets = series["targets"]
    total = max(targets["shown"], 1)
    panel_bottom = half_h - MARGIN
    for i, (name, count, fill) in enumerate(
        (
            ("matched", targets["matched"], "#2e8b57"),
            ("missed", targets["missed"], "#c62828"),
        )
    ):
        h = (count / total) * (half_h - 2 * MARGIN)
        x = MARGIN + 40 + i * 120
        body.append(_bar(x, panel_bottom - h, 60, h, fill, "target-share"))
        body.append(_text(x, panel_bottom + 16, f"{name} {count}"))
    body.append(
        _text(MARGIN, MARGIN - 10, f"targets: hit rate {targets['hit_rate_pct']}%")
    )

    # Panel 2 (top-right): reaction-time histogram.
    hist = series["rt"]["histogram"]
    counts = hist["counts"]
    if counts:
        peak = max(counts) or 1
        bin_w = (half_w - 2 * MARGIN) / len(counts)
        for i, count in enumerate(counts):
            h = (count / peak) * (half_h - 2 * MARGIN)
            body.append(
                _bar(
                    half_w + MARGIN + i * bin_w,
                    panel_bottom - h,
                    max(bin_w - 1.0, 0.5),
                    h,
                    "#4169e1",
                    "rt-bin",
                )
            )
    body.append(
        _text(
            half_w + MARGIN,
            MARGIN - 10,
            f"reaction times, {hist['bin_ms']} ms bins "
            f"(mean {series['rt']['mean_ms']:.1f} ms)",
        )
    )

    # Panel 3 (bottom-left): movement shares.
    movement = series["movement"]
    share_w = half_w - 2 * MARGIN
    fx_w = movement["fixation_share"] * share_w
    sc_w = movement["saccade_share"] * share_w
    bar_y = half_h + (half_h - 2 * MARGIN) / 2
    body.append(_bar(MARGIN, bar_y, fx_w, 40, _FIXATION_FILL, "movement-fixation"))
    body.append(_bar(MARGIN + fx_w, bar_y, sc_w, 40, _SACCADE_FILL, "movement-saccade"))
    counts_m = movement["counts"]
    body.append(
        _text(
            MARGIN,
            bar_y - 12,
            f"fixation {movement['fixation_pct']}% ({counts_m['fixation']}) / "
            f"saccade {movement['saccade_pct']}% ({counts_m['saccade']})",
        )
    )

    # Panel 4 (bottom-right): headline numbers.
    spatial = series["spatial"]
    clicks = series["clicks"]
    lines = (
        f"level {series['level']}",
        f"false alarms {clicks['false_alarm_pct']}%",
        f"clicks +{clicks['correct']} / -{clicks['incorrect']} / ={clicks['neutral']}",
        f"path {spatial['path_length_px']:.0f} px",
        f"screen used {spatial['utilization_pct']}%",
    )
    for i, line in enumerate(lines):
        body.append(_text(half_w + MARGIN, half_h + MARGIN + i * 22, line, size=14))
    return _document("Dashboard", body)


def _render_multilevel(chart: dict) -> str:
    if not chart.get("available"):
        return _document(
            "Multilevel comparison",
            [
                _text(
                    MARGIN,
                    HEIGHT / 2,
                    chart.get("reason", "comparison unavailable"),
                    size=16,
                )
            ],
        )
    body: list[str] = []
    half_w = WIDTH / 2
    half_h = HEIGHT / 2
    origins = ((0.0, 0.0), (half_w, 0.0), (0.0, half_h), (half_w, half_h))
    for (ox, oy), panel in zip(origins, chart["panels"]):
        values = panel["values"]
        peak = max([abs(v) for v in values] + [1e-9])
        plot_w = half_w - 2 * MARGIN
        plot_h = half_h - 2 * MARGIN
        bar_w = plot_w / max(len(values), 1) * 0.6
        step = plot_w / max(len(values), 1)
        for i, (level, value) in enumerate(zip(panel["levels"], values)):
            h = (abs(value) / peak) * plot_h
            x = ox + MARGIN + i * step + (step - bar_w) / 2
            y = oy + half_h - MARGIN - h
            body.append(_bar(x, y, bar_w, h, "#4f7cac", "level-bar"))
            body.append(
                _text(x, oy + half_h - MARGIN + 14, f"L{level}", size=11)
            )
        body.append(
            _text(
                ox + MARGIN,
                oy + MARGIN - 8,
                f"{panel['title']} ({panel['direction']})",
                size=13,
            )
        )
    return _document("Multilevel comparison", body)


_RENDERERS = {
    "timeline": _render_timeline,
    "scanpath": _render_scanpath,
    "velocity": _render_velocity,
    "dashboard": _render_dashboard,
    "multilevel": _render_multilevel,
}


def render_svg(bundle: ChartBundle, which: str) -> str:
    """Render one chart id from the bundle as SVG text."""
    if which not in CHART_IDS:
        raise UnknownChart(which, CHART_IDS)
    return _RENDERERS[which](bundle.chart(which))
