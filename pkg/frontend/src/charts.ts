// SVG/HTML renderers for the per-level and comparison figures. All inputs
// come straight from analysis payloads; these functions only place them on
// screen. Scale math here affects pixel positions, never displayed values.

import { escapeHtml, num, svgNum } from "./bind";
import type {
  DashboardLevel,
  MultilevelChart,
  RtHistogram,
  ScanpathLevel,
  TimelineLevel,
  VelocityLevel,
} from "./types";

const W = 760;

function scaler(domainMax: number, rangePx: number): (v: number) => number {
  const span = domainMax > 0 ? domainMax : 1;
  return (v) => (v / span) * rangePx;
}

export function timelineChart(series: TimelineLevel, base: string): string {
  const pad = { left: 16, right: 16, top: 28, bottom: 24 };
  const rows = series.episodes.length || 1;
  const rowH = Math.min(26, Math.max(10, 220 / rows));
  const h = pad.top + rows * rowH + pad.bottom;
  const plotW = W - pad.left - pad.right;
  const sx = scaler(series.duration_ms, plotW);
  const x = (t: number) => pad.left + sx(t);

  const rowOf = new Map<string, number>();
  series.episodes.forEach((ep, i) => rowOf.set(ep.object_id, i));

  const bars = series.episodes
    .map((ep, i) => {
      const x0 = x(ep.appear_ms);
      const x1 = x(ep.disappear_ms ?? series.duration_ms);
      const y = pad.top + i * rowH + 2;
      const kind = ep.object_type.includes("target") ? "target" : "distractor";
      return `<rect class="episode episode-${kind}" data-object-id="${escapeHtml(ep.object_id)}" x="${x0.toFixed(1)}" y="${y.toFixed(1)}" width="${Math.max(1, x1 - x0).toFixed(1)}" height="${(rowH - 4).toFixed(1)}" rx="2"/>`;
    })
    .join("");

  const clickMarks = series.clicks
    .map((c) => {
      const cx = x(c.timestamp_ms).toFixed(1);
      return `<line class="click click-${escapeHtml(c.label)}" x1="${cx}" x2="${cx}" y1="${pad.top - 4}" y2="${h - pad.bottom + 4}"/>`;
    })
    .join("");

  const connectors = series.matches
    .map((m) => {
      const row = rowOf.get(m.target_id);
      if (row === undefined) return "";
      const y = (pad.top + row * rowH + rowH / 2).toFixed(1);
      return `<line class="match-connector" x1="${x(m.target_appear_ms).toFixed(1)}" x2="${x(m.click_ms).toFixed(1)}" y1="${y}" y2="${y}"/>`;
    })
    .join("");

  const caption =
    `<text class="chart-note" x="${pad.left}" y="16">object timeline — duration ` +
    `${svgNum(`${base}.duration_ms`, series.duration_ms)}<tspan> ms</tspan></text>`;

  return `<svg class="chart timeline-chart" viewBox="0 0 ${W} ${h}" role="img">${caption}${bars}${connectors}${clickMarks}</svg>`;
}

export function scanpathChart(series: ScanpathLevel, base: string): string {
  const [screenW, screenH] = series.screen;
  const plotW = 480;
  const plotH = Math.round((plotW * screenH) / Math.max(screenW, 1));
  const pad = { left: 12, top: 28 };
  const kx = scaler(screenW, plotW);
  const ky = scaler(screenH, plotH);
  const x = (v: number) => pad.left + kx(v);
  const y = (v: number) => pad.top + ky(v);

  const rows = series.heatmap.length;
  const cols = rows > 0 ? series.heatmap[0].length : 0;
  const peak = Math.max(1, ...series.heatmap.flat());
  const cellW = plotW / Math.max(cols, 1);
  const cellH = plotH / Math.max(rows, 1);
  const cells: string[] = [];
  series.heatmap.forEach((row, r) => {
    row.forEach((count, c) => {
      if (count === 0) return;
      cells.push(
        `<rect class="heat-cell" x="${(pad.left + c * cellW).toFixed(1)}" y="${(pad.top + r * cellH).toFixed(1)}" width="${cellW.toFixed(1)}" height="${cellH.toFixed(1)}" fill-opacity="${(0.15 + 0.6 * (count / peak)).toFixed(3)}"/>`,
      );
    });
  });

  const dot = (cls: string) => (p: { x: number; y: number }) =>
    `<circle class="${cls}" cx="${x(p.x).toFixed(1)}" cy="${y(p.y).toFixed(1)}" r="1.5"/>`;
  const saccades = series.saccade_points.map(dot("gaze-saccade")).join("");
  const fixations = series.fixation_points.map(dot("gaze-fixation")).join("");

  const events = series.fixation_events
    .map((ev) => {
      const r = Math.min(18, 3 + Math.sqrt(Math.max(ev.duration_ms, 0)) / 6);
      return `<circle class="fixation-event" cx="${x(ev.cx).toFixed(1)}" cy="${y(ev.cy).toFixed(1)}" r="${r.toFixed(1)}"/>`;
    })
    .join("");

  const clicks = series.clicks
    .map((c) => {
      if (!c.position_px) return "";
      const [px, py] = c.position_px;
      return `<circle class="click-dot click-${escapeHtml(c.label)}" cx="${x(px).toFixed(1)}" cy="${y(py).toFixed(1)}" r="5"/>`;
    })
    .join("");

  const caption =
    `<text class="chart-note" x="${pad.left}" y="16">gaze map — screen ` +
    `${svgNum(`${base}.screen.0`, screenW)}<tspan>×</tspan>` +
    `${svgNum(`${base}.screen.1`, screenH)}<tspan> px</tspan></text>`;
  const frame = `<rect class="screen-frame" x="${pad.left}" y="${pad.top}" width="${plotW}" height="${plotH}"/>`;

  return `<svg class="chart scanpath-chart" viewBox="0 0 ${plotW + 24} ${plotH + pad.top + 12}" role="img">${caption}${frame}${cells.join("")}${saccades}${fixations}${events}${clicks}</svg>`;
}

export function velocityChart(series: VelocityLevel, base: string): string {
  const pad = { left: 16, right: 16, top: 30, bottom: 20 };
  const h = 260;
  const plotW = W - pad.left - pad.right;
  const plotH = h - pad.top - pad.bottom;
  const tMax = series.points.length
    ? series.points[series.points.length - 1].t
    : 1;
  const vMax = Math.max(series.peak_px_s, series.threshold_px_s) * 1.08;
  const sx = scaler(tMax, plotW);
  const sy = scaler(vMax, plotH);
  const x = (t: number) => pad.left + sx(t);
  const y = (v: number) => h - pad.bottom - sy(v);

  const trace = series.points
    .map((p) => `${x(p.t).toFixed(1)},${y(p.v).toFixed(1)}`)
    .join(" ");
  const dots = series.points
    .map(
      (p) =>
        `<circle class="pt pt-${escapeHtml(p.label)}" cx="${x(p.t).toFixed(1)}" cy="${y(p.v).toFixed(1)}" r="1.8"/>`,
    )
    .join("");

  const clickMarks = series.clicks
    .map((t) => {
      const cx = x(t).toFixed(1);
      return `<line class="click-marker" x1="${cx}" x2="${cx}" y1="${pad.top}" y2="${h - pad.bottom}"/>`;
    })
    .join("");

  const ty = y(series.threshold_px_s).toFixed(1);
  const threshold =
    `<line class="threshold-line" data-threshold="${series.threshold_px_s}" x1="${pad.left}" x2="${W - pad.right}" y1="${ty}" y2="${ty}"/>` +
    `<text class="threshold-label" x="${W - pad.right}" y="${(Number(ty) - 6).toFixed(1)}" text-anchor="end">` +
    `${svgNum(`${base}.threshold_px_s`, series.threshold_px_s, "threshold-value")}<tspan> px/s</tspan></text>`;

  const caption =
    `<text class="chart-note" x="${pad.left}" y="16">gaze speed — peak ` +
    `${svgNum(`${base}.peak_px_s`, series.peak_px_s)}<tspan>, mean </tspan>` +
    `${svgNum(`${base}.mean_px_s`, series.mean_px_s)}<tspan> px/s</tspan></text>`;

  return `<svg class="chart velocity-chart" viewBox="0 0 ${W} ${h}" role="img">${caption}<polyline class="velocity-trace" points="${trace}"/>${dots}${clickMarks}${threshold}</svg>`;
}

function rtHistogramSvg(hist: RtHistogram, base: string): string {
  const h = 120;
  const pad = { left: 8, right: 8, top: 24, bottom: 8 };
  const plotW = 340 - pad.left - pad.right;
  const peak = Math.max(1, ...hist.counts);
  const barW = hist.counts.length ? plotW / hist.counts.length : plotW;
  const bars = hist.counts
    .map((count, i) => {
      const barH = ((count / peak) * (h - pad.top - pad.bottom)).toFixed(1);
      return `<rect class="rt-bar" x="${(pad.left + i * barW).toFixed(1)}" y="${(h - pad.bottom - Number(barH)).toFixed(1)}" width="${Math.max(1, barW - 2).toFixed(1)}" height="${barH}"/>`;
    })
    .join("");
  const caption =
    `<text class="chart-note" x="${pad.left}" y="14">response times, ` +
    `${svgNum(`${base}.bin_ms`, hist.bin_ms)}<tspan> ms bins</tspan></text>`;
  return `<svg class="chart rt-histogram" viewBox="0 0 340 ${h}" role="img">${caption}${bars}</svg>`;
}

function statCard(label: string, valueHtml: string): string {
  return `<div class="stat"><div class="stat-label">${label}</div><div class="stat-value">${valueHtml}</div></div>`;
}

export function dashboardPanel(series: DashboardLevel, base: string): string {
  const t = series.targets;
  const c = series.clicks;
  const m = series.movement;
  const s = series.spatial;
  const cards = [
    statCard("targets shown", num(`${base}.targets.shown`, t.shown)),
    statCard("targets hit", num(`${base}.targets.matched`, t.matched)),
    statCard("targets missed", num(`${base}.targets.missed`, t.missed)),
    statCard(
      "success rate",
      `${num(`${base}.targets.hit_rate_pct`, t.hit_rate_pct)}<span class="unit">%</span>`,
    ),
    statCard("correct clicks", num(`${base}.clicks.correct`, c.correct)),
    statCard("incorrect clicks", num(`${base}.clicks.incorrect`, c.incorrect)),
    statCard("neutral clicks", num(`${base}.clicks.neutral`, c.neutral)),
    statCard(
      "false alarms",
      `${num(`${base}.clicks.false_alarm_pct`, c.false_alarm_pct)}<span class="unit">%</span>`,
    ),
    statCard(
      "mean response",
      `${num(`${base}.rt.mean_ms`, series.rt.mean_ms)}<span class="unit"> ms</span>`,
    ),
    statCard(
      "median response",
      `${num(`${base}.rt.median_ms`, series.rt.median_ms)}<span class="unit"> ms</span>`,
    ),
    statCard(
      "fixation share",
      `${num(`${base}.movement.fixation_pct`, m.fixation_pct)}<span class="unit">%</span>`,
    ),
    statCard(
      "saccade share",
      `${num(`${base}.movement.saccade_pct`, m.saccade_pct)}<span class="unit">%</span>`,
    ),
    statCard(
      "gaze path length",
      `${num(`${base}.spatial.path_length_px`, s.path_length_px)}<span class="unit"> px</span>`,
    ),
    statCard(
      "screen area used",
      `${num(`${base}.spatial.utilization_pct`, s.utilization_pct)}<span class="unit">%</span>`,
    ),
  ].join("");
  return `<div class="dashboard"><div class="stat-grid">${cards}</div>${rtHistogramSvg(series.rt.histogram, `${base}.rt.histogram`)}</div>`;
}

function panelBars(values: (number | null)[]): string {
  const h = 90;
  const finite = values.filter((v): v is number => v !== null && isFinite(v));
  const peak = Math.max(1e-12, ...finite.map(Math.abs));
  const barW = values.length ? 150 / values.length : 150;
  return values
    .map((v, i) => {
      if (v === null || !isFinite(v)) return "";
      const barH = ((Math.abs(v) / peak) * (h - 8)).toFixed(1);
      return `<rect class="panel-bar" x="${(4 + i * barW).toFixed(1)}" y="${(h - Number(barH)).toFixed(1)}" width="${Math.max(2, barW - 6).toFixed(1)}" height="${barH}"/>`;
    })
    .join("");
}

export function multilevelView(chart: MultilevelChart, base: string): string {
  if (!chart.available) {
    return `<div class="insufficient-levels notice">comparison unavailable: ${num(`${base}.reason`, chart.reason)}</div>`;
  }
  const panels = chart.panels
    .map((panel, p) => {
      const pb = `${base}.panels.${p}`;
      const levelRow = panel.levels
        .map((lv, i) => `<th>level ${num(`${pb}.levels.${i}`, lv)}</th>`)
        .join("");
      const valueRow = panel.values
        .map((v, i) => `<td>${num(`${pb}.values.${i}`, v)}</td>`)
        .join("");
      const deltaRow = panel.deltas
        .map((d, i) => `<td>Δ ${num(`${pb}.deltas.${i}`, d)}</td>`)
        .join("");
      const steps = panel.step_directions
        .map(
          (sd, i) =>
            `<span class="chip step-${escapeHtml(sd)}">${num(`${pb}.step_directions.${i}`, sd)}</span>`,
        )
        .join("");
      return (
        `<section class="panel-card">` +
        `<h3>${num(`${pb}.title`, panel.title)}</h3>` +
        `<svg class="chart panel-chart" viewBox="0 0 160 92" role="img">${panelBars(panel.values)}</svg>` +
        `<table class="panel-table"><thead><tr><th></th>${levelRow}</tr></thead>` +
        `<tbody><tr><td>value</td>${valueRow}</tr><tr><td>change</td><td></td>${deltaRow}</tr></tbody></table>` +
        `<div class="panel-steps">${steps}</div>` +
        `<div class="panel-direction">overall: <span class="chip dir-${escapeHtml(panel.direction)}">${num(`${pb}.direction`, panel.direction)}</span></div>` +
        `</section>`
      );
    })
    .join("");
  return `<div class="multilevel-grid">${panels}</div>`;
}
