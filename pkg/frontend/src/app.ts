// Single-page client for the gaze analysis service. The app keeps one state
// object and re-renders views from it; every figure and table is drawn from
// service payloads, never recomputed here. Parameter edits only touch local
// state (and cancel any in-flight request) — a finished analysis is immutable
// and gets a "stale" marker instead of being rewritten.

import * as api from "./api";
import { num } from "./bind";
import {
  dashboardPanel,
  multilevelView,
  scanpathChart,
  timelineChart,
  velocityChart,
} from "./charts";
import { renderTableDoc } from "./tables";
import type {
  AnalysisParams,
  AnalysisPayload,
  AnalyzeRequestBody,
  MatchStrategy,
  ParamKey,
  SessionInfo,
} from "./types";

export type ViewName = "levels" | "comparison" | "tables" | "recommendations";

export interface AppState {
  session: SessionInfo | null;
  analysis: AnalysisPayload | null;
  params: AnalysisParams;
  matchStrategy: MatchStrategy;
  studentId: string;
  view: ViewName;
  selectedLevel: number | null;
  busy: boolean;
  error: string | null;
}

export const DEFAULT_PARAMS: AnalysisParams = {
  v_thresh_px_s: 721.0,
  rt_min_ms: 522,
  rt_max_ms: 5000,
  bounds_tol_px: 50.0,
  grid_cols: 20,
  grid_rows: 20,
};

const PARAM_FIELDS: { key: ParamKey; label: string }[] = [
  { key: "v_thresh_px_s", label: "velocity threshold (px/s)" },
  { key: "rt_min_ms", label: "min response (ms)" },
  { key: "rt_max_ms", label: "max response (ms)" },
  { key: "bounds_tol_px", label: "bounds tolerance (px)" },
  { key: "grid_cols", label: "grid columns" },
  { key: "grid_rows", label: "grid rows" },
];

const VIEWS: { name: ViewName; label: string }[] = [
  { name: "levels", label: "levels" },
  { name: "comparison", label: "comparison" },
  { name: "tables", label: "tables" },
  { name: "recommendations", label: "recommendations" },
];

export interface AppActions {
  upload(files: File[]): Promise<void>;
  analyze(): Promise<void>;
  applyCalibration(): void;
  setParam(key: ParamKey, raw: string): void;
  setStrategy(strategy: MatchStrategy): void;
  selectView(view: ViewName): void;
  selectLevel(level: number): void;
}

export interface App {
  state: AppState;
  actions: AppActions;
  render(): void;
  /** Settle every action started from a DOM event (test hook). */
  flush(): Promise<void>;
}

export function createApp(root: HTMLElement): App {
  const state: AppState = {
    session: null,
    analysis: null,
    params: { ...DEFAULT_PARAMS },
    matchStrategy: "single-candidate",
    studentId: "",
    view: "levels",
    selectedLevel: null,
    busy: false,
    error: null,
  };

  let inflight: AbortController | null = null;
  const tasks: Promise<void>[] = [];
  const track = (p: Promise<void>) => tasks.push(p.catch(() => undefined));

  function cancelInflight(): void {
    inflight?.abort();
    inflight = null;
  }

  function isStale(): boolean {
    const a = state.analysis;
    if (!a) return false;
    if (a.match_strategy !== state.matchStrategy) return true;
    return (Object.keys(state.params) as ParamKey[]).some(
      (k) => a.params[k] !== state.params[k],
    );
  }

  function requestBody(): AnalyzeRequestBody {
    const body: AnalyzeRequestBody = {
      params: { ...state.params },
      match_strategy: state.matchStrategy,
    };
    const student = state.studentId.trim();
    if (student) body.student_id = student;
    return body;
  }

  async function upload(files: File[]): Promise<void> {
    if (!files.length) {
      state.error = "choose at least one CSV file first";
      render();
      return;
    }
    cancelInflight();
    state.busy = true;
    state.error = null;
    render();
    try {
      state.session = await api.uploadSession(files);
      state.analysis = null;
      state.selectedLevel = null;
    } catch (err) {
      state.error = describeError(err);
    } finally {
      state.busy = false;
      render();
    }
  }

  async function analyze(): Promise<void> {
    if (!state.session) {
      state.error = "load a session before running analysis";
      render();
      return;
    }
    cancelInflight();
    const ctl = new AbortController();
    inflight = ctl;
    state.busy = true;
    state.error = null;
    render();
    try {
      const started = await api.startAnalysis(
        state.session.session_id,
        requestBody(),
        ctl.signal,
      );
      const payload = await api.fetchAnalysis(started.analysis_id, ctl.signal);
      if (!ctl.signal.aborted) {
        state.analysis = payload;
        if (
          state.selectedLevel === null ||
          !payload.levels.includes(state.selectedLevel)
        ) {
          state.selectedLevel = payload.levels[0] ?? null;
        }
      }
    } catch (err) {
      if (!ctl.signal.aborted) state.error = describeError(err);
    } finally {
      if (inflight === ctl) inflight = null;
      state.busy = inflight !== null;
      render();
    }
  }

  function applyCalibration(): void {
    const cal = state.analysis?.calibration;
    if (!cal?.available || cal.chosen_threshold_px_s === undefined) return;
    cancelInflight();
    state.params = { ...state.params, v_thresh_px_s: cal.chosen_threshold_px_s };
    if (cal.rt_window_ms) {
      state.params.rt_min_ms = cal.rt_window_ms[0];
      state.params.rt_max_ms = cal.rt_window_ms[1];
    }
    render();
  }

  function setParam(key: ParamKey, raw: string): void {
    const value = Number(raw);
    if (Number.isFinite(value)) state.params = { ...state.params, [key]: value };
    cancelInflight();
    updateStaleBadge();
  }

  function setStrategy(strategy: MatchStrategy): void {
    state.matchStrategy = strategy;
    cancelInflight();
    updateStaleBadge();
  }

  function selectView(view: ViewName): void {
    state.view = view;
    render();
  }

  function selectLevel(level: number): void {
    state.selectedLevel = level;
    render();
  }

  function describeError(err: unknown): string {
    if (err instanceof api.ApiError) return err.message;
    if (err instanceof Error) return err.message;
    return "request failed";
  }

  // ---- rendering ----------------------------------------------------------

  function renderSessionSummary(): string {
    const session = state.session;
    if (!session) return "";
    const rows = session.files
      .map((f, i) => {
        const b = `session.files.${i}`;
        return (
          `<tr><td>${num(`${b}.name`, f.name)}</td>` +
          `<td>${num(`${b}.level`, f.level)}</td>` +
          `<td>${num(`${b}.rows_total`, f.rows_total)}</td>` +
          `<td>${num(`${b}.rows_dropped`, f.rows_dropped)}</td>` +
          `<td>${num(`${b}.samples`, f.samples)}</td></tr>`
        );
      })
      .join("");
    return (
      `<table class="file-table"><thead><tr>` +
      `<th>file</th><th>level</th><th>rows</th><th>dropped</th><th>samples</th>` +
      `</tr></thead><tbody>${rows}</tbody></table>` +
      `<p class="session-id">session <code>${num("session.session_id", session.session_id)}</code></p>`
    );
  }

  function renderCalibrationHint(): string {
    const cal = state.analysis?.calibration;
    if (!cal?.available) return "";
    const window = cal.rt_window_ms
      ? ` · response window ${num("analysis.calibration.rt_window_ms.0", cal.rt_window_ms[0])}–${num("analysis.calibration.rt_window_ms.1", cal.rt_window_ms[1])} ms`
      : "";
    return (
      `<p class="cal-hint">suggested from this data: threshold ` +
      `${num("analysis.calibration.chosen_threshold_px_s", cal.chosen_threshold_px_s)} px/s${window}</p>`
    );
  }

  function renderSidebar(): string {
    const paramInputs = PARAM_FIELDS.map(
      ({ key, label }) =>
        `<label class="field">${label}` +
        `<input type="number" step="any" data-param="${key}" value="${state.params[key]}"/></label>`,
    ).join("");
    const strategies: MatchStrategy[] = ["single-candidate", "scan-forward"];
    const options = strategies
      .map(
        (s) =>
          `<option value="${s}"${s === state.matchStrategy ? " selected" : ""}>${s}</option>`,
      )
      .join("");
    const canRecalibrate = Boolean(state.analysis?.calibration?.available);
    return `
      <section class="box upload-box">
        <h2>session data</h2>
        <p class="hint">CSV columns: <code>timestamp_ms, gaze, event_kind, object_id, object_type, object_pos, click_label</code>;
        one file per level, level number taken from the file name.</p>
        <input type="file" id="file-input" multiple accept=".csv,text/csv"/>
        <button id="upload-btn">load session</button>
        ${renderSessionSummary()}
      </section>
      <section class="box params-box">
        <h2>parameters</h2>
        ${paramInputs}
        <label class="field">matching<select id="match-strategy">${options}</select></label>
        <label class="field">student id<input type="text" id="student-id" value="${state.studentId}"/></label>
        <div id="stale-slot"></div>
        <button id="run-btn"${state.busy ? " disabled" : ""}>run analysis</button>
        <button id="recalibrate-btn"${canRecalibrate ? "" : " disabled"}>use suggested parameters</button>
        ${renderCalibrationHint()}
      </section>
      ${state.error ? `<div class="error-banner">${escapeText(state.error)}</div>` : ""}
    `;
  }

  function escapeText(s: string): string {
    return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
  }

  function emptyState(): string {
    return `<div class="empty-state">load session CSV files and run analysis to see results here</div>`;
  }

  function renderLevels(): string {
    const a = state.analysis;
    if (!a) return emptyState();
    if (!a.levels.length) return `<div class="notice">no levels in this analysis</div>`;
    const selected =
      state.selectedLevel !== null ? a.levels.indexOf(state.selectedLevel) : 0;
    const i = selected >= 0 ? selected : 0;
    const tabs = a.levels
      .map(
        (lv, j) =>
          `<button class="tab${j === i ? " active" : ""}" data-level="${lv}">level ${num(`analysis.levels.${j}`, lv)}</button>`,
      )
      .join("");
    return (
      `<div class="level-tabs">${tabs}</div>` +
      `<figure>${timelineChart(a.charts.timeline.levels[i], `analysis.charts.timeline.levels.${i}`)}</figure>` +
      `<figure>${scanpathChart(a.charts.scanpath.levels[i], `analysis.charts.scanpath.levels.${i}`)}</figure>` +
      `<figure>${velocityChart(a.charts.velocity.levels[i], `analysis.charts.velocity.levels.${i}`)}</figure>` +
      dashboardPanel(a.charts.dashboard.levels[i], `analysis.charts.dashboard.levels.${i}`)
    );
  }

  function renderComparison(): string {
    const a = state.analysis;
    if (!a) return emptyState();
    return multilevelView(a.charts.multilevel, "analysis.charts.multilevel");
  }

  function renderTables(): string {
    const a = state.analysis;
    if (!a) return emptyState();
    return a.tables.order
      .map((name) =>
        renderTableDoc(
          a.tables.documents[name],
          `analysis.tables.documents.${name}`,
        ),
      )
      .join("");
  }

  function renderRecommendations(): string {
    const a = state.analysis;
    if (!a) return emptyState();
    if (!a.recommendations.length) {
      return `<div class="notice">no flags raised — every metric is inside its expected band</div>`;
    }
    const items = a.recommendations
      .map((rec, i) => {
        const b = `analysis.recommendations.${i}`;
        return (
          `<li class="rec rec-${rec.severity}">` +
          `${num(`${b}.severity`, rec.severity, `chip sev-${rec.severity}`)}` +
          `<p class="rec-message">${num(`${b}.message`, rec.message)}</p>` +
          `<p class="rec-evidence">evidence: ${num(`${b}.evidence.metric`, rec.evidence.metric)} = ` +
          `${num(`${b}.evidence.value`, rec.evidence.value)} ` +
          `${num(`${b}.evidence.comparator`, rec.evidence.comparator)} ` +
          `${num(`${b}.evidence.threshold`, rec.evidence.threshold)} · level ` +
          `${num(`${b}.evidence.level`, rec.evidence.level)}</p></li>`
        );
      })
      .join("");
    return `<ul class="rec-list">${items}</ul>`;
  }

  function renderView(): string {
    switch (state.view) {
      case "levels":
        return renderLevels();
      case "comparison":
        return renderComparison();
      case "tables":
        return renderTables();
      case "recommendations":
        return renderRecommendations();
    }
  }

  function renderNav(): string {
    const buttons = VIEWS.map(
      ({ name, label }) =>
        `<button class="nav-btn${state.view === name ? " active" : ""}" data-view="${name}">${label}</button>`,
    ).join("");
    return `<nav class="view-nav">${buttons}</nav>`;
  }

  function render(): void {
    root.innerHTML = `
      <header class="app-header">
        <h1>attention game — gaze analysis</h1>
        ${state.busy ? `<span class="chip busy">working…</span>` : ""}
      </header>
      <div class="layout">
        <aside class="sidebar">${renderSidebar()}</aside>
        <main class="content">${renderNav()}<div class="view">${renderView()}</div></main>
      </div>`;
    updateStaleBadge();
  }

  // The stale marker is updated in place so typing in a parameter field
  // never rebuilds the form under the cursor.
  function updateStaleBadge(): void {
    const slot = root.querySelector("#stale-slot");
    if (!slot) return;
    slot.innerHTML = isStale()
      ? `<div class="stale-banner">parameters changed since this analysis ran — run again to refresh</div>`
      : "";
  }

  // ---- events -------------------------------------------------------------

  root.addEventListener("click", (ev) => {
    const target = ev.target as Element | null;
    if (!target) return;
    const viewBtn = target.closest<HTMLElement>("[data-view]");
    if (viewBtn?.dataset.view) {
      selectView(viewBtn.dataset.view as ViewName);
      return;
    }
    const levelBtn = target.closest<HTMLElement>("[data-level]");
    if (levelBtn?.dataset.level) {
      selectLevel(Number(levelBtn.dataset.level));
      return;
    }
    const button = target.closest("button");
    if (!button) return;
    if (button.id === "run-btn") {
      track(analyze());
    } else if (button.id === "recalibrate-btn") {
      applyCalibration();
    } else if (button.id === "upload-btn") {
      const input = root.querySelector<HTMLInputElement>("#file-input");
      const files = input?.files ? Array.from(input.files) : [];
      track(upload(files));
    }
  });

  root.addEventListener("input", (ev) => {
    const el = ev.target;
    if (el instanceof HTMLInputElement && el.dataset.param) {
      setParam(el.dataset.param as ParamKey, el.value);
    } else if (el instanceof HTMLInputElement && el.id === "student-id") {
      state.studentId = el.value;
    }
  });

  root.addEventListener("change", (ev) => {
    const el = ev.target;
    if (el instanceof HTMLSelectElement && el.id === "match-strategy") {
      setStrategy(el.value as MatchStrategy);
    }
  });

  render();

  return {
    state,
    actions: {
      upload,
      analyze,
      applyCalibration,
      setParam,
      setStrategy,
      selectView,
      selectLevel,
    },
    render,
    async flush() {
      while (tasks.length) await tasks.shift();
    },
  };
}
