// Shared test rig: a fetch() mock that serves payloads captured from the
// real service (tests/fixtures.json, regenerated by scripts/make-fixtures.py)
// and records every request it sees.

import { createApp, type App } from "../src/app";
import type { AnalysisPayload, SessionInfo } from "../src/types";
import fixturesJson from "./fixtures.json";

export interface Fixtures {
  session3: SessionInfo;
  analysis3: AnalysisPayload;
  analysis3_thresh500: AnalysisPayload;
  session1: SessionInfo;
  analysis1: AnalysisPayload;
}

export const fixtures = fixturesJson as unknown as Fixtures;

export interface RecordedCall {
  method: string;
  url: string;
  body: unknown;
}

export interface MockOptions {
  /** Fail session uploads with this error instead of succeeding. */
  uploadFailure?: { status: number; detail: string };
  /** Fail analyze posts with this error instead of succeeding. */
  analyzeFailure?: { status: number; detail: string };
  /** Hold analyze responses until release() is called. */
  gateAnalyze?: boolean;
}

export interface MockService {
  calls: RecordedCall[];
  analyzePosts(): RecordedCall[];
  release(): void;
  restore(): void;
}

function jsonResponse(payload: unknown, status: number): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}

function abortError(): Error {
  const err = new Error("the request was aborted");
  err.name = "AbortError";
  return err;
}

export function installMockService(opts: MockOptions = {}): MockService {
  const calls: RecordedCall[] = [];
  const gateWaiters: (() => void)[] = [];
  const byId: Record<string, AnalysisPayload> = {
    [fixtures.analysis3.analysis_id]: fixtures.analysis3,
    [fixtures.analysis3_thresh500.analysis_id]: fixtures.analysis3_thresh500,
    [fixtures.analysis1.analysis_id]: fixtures.analysis1,
  };
  const original = globalThis.fetch;

  globalThis.fetch = (async (
    input: RequestInfo | URL,
    init?: RequestInit,
  ): Promise<Response> => {
    const url = String(input);
    const method = (init?.method ?? "GET").toUpperCase();
    if (init?.signal?.aborted) throw abortError();
    let body: unknown = null;
    if (typeof init?.body === "string") body = JSON.parse(init.body);
    calls.push({ method, url, body });

    if (method === "POST" && /\/v1\/sessions$/.test(url)) {
      if (opts.uploadFailure) {
        return jsonResponse(
          { detail: opts.uploadFailure.detail },
          opts.uploadFailure.status,
        );
      }
      const form = init?.body as FormData;
      const n = form.getAll("files").length;
      return jsonResponse(n > 1 ? fixtures.session3 : fixtures.session1, 201);
    }

    const analyzeMatch = url.match(/\/v1\/sessions\/([^/]+)\/analyze$/);
    if (method === "POST" && analyzeMatch) {
      if (opts.gateAnalyze) {
        await new Promise<void>((resolve, reject) => {
          gateWaiters.push(resolve);
          init?.signal?.addEventListener("abort", () => reject(abortError()));
        });
      }
      if (opts.analyzeFailure) {
        return jsonResponse(
          { detail: opts.analyzeFailure.detail },
          opts.analyzeFailure.status,
        );
      }
      const sid = analyzeMatch[1];
      const chosen = pickAnalysis(sid, body);
      if (!chosen) return jsonResponse({ detail: "unknown session" }, 404);
      return jsonResponse(
        { analysis_id: chosen.analysis_id, session_id: sid, cached: false },
        201,
      );
    }

    const getMatch = url.match(/\/v1\/analyses\/([^/]+)$/);
    if (method === "GET" && getMatch) {
      const payload = byId[getMatch[1]];
      return payload
        ? jsonResponse(payload, 200)
        : jsonResponse({ detail: "unknown analysis" }, 404);
    }

    return jsonResponse({ detail: `unmocked route: ${method} ${url}` }, 500);
  }) as typeof fetch;

  return {
    calls,
    analyzePosts: () =>
      calls.filter((c) => c.method === "POST" && c.url.includes("/analyze")),
    release: () => {
      while (gateWaiters.length) gateWaiters.shift()!();
    },
    restore: () => {
      globalThis.fetch = original;
    },
  };
}

function pickAnalysis(sessionId: string, body: unknown): AnalysisPayload | null {
  if (sessionId === fixtures.session1.session_id) return fixtures.analysis1;
  if (sessionId !== fixtures.session3.session_id) return null;
  const params = (body as { params?: { v_thresh_px_s?: number } })?.params;
  return params?.v_thresh_px_s === 500
    ? fixtures.analysis3_thresh500
    : fixtures.analysis3;
}

export function mountApp(): App {
  document.body.innerHTML = '<div id="app"></div>';
  return createApp(document.querySelector<HTMLElement>("#app")!);
}

export function csvFile(name: string): File {
  return new File(["stub"], name, { type: "text/csv" });
}

export async function loadedApp(files = 3): Promise<App> {
  const app = mountApp();
  const names =
    files > 1
      ? ["level_1.csv", "level_2.csv", "level_3.csv"]
      : ["level_1.csv"];
  await app.actions.upload(names.map(csvFile));
  await app.actions.analyze();
  return app;
}

/** Follow a dotted path ("analysis.charts.velocity.levels.0.threshold_px_s"). */
export function resolvePath(rootObj: unknown, path: string): unknown {
  let cur: unknown = rootObj;
  for (const key of path.split(".")) {
    if (cur === null || cur === undefined) return undefined;
    cur = (cur as Record<string, unknown>)[key];
  }
  return cur;
}
