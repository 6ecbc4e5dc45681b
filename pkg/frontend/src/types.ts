// Payload shapes for the /v1 analysis service. The client renders these
// verbatim; it never derives numbers of its own.

export interface SessionFile {
  name: string;
  level: number;
  rows_total: number;
  rows_dropped: number;
  samples: number;
  sha256: string;
  warnings: string[];
}

export interface SessionInfo {
  session_id: string;
  files: SessionFile[];
}

export interface AnalysisParams {
  v_thresh_px_s: number;
  rt_min_ms: number;
  rt_max_ms: number;
  bounds_tol_px: number;
  grid_cols: number;
  grid_rows: number;
}

export type ParamKey = keyof AnalysisParams;

export type MatchStrategy = "single-candidate" | "scan-forward";

export interface AnalyzeRequestBody {
  student_id?: string;
  params?: Partial<AnalysisParams>;
  match_strategy?: MatchStrategy;
}

export interface AnalyzeStarted {
  analysis_id: string;
  session_id: string;
  cached: boolean;
}

export interface Trend {
  metric: string;
  values: (number | null)[];
  deltas: (number | null)[];
  step_directions: string[];
  direction: string;
}

export interface Comparison {
  per_level: Record<string, unknown>[];
  rt_trend: Trend;
  hit_rate_trend: Trend;
  mistakes_trend: Trend;
  utilization_trend: Trend;
}

export interface Evidence {
  metric: string;
  level: number | null;
  value: number;
  comparator: string;
  threshold: number;
}

export interface Recommendation {
  rule_id: string;
  severity: string;
  message: string;
  evidence: Evidence;
}

export interface TableDocument {
  table: string;
  columns: string[];
  rows: string[][];
}

export interface Tables {
  order: string[];
  documents: Record<string, TableDocument>;
}

export interface EpisodeShape {
  object_id: string;
  object_type: string;
  appear_ms: number;
  disappear_ms: number | null;
  position_px: [number, number] | null;
}

export interface ClickShape {
  timestamp_ms: number;
  label: string;
  position_px: [number, number] | null;
}

export interface MatchShape {
  target_id: string;
  target_appear_ms: number;
  click_ms: number;
  rt_ms: number;
}

export interface TimelineLevel {
  level: number;
  episodes: EpisodeShape[];
  clicks: ClickShape[];
  matches: MatchShape[];
  duration_ms: number;
}

export interface GazePoint {
  t: number;
  x: number;
  y: number;
}

export interface FixationEvent {
  cx: number;
  cy: number;
  duration_ms: number;
  samples: number;
}

export interface ScanpathLevel {
  level: number;
  screen: [number, number];
  fixation_points: GazePoint[];
  saccade_points: GazePoint[];
  fixation_events: FixationEvent[];
  clicks: ClickShape[];
  heatmap: number[][];
}

export interface VelocityPoint {
  t: number;
  v: number;
  label: string;
}

export interface VelocityLevel {
  level: number;
  threshold_px_s: number;
  points: VelocityPoint[];
  clicks: number[];
  peak_px_s: number;
  mean_px_s: number;
}

export interface RtHistogram {
  bin_ms: number;
  edges: number[];
  counts: number[];
}

export interface DashboardLevel {
  level: number;
  targets: {
    shown: number;
    matched: number;
    missed: number;
    hit_rate: number | null;
    hit_rate_pct: string | null;
  };
  clicks: {
    correct: number;
    incorrect: number;
    neutral: number;
    false_alarm_rate: number | null;
    false_alarm_pct: string | null;
  };
  rt: {
    mean_ms: number | null;
    median_ms: number | null;
    histogram: RtHistogram;
  };
  movement: {
    counts: Record<string, number>;
    fixation_share: number | null;
    saccade_share: number | null;
    fixation_pct: string | null;
    saccade_pct: string | null;
  };
  spatial: {
    path_length_px: number;
    screen_utilization: number;
    utilization_pct: string;
  };
}

export interface MultilevelPanel {
  title: string;
  metric: string;
  levels: number[];
  values: (number | null)[];
  deltas: (number | null)[];
  step_directions: string[];
  direction: string;
}

export type MultilevelChart =
  | { available: true; panels: MultilevelPanel[] }
  | { available: false; reason: string };

export interface Charts {
  timeline: { levels: TimelineLevel[] };
  scanpath: { levels: ScanpathLevel[] };
  velocity: { levels: VelocityLevel[] };
  dashboard: { levels: DashboardLevel[] };
  multilevel: MultilevelChart;
}

export interface Calibration {
  available: boolean;
  chosen_threshold_px_s?: number;
  fixation_fraction_at_threshold?: number;
  rt_window_ms?: [number, number];
  velocity_percentiles?: Record<string, number>;
  retention_by_tolerance?: Record<string, number>;
  per_level_thresholds?: Record<string, number>;
  histogram_bin_edges?: number[];
  histogram_counts?: number[];
}

export interface AnalysisPayload {
  analysis_id: string;
  session_id: string;
  student_id: string | null;
  levels: number[];
  params: AnalysisParams;
  match_strategy: MatchStrategy;
  metrics: Record<string, Record<string, unknown>>;
  comparison: Comparison | null;
  recommendations: Recommendation[];
  tables: Tables;
  charts: Charts;
  calibration: Calibration;
}
