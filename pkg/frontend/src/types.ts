/** JSON shapes returned by the HTTP service. The UI never computes purity,
 * counts, or rule metrics itself — every number shown comes from these
 * payloads, so the UI cannot disagree with the engine. */

export interface BarJson {
  group: string;
  total: number;
  per_class: Record<string, number>;
  dominant: string | null;
  purity: number;
  height: number;
  joined: boolean;
}

export interface AxisJson {
  attribute: string;
  flipped: boolean;
  bars: BarJson[];
  residual: BarJson[];
}

export interface EdgeJson {
  left_group: string;
  right_group: string;
  class: string;
  count: number;
}

export interface EdgeBundleJson {
  left: string;
  right: string;
  counts: EdgeJson[];
}

export interface LayoutBundle {
  axis_order: string[];
  layouts: AxisJson[];
  edges: EdgeBundleJson[];
  report: string[];
  params: {
    ref: string | null;
    purity: number;
    min_size: number;
    small_block: number;
    join: boolean;
    sort: string;
    flips: string[];
  };
}

export interface RuleMetrics {
  coverage: number;
  correct: number;
  precision: number | null;
  error_rate: number | null;
  decided: number;
}

export interface UploadResult {
  id: string;
  rows: number;
  columns: number;
}

/** Attribute entry of a scheme document, as served by GET .../scheme. */
export interface SchemeAttribute {
  name: string;
  mtype: string;
  encoder?: string;
  order?: string[];
  codes?: Record<string, number>;
  groups?: unknown;
  needs_review?: boolean;
  [key: string]: unknown;
}

export interface SchemeDocument {
  version: number;
  attributes: SchemeAttribute[];
  [key: string]: unknown;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
