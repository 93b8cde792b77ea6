import type {
  ApiErrorBody,
  LayoutBundle,
  RuleMetrics,
  SchemeDocument,
  UploadResult,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface LayoutParams {
  ref?: string;
  purity?: number;
  minsize?: number;
  join?: boolean;
  sort?: string;
  flips?: string[];
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the service endpoints.
 *
 * Each GET family keeps a latest-wins guard: a response is dropped if a
 * newer request for the same endpoint was issued meanwhile, so a slow
 * layout response can never overwrite a fresher one.
 */
export class HetvizClient {
  private seq: Record<string, number> = {};

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    if (!resp.ok) {
      let code = "http_error";
      let message = `${resp.status}`;
      try {
        const body = (await resp.json()) as ApiErrorBody;
        code = body.error.code;
        message = body.error.message;
      } catch {
        /* non-JSON error body; keep the status text */
      }
      throw new ApiError(resp.status, code, message);
    }
    return (await resp.json()) as T;
  }

  /** Run a request under latest-wins cancellation for the given key. */
  private async latest<T>(key: string, run: () => Promise<T>): Promise<T | null> {
    const ticket = (this.seq[key] = (this.seq[key] ?? 0) + 1);
    const result = await run();
    return this.seq[key] === ticket ? result : null;
  }

  uploadCsv(csv: string): Promise<UploadResult> {
    return this.request("/api/datasets", { method: "POST", body: csv });
  }

  getScheme(datasetId: string): Promise<SchemeDocument> {
    return this.request(`/api/datasets/${datasetId}/scheme`);
  }

  putScheme(datasetId: string, doc: SchemeDocument): Promise<{ ok: boolean }> {
    return this.request(`/api/datasets/${datasetId}/scheme`, {
      method: "PUT",
      body: JSON.stringify(doc),
    });
  }

  getLayout(datasetId: string, params: LayoutParams = {}): Promise<LayoutBundle | null> {
    const qs = new URLSearchParams();
    if (params.ref !== undefined) qs.set("ref", params.ref);
    if (params.purity !== undefined) qs.set("purity", String(params.purity));
    if (params.minsize !== undefined) qs.set("minsize", String(params.minsize));
    if (params.join !== undefined) qs.set("join", String(params.join));
    if (params.sort !== undefined) qs.set("sort", params.sort);
    if (params.flips && params.flips.length) qs.set("flips", params.flips.join(","));
    const suffix = qs.toString() ? `?${qs}` : "";
    return this.latest("layout", () =>
      this.request<LayoutBundle>(`/api/datasets/${datasetId}/layout${suffix}`),
    );
  }

  getReport(datasetId: string, ref?: string): Promise<string[] | null> {
    const suffix = ref !== undefined ? `?ref=${encodeURIComponent(ref)}` : "";
    return this.latest("report", async () => {
      const body = await this.request<{ report: string[] }>(
        `/api/datasets/${datasetId}/report${suffix}`,
      );
      return body.report;
    });
  }

  evalRule(datasetId: string, rule: unknown): Promise<RuleMetrics> {
    return this.request(`/api/datasets/${datasetId}/rules/eval`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(rule),
    });
  }
}
