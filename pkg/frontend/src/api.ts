import type {
  Candidate,
  DecisionEntry,
  GraphStats,
  GraphSummary,
  HeatmapPayload,
  Histogram,
  RankedCandidate,
  ScatterPoint,
  SessionSummary,
  StructurePayload,
  ViewConfig,
  ViewUpdate,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed wrapper over the engine's JSON API; the only data source the UI has. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const text = await response.text();
    const payload = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const err = payload?.error ?? { code: "HttpError", message: text };
      throw new ApiError(err.code, err.message, response.status);
    }
    return payload as T;
  }

  listGraphs(): Promise<{ graphs: GraphSummary[] }> {
    return this.request("GET", "/api/graphs");
  }

  uploadGraph(id: string, edgesCsv: string, nodesCsv?: string): Promise<GraphSummary> {
    return this.request("POST", "/api/graphs", {
      id,
      edges_csv: edgesCsv,
      nodes_csv: nodesCsv ?? null,
    });
  }

  deleteGraph(id: string): Promise<{ removed: string }> {
    return this.request("DELETE", `/api/graphs/${id}`);
  }

  putView(id: string, update: ViewUpdate): Promise<{ id: string; view: ViewConfig }> {
    return this.request("PUT", `/api/graphs/${id}/view`, update);
  }

  stats(id: string): Promise<GraphStats> {
    return this.request("GET", `/api/graphs/${id}/stats`);
  }

  histogram(id: string, binWidth?: number, origin?: number): Promise<Histogram> {
    const params = new URLSearchParams();
    if (binWidth !== undefined) params.set("bin_width", String(binWidth));
    if (origin !== undefined) params.set("origin", String(origin));
    const query = params.size ? `?${params}` : "";
    return this.request("GET", `/api/graphs/${id}/histogram${query}`);
  }

  scatter(id: string): Promise<{ points: ScatterPoint[] }> {
    return this.request("GET", `/api/graphs/${id}/scatter`);
  }

  spatial(id: string): Promise<{ countries: Record<string, number> }> {
    return this.request("GET", `/api/graphs/${id}/spatial`);
  }

  structure(id: string): Promise<StructurePayload> {
    return this.request("GET", `/api/graphs/${id}/structure`);
  }

  personChannels(id: string, person: number): Promise<{ person: number; channels: Record<string, number> }> {
    return this.request("GET", `/api/graphs/${id}/persons/${person}/channels`);
  }

  heatmap(items: { graph: string; person: number }[], channel: string,
          binWidth?: number): Promise<HeatmapPayload> {
    return this.request("POST", "/api/heatmap", {
      items,
      channel,
      bin_width: binWidth ?? null,
    });
  }

  createSession(body: {
    template: string;
    target: string;
    seed?: Record<string, number>;
    auto_seed?: boolean;
  }): Promise<SessionSummary> {
    return this.request("POST", "/api/sessions", body);
  }

  getSession(id: string): Promise<SessionSummary> {
    return this.request("GET", `/api/sessions/${id}`);
  }

  candidates(id: string, k = 1): Promise<{ candidates: Candidate[] }> {
    return this.request("GET", `/api/sessions/${id}/candidates?k=${k}`);
  }

  postDecision(id: string, decision: {
    template_node: number;
    target_node: number;
    verdict: "accept" | "reject";
    actor?: "user" | "auto";
  }): Promise<SessionSummary> {
    return this.request("POST", `/api/sessions/${id}/decisions`, decision);
  }

  runAuto(id: string, maxIterations = 10_000): Promise<SessionSummary> {
    return this.request("POST", `/api/sessions/${id}/run-auto`, {
      max_iterations: maxIterations,
    });
  }

  compare(template: string, candidates: string[]): Promise<{ ranking: RankedCandidate[] }> {
    return this.request("POST", "/api/compare", { template, candidates });
  }

  lastLogEntry(session: SessionSummary): DecisionEntry | undefined {
    return session.log[session.log.length - 1];
  }
}
