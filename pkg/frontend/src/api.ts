import type {
  ChainConfig, DatasetEntry, FilterBody, SeriesBody, SpectrumBody,
} from "./types.js";

/** Error body the service always returns: {"error": message, "code": tag}. */
export class ApiError extends Error {
  constructor(message: string, readonly code: string, readonly status: number) {
    super(message);
    this.name = "ApiError";
  }
}

export type SeriesRef = { dataset: string } | { series: SeriesBody };

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Client {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.base + path, init);
    let body: unknown = null;
    try {
      body = await res.json();
    } catch {
      // non-JSON reply; fall through to the status check
    }
    if (!res.ok) {
      const err = body as { error?: string; code?: string } | null;
      throw new ApiError(err?.error ?? `request failed (${res.status})`,
        err?.code ?? "http", res.status);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async datasets(): Promise<DatasetEntry[]> {
    const body = await this.request<{ datasets: DatasetEntry[] }>("/api/datasets");
    return body.datasets;
  }

  dataset(id: string): Promise<SeriesBody & { id: string; digest: string }> {
    return this.request(`/api/datasets/${encodeURIComponent(id)}`);
  }

  spectrum(ref: SeriesRef): Promise<SpectrumBody> {
    return this.post("/api/spectrum", ref);
  }

  filter(ref: SeriesRef, chain: ChainConfig): Promise<FilterBody> {
    return this.post("/api/filter", { ...ref, chain });
  }
}
