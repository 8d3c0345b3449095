/** Typed client for the dimension-explorer session API. */

export type Polarity = 'POSITIVE' | 'NEGATIVE';

export interface SessionSummary {
  session_id: string;
  created: string;
  updated: string;
  rev: number;
  selection: { indices: number[]; source: string } | null;
  has_result: boolean;
}

export interface DimensionDoc {
  eig_index: number;
  top_ids: string[];
  bottom_ids: string[];
  list_c1: [string, number][];
  list_c2: [string, number][];
  unambiguous_top_count: number;
  unambiguous_bottom_count: number;
}

export interface DimensionsResponse {
  session_id: string;
  f_count: number;
  dimensions: DimensionDoc[];
}

export interface MetricsDoc {
  accuracy_percent: number;
  ari: number;
  subset_size: number | null;
  runs_aggregated: number;
  per_run_accuracy: number[] | null;
  per_run_ari: number[] | null;
}

export interface PreviewDoc {
  session_id: string;
  eig_indices: number[];
  cluster_sizes: [number, number];
  samples: { id: string; snippet: string }[][];
  metrics: MetricsDoc | null;
}

export interface ResultDoc {
  session_id: string;
  rev: number;
  selection: { indices: number[]; source: string };
  polarity_map: Record<'c1' | 'c2', Polarity>;
  result: {
    ids: string[];
    assign: number[];
    provenance: string;
    cluster_polarity: Record<string, Polarity>;
    cluster_sizes: [number, number];
    metrics: MetricsDoc | null;
    runs: number;
    seed: number;
  };
}

export interface SelectionBody {
  indices: number[];
  polarity_map: Record<'c1' | 'c2', Polarity>;
  source?: string;
  note?: string;
  rev?: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(input: string, init?: RequestInit): Promise<T> {
  const response = await fetch(input, {
    ...init,
    headers: { 'Content-Type': 'application/json', ...init?.headers },
  });
  if (!response.ok) {
    const body = await response.json().catch(() => ({}));
    throw new ApiError(
      response.status,
      typeof body.code === 'string' ? body.code : 'http-error',
      typeof body.message === 'string' ? body.message : response.statusText,
    );
  }
  return (await response.json()) as T;
}

export class SessionApi {
  constructor(private readonly base: string = '') {}

  listSessions(): Promise<{ sessions: SessionSummary[] }> {
    return request(`${this.base}/sessions`);
  }

  createSession(sessionId?: string): Promise<SessionSummary> {
    return request(`${this.base}/sessions`, {
      method: 'POST',
      body: JSON.stringify(sessionId ? { session_id: sessionId } : {}),
    });
  }

  getDimensions(sessionId: string): Promise<DimensionsResponse> {
    return request(`${this.base}/sessions/${sessionId}/dimensions`);
  }

  getPreview(sessionId: string, indices: number[]): Promise<PreviewDoc> {
    const eig = indices.join(',');
    return request(`${this.base}/sessions/${sessionId}/preview?eig=${eig}`);
  }

  postSelection(sessionId: string, body: SelectionBody): Promise<ResultDoc> {
    return request(`${this.base}/sessions/${sessionId}/selection`, {
      method: 'POST',
      body: JSON.stringify(body),
    });
  }

  getResult(sessionId: string): Promise<ResultDoc> {
    return request(`${this.base}/sessions/${sessionId}/result`);
  }
}
