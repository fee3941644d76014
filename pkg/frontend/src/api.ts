/**
 * Thin typed client for the explanation service.
 *
 * The fetch implementation is injectable so tests can intercept the
 * wire traffic; the client performs no computation on payloads.
 */

export interface NetworkSummary {
  id: string;
  name: string;
  variables: number;
  uploaded_at: string;
}

export interface VariableDoc {
  name: string;
  states: string[];
  alias?: string;
}

export interface Arc {
  from: string;
  to: string;
}

export interface StructureDoc {
  id: string;
  name: string;
  variables: VariableDoc[];
  arcs: Arc[];
  cpts: unknown[];
}

export interface QueryEnvelope {
  network: string;
  operation: string;
  parameters: Record<string, unknown>;
  // Shapes differ per operation; panels read the slices they render.
  result: any;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{
  status: number;
  json(): Promise<any>;
}>;

async function fail(response: { status: number; json(): Promise<any> }): Promise<never> {
  let code = "error";
  let message = `request failed with status ${response.status}`;
  try {
    const body = await response.json();
    if (body && typeof body === "object") {
      code = body.code ?? code;
      message = body.message ?? message;
    }
  } catch {
    // keep the generic message for non-JSON error bodies
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) =>
      fetch(url, init as RequestInit),
  ) {}

  async listNetworks(): Promise<NetworkSummary[]> {
    const response = await this.fetchFn(`${this.baseUrl}/api/networks`);
    if (response.status !== 200) await fail(response);
    const body = await response.json();
    return body.networks;
  }

  async getNetwork(id: string): Promise<StructureDoc> {
    const response = await this.fetchFn(
      `${this.baseUrl}/api/networks/${encodeURIComponent(id)}`,
    );
    if (response.status !== 200) await fail(response);
    return response.json();
  }

  async query(id: string, body: Record<string, unknown>): Promise<QueryEnvelope> {
    const response = await this.fetchFn(
      `${this.baseUrl}/api/networks/${encodeURIComponent(id)}/query`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      },
    );
    if (response.status !== 200) await fail(response);
    return response.json();
  }
}
