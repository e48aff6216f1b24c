// Thin client for the benchmark driver's annotation endpoints.

import type { Point } from "./session.js";

export class ApiError extends Error {
  constructor(
    message: string,
    public status: number,
    public index: number | null = null
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let message = `${resp.status} ${resp.statusText}`;
  let index: number | null = null;
  try {
    const body = await resp.json();
    if (body && typeof body.error === "string") message = body.error;
    if (body && body.index !== undefined) index = body.index;
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(message, resp.status, index);
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async listPointsets(): Promise<string[]> {
    const resp = await fetch(this.url("/pointsets"));
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as string[];
  }

  async getPointset(id: string): Promise<Point[]> {
    const resp = await fetch(this.url(`/pointsets/${id}`));
    if (!resp.ok) throw await parseError(resp);
    const body = await resp.json();
    return body.points as Point[];
  }

  async saveGroundTruth(
    id: string,
    payload: { order: number[]; closed: boolean }
  ): Promise<string> {
    const resp = await fetch(this.url(`/groundtruth/${id}`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (!resp.ok) throw await parseError(resp);
    const body = await resp.json();
    return body.file as string;
  }
}
