// Thin typed client over the mission service HTTP/SSE API. Every method
// maps 1:1 onto a documented endpoint; errors carry the server's
// {error, detail} body.

import { SseParser } from "./sse.js";
import type {
  Frame,
  IntentForm,
  MissionRecord,
  QueryResult,
  SimDefaults,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly error: string,
    readonly detail: string,
  ) {
    super(`${error}: ${detail}`);
  }
}

export interface IntentResponse {
  id: string;
  brief: MissionRecord["brief"];
  plan: MissionRecord["plan"];
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let error = "error";
    let detail = response.statusText;
    try {
      const body = await response.json();
      error = body.error ?? error;
      detail = body.detail ?? detail;
    } catch {
      // non-JSON error body: keep the status text
    }
    throw new ApiError(response.status, error, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private get<T>(path: string): Promise<T> {
    return fetch(this.baseUrl + path).then((r) => asJson<T>(r));
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    }).then((r) => asJson<T>(r));
  }

  config(): Promise<SimDefaults> {
    return this.get("/api/config");
  }

  metrics(): Promise<Record<string, number>> {
    return this.get("/api/ontology/metrics");
  }

  query(expr: string): Promise<QueryResult> {
    return this.post("/api/query", { expr });
  }

  submitIntent(form: IntentForm): Promise<IntentResponse> {
    return this.post("/api/intent", form);
  }

  mission(id: string): Promise<MissionRecord> {
    return this.get(`/api/mission/${id}`);
  }

  approve(id: string): Promise<MissionRecord> {
    return this.post(`/api/mission/${id}/approve`);
  }

  reject(id: string): Promise<MissionRecord> {
    return this.post(`/api/mission/${id}/reject`);
  }

  run(id: string): Promise<{ id: string; status: string }> {
    return this.post(`/api/mission/${id}/run`);
  }

  trajectoryUrl(id: string): string {
    return `${this.baseUrl}/api/mission/${id}/trajectory`;
  }

  async trajectory(id: string): Promise<Frame[]> {
    const response = await fetch(this.trajectoryUrl(id));
    if (!response.ok) {
      throw new ApiError(response.status, "not_found", "no trajectory");
    }
    const text = await response.text();
    return text
      .split("\n")
      .filter((line) => line.trim().length > 0)
      .map((line) => JSON.parse(line) as Frame);
  }

  // Follows the mission's SSE stream until the "done" event. Malformed
  // frames are skipped and counted rather than aborting the stream.
  async stream(
    id: string,
    onFrame: (frame: Frame) => void,
  ): Promise<{ outcome: string; skipped: number }> {
    const response = await fetch(
      `${this.baseUrl}/api/mission/${id}/stream`,
    );
    if (!response.ok || response.body === null) {
      return asJson(response); // throws with the server's error body
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    const parser = new SseParser();
    let skipped = 0;
    for (;;) {
      const { value, done } = await reader.read();
      if (done) break;
      for (const event of parser.push(decoder.decode(value))) {
        if (event.event === "done") {
          reader.cancel().catch(() => {});
          return { outcome: JSON.parse(event.data).outcome, skipped };
        }
        if (event.event !== "frame") continue;
        try {
          const frame = JSON.parse(event.data) as Frame;
          if (typeof frame.t !== "number" || !Array.isArray(frame.sheep)) {
            throw new Error("malformed frame");
          }
          onFrame(frame);
        } catch {
          skipped += 1;
        }
      }
    }
    throw new Error("stream ended without a done event");
  }
}
