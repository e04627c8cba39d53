// Data layer for the engine service. Transports are injectable so tests
// can intercept every value that reaches the panes and confirm nothing
// is computed on the way through.

import type {
  RunRequest,
  ScenarioInfo,
  StreamVerdict,
  StreamedFrame,
  TraceDocument,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface StreamHandlers {
  onFrame: (frame: StreamedFrame) => void;
  onVerdict: (verdict: StreamVerdict) => void;
  onError?: (message: string) => void;
}

export interface StreamSource {
  addEventListener(type: string, listener: (ev: MessageEvent) => void): void;
  close(): void;
}

export type StreamFactory = (url: string) => StreamSource;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    // fall through to the status line
  }
  return `${response.status} ${response.statusText}`;
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
    private streamFactory: StreamFactory = (url) => new EventSource(url),
  ) {}

  async scenarios(): Promise<ScenarioInfo[]> {
    const r = await this.fetchImpl(`${this.baseUrl}/api/scenarios`);
    if (!r.ok) throw new ApiError(r.status, await errorDetail(r));
    return (await r.json()) as ScenarioInfo[];
  }

  async submit(request: RunRequest): Promise<string> {
    const r = await this.fetchImpl(`${this.baseUrl}/api/traces`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!r.ok) throw new ApiError(r.status, await errorDetail(r));
    const body = (await r.json()) as { id: string };
    return body.id;
  }

  async fetchTrace(id: string): Promise<TraceDocument> {
    const r = await this.fetchImpl(`${this.baseUrl}/api/traces/${id}`);
    if (!r.ok) throw new ApiError(r.status, await errorDetail(r));
    return (await r.json()) as TraceDocument;
  }

  /** Subscribe to the frame stream; closes itself after the verdict. */
  stream(id: string, handlers: StreamHandlers): () => void {
    const source = this.streamFactory(
      `${this.baseUrl}/api/traces/${id}/stream`,
    );
    source.addEventListener("frame", (ev) => {
      handlers.onFrame(JSON.parse(ev.data) as StreamedFrame);
    });
    source.addEventListener("verdict", (ev) => {
      handlers.onVerdict(JSON.parse(ev.data) as StreamVerdict);
      source.close();
    });
    source.addEventListener("error", () => {
      handlers.onError?.("stream interrupted");
      source.close();
    });
    return () => source.close();
  }

  /** Submit, then stream; resolves with the stored document afterwards. */
  async run(request: RunRequest, handlers: StreamHandlers): Promise<TraceDocument> {
    const id = await this.submit(request);
    await new Promise<void>((resolve) => {
      this.stream(id, {
        onFrame: handlers.onFrame,
        onVerdict: (v) => {
          handlers.onVerdict(v);
          resolve();
        },
        onError: (m) => {
          handlers.onError?.(m);
          resolve();
        },
      });
    });
    return this.fetchTrace(id);
  }
}
