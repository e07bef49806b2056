// Test plumbing: an ApiClient wired to canned responses, recording what the
// UI asked for — the single-source-of-truth checks compare rendered values
// against exactly these bodies.

import { ApiClient } from "../src/api.js";

export interface Exchange {
  method: string;
  url: string;
  body?: unknown;
}

export class FakeServer {
  readonly exchanges: Exchange[] = [];
  private handlers: Array<{
    method: string;
    pattern: RegExp;
    respond: (body: unknown) => { status?: number; body: unknown };
  }> = [];

  on(method: string, pattern: RegExp,
     respond: (body: unknown) => { status?: number; body: unknown }): void {
    this.handlers.push({ method, pattern, respond });
  }

  override(method: string, pattern: RegExp,
           respond: (body: unknown) => { status?: number; body: unknown }): void {
    this.handlers.unshift({ method, pattern, respond });
  }

  client(): ApiClient {
    const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
      const method = init?.method ?? "GET";
      const body = init?.body ? JSON.parse(init.body as string) : undefined;
      this.exchanges.push({ method, url, body });
      for (const handler of this.handlers) {
        if (handler.method === method && handler.pattern.test(url)) {
          const out = handler.respond(body);
          const status = out.status ?? 200;
          return new Response(status === 204 ? null : JSON.stringify(out.body), {
            status,
            headers: { "Content-Type": "application/json" },
          });
        }
      }
      return new Response(JSON.stringify({ detail: `no handler for ${method} ${url}` }),
        { status: 404 });
    };
    return new ApiClient(fetchFn);
  }
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
