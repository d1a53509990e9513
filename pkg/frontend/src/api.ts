import {
  Direction,
  EnabledResponse,
  FireResponse,
  LtsView,
  NetDoc,
  SessionCreated,
  StateView,
} from './types.js';

/** Everything the client may ask of the stepping service. */
export interface Transport {
  createSession(net: NetDoc | null, semantics?: string): Promise<SessionCreated>;
  getState(session: string): Promise<StateView>;
  getEnabled(session: string, direction: Direction, semantics?: string): Promise<EnabledResponse>;
  fire(
    session: string,
    body: { version: number; direction: Direction; moveIndex: number; semantics?: string },
  ): Promise<FireResponse>;
  undo(session: string): Promise<{ state: StateView }>;
  getLts(session: string, maxStates: number): Promise<LtsView>;
}

export class HttpError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** fetch-based transport against a running stepping service. */
export class HttpTransport implements Transport {
  constructor(private base: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await fetch(this.base + path, {
      method,
      headers: { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) {
      const detail = await res.text();
      throw new HttpError(res.status, `${method} ${path}: ${detail}`);
    }
    return res.json() as Promise<T>;
  }

  createSession(net: NetDoc | null, semantics?: string): Promise<SessionCreated> {
    const body: Record<string, unknown> = {};
    if (net) body.net = net;
    if (semantics) body.semantics = semantics;
    return this.request('POST', '/session', body);
  }

  getState(session: string): Promise<StateView> {
    return this.request('GET', `/session/${session}/state`);
  }

  getEnabled(session: string, direction: Direction, semantics?: string): Promise<EnabledResponse> {
    const params = new URLSearchParams({ direction });
    if (semantics) params.set('semantics', semantics);
    return this.request('GET', `/session/${session}/enabled?${params}`);
  }

  fire(
    session: string,
    body: { version: number; direction: Direction; moveIndex: number; semantics?: string },
  ): Promise<FireResponse> {
    return this.request('POST', `/session/${session}/fire`, body);
  }

  undo(session: string): Promise<{ state: StateView }> {
    return this.request('POST', `/session/${session}/undo`);
  }

  getLts(session: string, maxStates: number): Promise<LtsView> {
    return this.request('GET', `/session/${session}/lts?maxStates=${maxStates}`);
  }
}
