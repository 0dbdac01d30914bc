/**
 * Typed client for the canvas HTTP API.
 *
 * Responses are returned exactly as served; nothing is reordered,
 * filtered or re-scored here. Failures carry the server's structured
 * error body when one exists.
 */

import type {
  Badge,
  Dimension,
  EntryDoc,
  EventResponse,
  Exclusion,
  Meta,
  NodeDoc,
  NodeKind,
  PathwayDoc,
  PathwaySummary,
  QueryResponse,
  SessionDoc,
  SourceInfo,
  Suggestion,
  ZoomResponse,
} from './types.js';

export class ApiUnavailable extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'ApiUnavailable';
  }
}

export class ApiFailure extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiFailure';
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** The surface the controller drives; ApiClient is the HTTP implementation. */
export interface CanvasApi {
  meta(): Promise<Meta>;
  query(text: string): Promise<QueryResponse>;
  entry(entryId: string): Promise<EntryDoc>;
  zoom(
    entryId: string,
    dimension: Dimension,
    options?: { window?: string; session?: string },
  ): Promise<ZoomResponse>;
  badge(entryId: string, blockId: string): Promise<Badge>;
  source(sourceId: string): Promise<SourceInfo>;
  createSession(author: string): Promise<SessionDoc>;
  session(sessionId: string): Promise<SessionDoc>;
  recordEvent(
    sessionId: string,
    kind: NodeKind,
    payload: Record<string, unknown>,
  ): Promise<EventResponse>;
  excludeSource(
    sessionId: string,
    sourceId: string,
    note: string,
  ): Promise<{ session_id: string; node: NodeDoc; exclusions: Exclusion[] }>;
  archiveSession(sessionId: string): Promise<PathwayDoc>;
  pathways(author?: string): Promise<PathwaySummary[]>;
  pathway(pathwayId: string, version: number, author?: string): Promise<PathwayDoc>;
  branch(
    pathwayId: string,
    version: number,
    author: string,
    nodeId?: string,
  ): Promise<SessionDoc>;
  share(pathwayId: string, version: number, recipient: string): Promise<{ token: string }>;
  report(pathwayId: string, version: number, author?: string): Promise<string>;
  suggest(signature: string): Promise<Suggestion[]>;
}

export class ApiClient implements CanvasApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private readonly token: string | null = null,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { 'Content-Type': 'application/json' };
    if (this.token) {
      headers['Authorization'] = `Bearer ${this.token}`;
    }
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiUnavailable(`API unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      let code = 'http_error';
      let message = `${method} ${path}: HTTP ${response.status}`;
      try {
        const parsed = (await response.json()) as { error?: { code: string; message: string } };
        if (parsed.error) {
          code = parsed.error.code;
          message = parsed.error.message;
        }
      } catch {
        // non-JSON error body: keep the generic message
      }
      throw new ApiFailure(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  meta(): Promise<Meta> {
    return this.request('GET', '/meta');
  }

  query(text: string): Promise<QueryResponse> {
    return this.request('POST', '/query', { text });
  }

  entry(entryId: string): Promise<EntryDoc> {
    return this.request('GET', `/entries/${encodeURIComponent(entryId)}`);
  }

  zoom(
    entryId: string,
    dimension: Dimension,
    options: { window?: string; session?: string } = {},
  ): Promise<ZoomResponse> {
    const params = new URLSearchParams();
    if (options.window) params.set('window', options.window);
    if (options.session) params.set('session', options.session);
    const suffix = params.size > 0 ? `?${params.toString()}` : '';
    return this.request(
      'GET',
      `/entries/${encodeURIComponent(entryId)}/zoom/${dimension}${suffix}`,
    );
  }

  badge(entryId: string, blockId: string): Promise<Badge> {
    return this.request(
      'GET',
      `/entries/${encodeURIComponent(entryId)}/blocks/${encodeURIComponent(blockId)}/badge`,
    );
  }

  source(sourceId: string): Promise<SourceInfo> {
    return this.request('GET', `/sources/${encodeURIComponent(sourceId)}`);
  }

  createSession(author: string): Promise<SessionDoc> {
    return this.request('POST', '/sessions', { author });
  }

  session(sessionId: string): Promise<SessionDoc> {
    return this.request('GET', `/sessions/${encodeURIComponent(sessionId)}`);
  }

  recordEvent(
    sessionId: string,
    kind: NodeKind,
    payload: Record<string, unknown>,
  ): Promise<EventResponse> {
    return this.request('POST', `/sessions/${encodeURIComponent(sessionId)}/events`, {
      kind,
      payload,
    });
  }

  excludeSource(
    sessionId: string,
    sourceId: string,
    note: string,
  ): Promise<{ session_id: string; node: NodeDoc; exclusions: Exclusion[] }> {
    return this.request('POST', `/sessions/${encodeURIComponent(sessionId)}/exclusions`, {
      source_id: sourceId,
      note,
    });
  }

  archiveSession(sessionId: string): Promise<PathwayDoc> {
    return this.request('POST', `/sessions/${encodeURIComponent(sessionId)}/archive`);
  }

  pathways(author?: string): Promise<PathwaySummary[]> {
    const suffix = author ? `?author=${encodeURIComponent(author)}` : '';
    return this.request('GET', `/pathways${suffix}`);
  }

  pathway(pathwayId: string, version: number, author?: string): Promise<PathwayDoc> {
    const suffix = author ? `?author=${encodeURIComponent(author)}` : '';
    return this.request(
      'GET',
      `/pathways/${encodeURIComponent(pathwayId)}/${version}${suffix}`,
    );
  }

  branch(
    pathwayId: string,
    version: number,
    author: string,
    nodeId?: string,
  ): Promise<SessionDoc> {
    return this.request(
      'POST',
      `/pathways/${encodeURIComponent(pathwayId)}/${version}/branch`,
      nodeId ? { author, node_id: nodeId } : { author },
    );
  }

  share(
    pathwayId: string,
    version: number,
    recipient: string,
  ): Promise<{ token: string }> {
    return this.request(
      'POST',
      `/pathways/${encodeURIComponent(pathwayId)}/${version}/share`,
      { recipient },
    );
  }

  /** Raw report bytes, delivered unmodified for download. */
  async report(pathwayId: string, version: number, author?: string): Promise<string> {
    const suffix = author ? `?author=${encodeURIComponent(author)}` : '';
    const headers: Record<string, string> = {};
    if (this.token) headers['Authorization'] = `Bearer ${this.token}`;
    let response: Response;
    try {
      response = await this.fetchImpl(
        `${this.baseUrl}/pathways/${encodeURIComponent(pathwayId)}/${version}/report${suffix}`,
        { headers },
      );
    } catch (err) {
      throw new ApiUnavailable(`API unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      throw new ApiFailure(response.status, 'http_error', `report: HTTP ${response.status}`);
    }
    return response.text();
  }

  suggest(signature: string): Promise<Suggestion[]> {
    return this.request('GET', `/suggest?signature=${encodeURIComponent(signature)}`);
  }
}

/** Canonical node signature matching the server's suggestion keys. */
export function nodeSignature(kind: NodeKind, payload: Record<string, unknown>): string {
  const cleaned: Record<string, unknown> = {};
  for (const key of Object.keys(payload)) {
    if (key !== 'timestamp' && key !== 'ts') cleaned[key] = payload[key];
  }
  return stableStringify({ kind, payload: cleaned });
}

/** JSON with recursively sorted keys, matching the server's canonical form. */
export function stableStringify(value: unknown): string {
  if (value === null || typeof value !== 'object') {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return `[${value.map(stableStringify).join(',')}]`;
  }
  const record = value as Record<string, unknown>;
  const parts = Object.keys(record)
    .sort()
    .map((key) => `${JSON.stringify(key)}:${stableStringify(record[key])}`);
  return `{${parts.join(',')}}`;
}
