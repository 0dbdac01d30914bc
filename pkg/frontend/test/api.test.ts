import { describe, expect, it } from 'vitest';

import { ApiClient, ApiFailure, ApiUnavailable, nodeSignature, stableStringify } from '../src/api.js';

function stubFetch(status: number, body: unknown) {
  const calls: Array<{ url: string; init?: RequestInit }> = [];
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { 'Content-Type': 'application/json' },
    });
  };
  return { calls, impl };
}

describe('ApiClient', () => {
  it('hits the documented endpoints with the right verbs', async () => {
    const { calls, impl } = stubFetch(200, { ok: true });
    const client = new ApiClient('http://host', impl);
    await client.meta();
    await client.query('ai safety');
    await client.entry('ai-safety');
    await client.zoom('ai-safety', 'temporal', { window: '2013-01-01..2024-01-01', session: 's1' });
    await client.recordEvent('s1', 'query', { text: 'x' });
    await client.excludeSource('s1', 'src-t', 'note');
    await client.archiveSession('s1');
    await client.branch('pwy-0001', 1, 'alex');
    await client.share('pwy-0001', 1, 'bob');
    await client.suggest('{"kind":"query"}');
    const summary = calls.map((c) => `${c.init?.method ?? 'GET'} ${c.url}`);
    expect(summary).toEqual([
      'GET http://host/meta',
      'POST http://host/query',
      'GET http://host/entries/ai-safety',
      'GET http://host/entries/ai-safety/zoom/temporal?window=2013-01-01..2024-01-01&session=s1',
      'POST http://host/sessions/s1/events',
      'POST http://host/sessions/s1/exclusions',
      'POST http://host/sessions/s1/archive',
      'POST http://host/pathways/pwy-0001/1/branch',
      'POST http://host/pathways/pwy-0001/1/share',
      'GET http://host/suggest?signature=%7B%22kind%22%3A%22query%22%7D',
    ]);
  });

  it('sends a bearer token when configured', async () => {
    const { calls, impl } = stubFetch(200, {});
    const client = new ApiClient('http://host', impl, 'token-alex');
    await client.meta();
    const headers = calls[0]!.init?.headers as Record<string, string>;
    expect(headers['Authorization']).toBe('Bearer token-alex');
  });

  it('maps structured error bodies to ApiFailure', async () => {
    const { impl } = stubFetch(404, { error: { code: 'unknown_entry', message: 'no entry' } });
    const client = new ApiClient('http://host', impl);
    await expect(client.entry('missing')).rejects.toMatchObject({
      name: 'ApiFailure',
      status: 404,
      code: 'unknown_entry',
    });
  });

  it('maps network failures to ApiUnavailable', async () => {
    const client = new ApiClient('http://host', async () => {
      throw new TypeError('fetch failed');
    });
    await expect(client.meta()).rejects.toBeInstanceOf(ApiUnavailable);
  });
});

describe('canonical signatures', () => {
  it('sorts keys recursively like the server', () => {
    expect(stableStringify({ b: 1, a: { d: [2, { z: 1, y: 0 }], c: null } })).toBe(
      '{"a":{"c":null,"d":[2,{"y":0,"z":1}]},"b":1}',
    );
  });

  it('strips timestamps from payloads', () => {
    expect(
      nodeSignature('zoom', { entry_id: 'e', dimension: 'logical', timestamp: 'now' }),
    ).toBe('{"kind":"zoom","payload":{"dimension":"logical","entry_id":"e"}}');
  });
});
