/**
 * Drives the real service: the controller walks the full exploration
 * loop and must archive a pathway node-for-node identical to a headless
 * scripted run of the same actions, and every displayed value must
 * byte-match the API response it came from.
 *
 * Skipped when the backing Python package is not importable.
 */

import { spawn, spawnSync, type ChildProcess } from 'node:child_process';
import { mkdtempSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { fileURLToPath } from 'node:url';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient, nodeSignature } from '../src/api.js';
import { ExplorerController } from '../src/controller.js';
import type { NodeDoc, PathwayDoc, TemporalItem } from '../src/types.js';

const PYTHON = 'python3';
const FROZEN_NOW = '2026-06-06T00:00:00Z';
const PRIMARY_QUESTION =
  'What are the global risks and governance challenges associated with ' +
  'AI safety in the 21st century?';
const WINDOW = '2013-01-01..2024-01-01';

const seedCorpus = fileURLToPath(
  new URL('../../src/canvas/data/seed_corpus.ndjson', import.meta.url),
);

const backendAvailable =
  spawnSync(PYTHON, ['-c', 'import canvas'], { stdio: 'ignore' }).status === 0;

describe.skipIf(!backendAvailable)('against the live service', () => {
  const port = 8900 + Math.floor(Math.random() * 800);
  const base = `http://127.0.0.1:${port}`;
  let dataDir: string;
  let server: ChildProcess;

  beforeAll(async () => {
    dataDir = mkdtempSync(join(tmpdir(), 'canvas-ui-'));
    const env = { ...process.env, CANVAS_FROZEN_NOW: FROZEN_NOW };
    const imported = spawnSync(
      PYTHON,
      ['-m', 'canvas.cli', '--data-dir', dataDir, 'import', seedCorpus],
      { env, stdio: 'ignore' },
    );
    expect(imported.status).toBe(0);
    server = spawn(
      PYTHON,
      ['-m', 'canvas.cli', '--data-dir', dataDir, 'serve', '--port', String(port)],
      { env, stdio: 'ignore' },
    );
    for (let attempt = 0; attempt < 100; attempt += 1) {
      try {
        const response = await fetch(`${base}/meta`);
        if (response.ok) return;
      } catch {
        // not up yet
      }
      await new Promise((resolve) => setTimeout(resolve, 200));
    }
    throw new Error('service did not come up');
  }, 40000);

  afterAll(() => {
    server?.kill('SIGTERM');
    if (dataDir) rmSync(dataDir, { recursive: true, force: true });
  });

  async function headlessScriptedRun(): Promise<PathwayDoc> {
    const post = async (path: string, body?: unknown) => {
      const response = await fetch(`${base}${path}`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
      expect(response.ok).toBe(true);
      return response.json();
    };
    const session = (await post('/sessions', { author: 'operator' })) as { id: string };
    const sid = session.id;
    await post(`/sessions/${sid}/events`, {
      kind: 'query',
      payload: { text: PRIMARY_QUESTION },
    });
    await fetch(`${base}/entries/ai-safety/zoom/logical?session=${sid}`);
    await post(`/sessions/${sid}/events`, {
      kind: 'zoom',
      payload: { entry_id: 'ai-safety', dimension: 'logical', params: {} },
    });
    await fetch(
      `${base}/entries/ai-safety/zoom/temporal?window=${WINDOW}&session=${sid}`,
    );
    await post(`/sessions/${sid}/events`, {
      kind: 'zoom',
      payload: { entry_id: 'ai-safety', dimension: 'temporal', params: { window: WINDOW } },
    });
    await fetch(`${base}/entries/ai-safety/zoom/geographical?session=${sid}`);
    await post(`/sessions/${sid}/events`, {
      kind: 'zoom',
      payload: { entry_id: 'ai-safety', dimension: 'geographical', params: {} },
    });
    for (const reportId of ['rpt-0001', 'rpt-0002', 'rpt-0003']) {
      await post(`/sessions/${sid}/events`, {
        kind: 'source_evaluation',
        payload: { report_id: reportId },
      });
    }
    await post(`/sessions/${sid}/exclusions`, {
      source_id: 'src-tabloid',
      note: 'sensationalist coverage',
    });
    return (await post(`/sessions/${sid}/archive`)) as PathwayDoc;
  }

  it('archives the walkthrough node-for-node like the headless script', async () => {
    const api = new ApiClient(base);
    const controller = new ExplorerController(api);
    await controller.bootstrap();
    await controller.startSession('operator');
    await controller.submitQuery(PRIMARY_QUESTION);
    await controller.openZoom('logical');
    await controller.openZoom('temporal', WINDOW);
    await controller.openZoom('geographical');
    for (const reportId of ['rpt-0001', 'rpt-0002', 'rpt-0003']) {
      await controller.evaluateSource(reportId);
    }
    await controller.excludeSource('src-tabloid', 'sensationalist coverage');
    const uiPathway = await controller.archive();

    const scripted = await headlessScriptedRun();

    const strip = (nodes: NodeDoc[]) =>
      nodes.map((n) => ({ id: n.id, kind: n.kind, timestamp: n.timestamp, payload: n.payload }));
    expect(strip(uiPathway.nodes)).toEqual(strip(scripted.nodes));
    expect(uiPathway.edges).toEqual(scripted.edges);
    expect(uiPathway.exclusions).toEqual(scripted.exclusions);
    expect(uiPathway.nodes.map((n) => n.kind)).toEqual([
      'query', 'zoom', 'zoom', 'zoom',
      'source_evaluation', 'source_evaluation', 'source_evaluation',
      'source_exclusion',
    ]);
  }, 40000);

  it('displays timeline, badge and suggestions byte-identical to the API', async () => {
    const api = new ApiClient(base);
    const controller = new ExplorerController(api);
    await controller.bootstrap();
    await controller.startSession('operator');
    await controller.submitQuery(PRIMARY_QUESTION);
    const view = await controller.openZoom('temporal', WINDOW);

    const sid = controller.state.sessionId!;
    const raw = await (
      await fetch(`${base}/entries/ai-safety/zoom/temporal?window=${WINDOW}&session=${sid}`)
    ).json();
    expect(JSON.stringify(view.result)).toBe(JSON.stringify(raw.result));
    const timeline = view.result as TemporalItem[];
    expect(timeline).toHaveLength(11);
    expect(timeline[0]!.text).toBe("Nick Bostrom's 'Superintelligence' published");

    const badgeView = await controller.inspectBadge('ai-safety', 'm-2016-alphago');
    expect(badgeView.kind).toBe('scored');
    if (badgeView.kind === 'scored') {
      const rawBadge = await (
        await fetch(`${base}/entries/ai-safety/blocks/m-2016-alphago/badge`)
      ).json();
      expect(JSON.stringify(badgeView.badge)).toBe(JSON.stringify(rawBadge));
    }

    const suggestions = await controller.refreshSuggestions();
    const signature = nodeSignature('zoom', {
      entry_id: 'ai-safety',
      dimension: 'temporal',
      params: { window: WINDOW },
    });
    const rawSuggestions = await (
      await fetch(`${base}/suggest?signature=${encodeURIComponent(signature)}`)
    ).json();
    expect(JSON.stringify(suggestions)).toBe(JSON.stringify(rawSuggestions));

    // a cited block with no report renders as unevaluated, not as an error
    const unevaluated = await controller.inspectBadge('ai-safety', 'b-region-us');
    expect(unevaluated.kind).toBe('unevaluated');
  }, 40000);
});
