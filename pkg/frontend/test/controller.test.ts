import { beforeEach, describe, expect, it } from 'vitest';

import { ExplorerController } from '../src/controller.js';
import type { TemporalItem } from '../src/types.js';
import { FakeApi } from './fakes.js';

describe('ExplorerController', () => {
  let api: FakeApi;
  let controller: ExplorerController;

  beforeEach(async () => {
    api = new FakeApi();
    controller = new ExplorerController(api);
    await controller.bootstrap();
    await controller.startSession('operator');
  });

  it('emits exactly one event per displayed action', async () => {
    await controller.submitQuery('what is the root about?');
    expect(api.events.map((e) => e.kind)).toEqual(['query']);

    await controller.openZoom('logical');
    await controller.openZoom('temporal', '2013-01-01..2024-01-01');
    await controller.openZoom('geographical');
    expect(api.events.map((e) => e.kind)).toEqual(['query', 'zoom', 'zoom', 'zoom']);

    await controller.evaluateSource('rpt-0001');
    await controller.excludeSource('src-a', 'weak sourcing');
    expect(api.events.map((e) => e.kind)).toEqual([
      'query', 'zoom', 'zoom', 'zoom', 'source_evaluation', 'source_exclusion',
    ]);
    // a view refresh after exclusion emits no extra event
    await controller.refreshView();
    expect(api.events).toHaveLength(6);
  });

  it('records zoom payloads with the entry, dimension and params', async () => {
    await controller.submitQuery('root');
    await controller.openZoom('temporal', '2013-01-01..2024-01-01');
    const zoomEvent = api.events[1]!;
    expect(zoomEvent.payload).toEqual({
      entry_id: 'root',
      dimension: 'temporal',
      params: { window: '2013-01-01..2024-01-01' },
    });
  });

  it('keeps the breadcrumb top equal to the active view', async () => {
    await controller.submitQuery('root');
    await controller.openZoom('logical');
    expect(controller.state.breadcrumbs).toEqual([
      { entryId: 'root', dimension: 'logical' },
    ]);
    await controller.openChild('child-a');
    expect(controller.state.activeEntryId).toBe('child-a');
    expect(controller.state.breadcrumbs.at(-1)).toEqual({
      entryId: 'child-a',
      dimension: 'logical',
    });
    // navigating into a child records a zoom event on the child
    expect(api.events.at(-1)).toMatchObject({
      kind: 'zoom',
      payload: { entry_id: 'child-a', dimension: 'logical' },
    });
    await controller.zoomOut();
    expect(controller.state.activeEntryId).toBe('root');
    expect(controller.state.breadcrumbs.at(-1)).toEqual({
      entryId: 'root',
      dimension: 'logical',
    });
  });

  it('passes zoom results through verbatim, never reordering', async () => {
    await controller.submitQuery('root');
    const view = await controller.openZoom('temporal', '..');
    // the fake serves its timeline deliberately out of order
    expect((view.result as TemporalItem[]).map((m) => m.text)).toEqual([
      'second', 'first',
    ]);
    expect(JSON.stringify(view.result)).toBe(JSON.stringify(api.timeline));
  });

  it('refreshes through the exclusion filter after excluding', async () => {
    await controller.submitQuery('root');
    await controller.openZoom('temporal', '..');
    const refreshed = await controller.excludeSource('src-a', 'sensationalist coverage');
    expect((refreshed!.result as TemporalItem[]).map((m) => m.text)).toEqual(['second']);
  });

  it('rejects exclusions with an empty note before calling the API', async () => {
    await controller.submitQuery('root');
    await controller.openZoom('temporal', '..');
    await expect(controller.excludeSource('src-a', '   ')).rejects.toThrow(/note/);
    expect(api.events.filter((e) => e.kind === 'source_exclusion')).toHaveLength(0);
  });

  it('renders an unevaluated badge when no report exists', async () => {
    const badgeView = await controller.inspectBadge('root', 'm1');
    expect(badgeView).toEqual({ kind: 'unevaluated', entryId: 'root', blockId: 'm1' });
  });

  it('surfaces scored badges exactly as served', async () => {
    api.badges.set('root/m1', {
      combined_score: 0.87,
      content_score: 0.9,
      report_id: 'rpt-0001',
      source_id: 'src-a',
      evidence: {},
      narrative: {},
      profile_before: {},
    });
    const badgeView = await controller.inspectBadge('root', 'm1');
    expect(badgeView.kind).toBe('scored');
    if (badgeView.kind === 'scored') {
      expect(badgeView.badge.combined_score).toBe(0.87);
    }
  });

  it('keeps suggestions in API order', async () => {
    api.suggestions = [
      { signature: 's1', kind: 'zoom', payload: {}, count: 1 },
      { signature: 's0', kind: 'annotation', payload: {}, count: 5 },
    ];
    await controller.submitQuery('root');
    await controller.openZoom('logical');
    const suggestions = await controller.refreshSuggestions();
    expect(suggestions.map((s) => s.signature)).toEqual(['s1', 's0']);
  });

  it('archives and can branch into a fresh session', async () => {
    await controller.submitQuery('root');
    await controller.openZoom('logical');
    const pathway = await controller.archive();
    expect(pathway.nodes.map((n) => n.kind)).toEqual(['query', 'zoom']);
    expect(controller.state.sessionId).toBeNull();
    const session = await controller.branch(pathway.id, pathway.version, 'operator', 'n-0001');
    expect(session.id).toBe('ses-0002');
    expect(controller.state.sessionId).toBe('ses-0002');
    expect(controller.state.breadcrumbs).toEqual([]);
  });

  it('reconstructs view state from server data alone on resume', async () => {
    await controller.submitQuery('root');
    await controller.openZoom('logical');
    await controller.openZoom('temporal', '..');
    const rebuilt = new ExplorerController(api);
    await rebuilt.resumeSession('ses-0001');
    expect(rebuilt.state.breadcrumbs).toEqual(controller.state.breadcrumbs);
    expect(rebuilt.state.activeEntryId).toBe(controller.state.activeEntryId);
    expect(rebuilt.state.activeDimension).toBe(controller.state.activeDimension);
    expect(JSON.stringify(rebuilt.view?.result)).toBe(JSON.stringify(controller.view?.result));
  });
});
