/**
 * DOM rendering for the three zoom panels, the credibility panel and
 * the pathway panel. Pure presentation: items render in the exact
 * order the controller holds them (which is the API's order).
 */

import type { BadgeView, ViewState, ZoomView } from './controller.js';
import type {
  LogicalItem,
  PathwayDoc,
  RegionalItem,
  Suggestion,
  TemporalItem,
} from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export interface ZoomHandlers {
  onOpenChild(entryId: string): void;
  onInspectBlock(entryId: string, blockId: string): void;
}

export function renderZoom(view: ZoomView, handlers: ZoomHandlers): HTMLElement {
  const panel = el('section', 'zoom-panel');
  panel.append(el('h2', 'zoom-title', `${view.entry.title} — ${view.dimension}`));
  if (view.entry.status === 'seed') {
    panel.append(el('p', 'seed-flag', 'machine-initialized entry, pending curation'));
  }
  const body = renderZoomBody(view, handlers);
  panel.append(body);
  return panel;
}

function renderZoomBody(view: ZoomView, handlers: ZoomHandlers): HTMLElement {
  if (view.dimension === 'logical') {
    return renderLogical(view.result as LogicalItem[], handlers);
  }
  if (view.dimension === 'temporal') {
    return renderTemporal(view.result as TemporalItem[], handlers);
  }
  return renderGeographical(view.result as Record<string, RegionalItem[]>, handlers);
}

function renderEmpty(): HTMLElement {
  return el('p', 'empty-state', 'no content in this dimension');
}

function renderLogical(items: LogicalItem[], handlers: ZoomHandlers): HTMLElement {
  if (items.length === 0) return renderEmpty();
  const list = el('ul', 'concept-cards');
  for (const item of items) {
    const card = el('li', 'concept-card');
    if (item.entry_id) {
      const link = el('a', 'concept-link', item.title);
      link.href = '#';
      const target = item.entry_id;
      link.addEventListener('click', (event) => {
        event.preventDefault();
        handlers.onOpenChild(target);
      });
      card.append(link);
    } else {
      card.append(el('span', 'concept-label', item.title));
    }
    if (item.summary && item.summary !== item.title) {
      card.append(el('p', 'concept-summary', item.summary));
    }
    if (item.block_id) {
      card.append(badgeButton(itemEntry(item), item.block_id, handlers));
    }
    list.append(card);
  }
  return list;
}

function itemEntry(item: LogicalItem): string {
  // merged cards carry the child entry id; block-only cards belong to the
  // active entry, which the handler resolves from state
  return item.entry_id ?? '';
}

function renderTemporal(items: TemporalItem[], handlers: ZoomHandlers): HTMLElement {
  if (items.length === 0) return renderEmpty();
  const list = el('ol', 'timeline');
  for (const item of items) {
    const row = el('li', 'milestone');
    row.append(el('time', 'milestone-date', item.date));
    row.append(el('span', 'milestone-text', `${item.date.slice(0, 4)}: ${item.text}`));
    row.append(badgeButton(item.entry_id, item.block_id, handlers));
    list.append(row);
  }
  return list;
}

function renderGeographical(
  grouped: Record<string, RegionalItem[]>,
  handlers: ZoomHandlers,
): HTMLElement {
  const regions = Object.keys(grouped);
  if (regions.length === 0) return renderEmpty();
  const container = el('div', 'region-list');
  for (const region of regions) {
    const section = el('section', 'region');
    section.append(el('h3', 'region-code', region));
    const list = el('ul');
    for (const item of grouped[region] ?? []) {
      const row = el('li', 'region-view', item.text);
      row.append(badgeButton(item.entry_id, item.block_id, handlers));
      list.append(row);
    }
    section.append(list);
    container.append(section);
  }
  return container;
}

function badgeButton(entryId: string, blockId: string, handlers: ZoomHandlers): HTMLElement {
  const button = el('button', 'badge-button', 'credibility');
  button.addEventListener('click', () => handlers.onInspectBlock(entryId, blockId));
  return button;
}

export interface CredibilityHandlers {
  onExclude(sourceId: string, note: string): void;
}

export function renderCredibilityPanel(
  view: BadgeView,
  handlers: CredibilityHandlers,
): HTMLElement {
  const panel = el('aside', 'credibility-panel');
  if (view.kind === 'unevaluated') {
    panel.append(el('p', 'badge unevaluated', 'unevaluated'));
    return panel;
  }
  const badge = view.badge;
  panel.append(el('p', 'badge', `combined score: ${badge.combined_score}`));
  panel.append(el('p', 'badge-content', `content score: ${badge.content_score}`));
  panel.append(el('p', 'badge-source', `source: ${badge.source_id}`));
  const breakdown = el('dl', 'breakdown');
  for (const [group, values] of [
    ['evidence', badge.evidence],
    ['narrative', badge.narrative],
  ] as const) {
    for (const key of Object.keys(values)) {
      breakdown.append(el('dt', undefined, `${group}.${key}`));
      breakdown.append(el('dd', undefined, String(values[key])));
    }
  }
  panel.append(breakdown);

  const form = el('form', 'exclude-form');
  const note = el('input') as HTMLInputElement;
  note.placeholder = 'why exclude this source? (required)';
  note.required = true;
  const submit = el('button', undefined, 'exclude source');
  form.append(note, submit);
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    if (!note.value.trim()) {
      note.setCustomValidity('a note is required');
      note.reportValidity();
      return;
    }
    handlers.onExclude(badge.source_id, note.value);
  });
  panel.append(form);
  return panel;
}

export interface PathwayHandlers {
  onArchive(): void;
  onBranch(nodeId: string): void;
  onShare(recipient: string): void;
  onDownloadReport(): void;
}

export function renderPathwayPanel(
  state: ViewState,
  archived: PathwayDoc | null,
  handlers: PathwayHandlers,
): HTMLElement {
  const panel = el('section', 'pathway-panel');
  const crumbs = el('nav', 'breadcrumbs');
  for (const crumb of state.breadcrumbs) {
    crumbs.append(el('span', 'crumb', `${crumb.entryId}/${crumb.dimension}`));
  }
  panel.append(crumbs);

  if (state.sessionId) {
    const archiveButton = el('button', 'archive', 'archive session');
    archiveButton.addEventListener('click', () => handlers.onArchive());
    panel.append(archiveButton);
  }

  if (archived) {
    panel.append(el('h3', undefined,
      `pathway ${archived.id} v${archived.version} by ${archived.author}`));
    const graph = el('ul', 'interaction-graph');
    for (const node of archived.nodes) {
      const row = el('li', `node node-${node.kind}`,
        `${node.id} ${node.kind}`);
      const branchButton = el('button', 'branch', 'branch here');
      branchButton.addEventListener('click', () => handlers.onBranch(node.id));
      row.append(branchButton);
      graph.append(row);
    }
    panel.append(graph);
    const shareForm = el('form', 'share-form');
    const recipient = el('input') as HTMLInputElement;
    recipient.placeholder = "author id or '*'";
    const shareButton = el('button', undefined, 'share');
    shareForm.append(recipient, shareButton);
    shareForm.addEventListener('submit', (event) => {
      event.preventDefault();
      if (recipient.value) handlers.onShare(recipient.value);
    });
    panel.append(shareForm);
    const download = el('button', 'download-report', 'download report');
    download.addEventListener('click', () => handlers.onDownloadReport());
    panel.append(download);
  }
  return panel;
}

export function renderSuggestions(suggestions: Suggestion[]): HTMLElement {
  const strip = el('aside', 'suggestion-strip');
  for (const suggestion of suggestions) {
    strip.append(el('span', 'suggestion',
      `${suggestion.kind} ×${suggestion.count}`));
  }
  return strip;
}

export function renderErrorBanner(message: string): HTMLElement {
  return el('div', 'error-banner', message);
}
