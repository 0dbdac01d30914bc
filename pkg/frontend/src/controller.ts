/**
 * Exploration controller: all UI behavior, no DOM.
 *
 * Holds the view state (active entry + dimension, breadcrumb stack,
 * session, suggestion strip) and enforces the two contracts the views
 * rely on: every user action emits exactly one session event through
 * the API, and zoom/badge/suggestion data is held verbatim as served,
 * never reordered or re-scored client-side.
 */

import { ApiFailure, nodeSignature, type CanvasApi } from './api.js';
import type {
  Badge,
  Dimension,
  EntryDoc,
  Meta,
  PathwayDoc,
  Resolution,
  SessionDoc,
  Suggestion,
  ZoomResult,
} from './types.js';

export interface Crumb {
  entryId: string;
  dimension: Dimension;
}

export interface ViewState {
  activeEntryId: string | null;
  activeDimension: Dimension | null;
  breadcrumbs: Crumb[];
  sessionId: string | null;
  suggestions: Suggestion[];
}

export interface ZoomView {
  entry: EntryDoc;
  dimension: Dimension;
  window?: string;
  /** exactly the API response's result field */
  result: ZoomResult;
}

export type BadgeView =
  | { kind: 'scored'; badge: Badge }
  | { kind: 'unevaluated'; entryId: string; blockId: string };

const DEFAULT_WINDOW = '..';

export class ExplorerController {
  readonly state: ViewState = {
    activeEntryId: null,
    activeDimension: null,
    breadcrumbs: [],
    sessionId: null,
    suggestions: [],
  };

  meta: Meta | null = null;
  resolution: Resolution | null = null;
  view: ZoomView | null = null;
  archived: PathwayDoc | null = null;

  constructor(private readonly api: CanvasApi) {}

  async bootstrap(): Promise<Meta> {
    this.meta = await this.api.meta();
    return this.meta;
  }

  async startSession(author: string): Promise<SessionDoc> {
    const session = await this.api.createSession(author);
    this.state.sessionId = session.id;
    return session;
  }

  private requireSession(): string {
    if (!this.state.sessionId) {
      throw new Error('no active session; call startSession first');
    }
    return this.state.sessionId;
  }

  /** Resolve a query, record the query node, land on the target entry. */
  async submitQuery(text: string): Promise<Resolution> {
    const sessionId = this.requireSession();
    const { resolution } = await this.api.query(text);
    await this.api.recordEvent(sessionId, 'query', { text });
    this.resolution = resolution;
    this.state.activeEntryId = resolution.target_entry_id;
    this.state.activeDimension = null;
    this.state.breadcrumbs = [];
    this.view = null;
    return resolution;
  }

  /**
   * Open one dimension of the active entry. Fetches through the
   * session's exclusion filter and records exactly one zoom event.
   */
  async openZoom(dimension: Dimension, window?: string): Promise<ZoomView> {
    const sessionId = this.requireSession();
    const entryId = this.state.activeEntryId;
    if (!entryId) throw new Error('no active entry to zoom into');
    const effectiveWindow =
      dimension === 'temporal' ? (window ?? DEFAULT_WINDOW) : undefined;
    const view = await this.fetchZoom(entryId, dimension, effectiveWindow);
    const params: Record<string, unknown> =
      effectiveWindow === undefined ? {} : { window: effectiveWindow };
    await this.api.recordEvent(sessionId, 'zoom', {
      entry_id: entryId,
      dimension,
      params,
    });
    this.state.activeDimension = dimension;
    this.state.breadcrumbs.push({ entryId, dimension });
    this.view = view;
    return view;
  }

  /** Navigate into a child concept; records the zoom on the child. */
  async openChild(childEntryId: string, dimension: Dimension = 'logical'): Promise<ZoomView> {
    this.requireSession();
    this.state.activeEntryId = childEntryId;
    return this.openZoom(dimension);
  }

  /** Pop the breadcrumb stack and re-display the previous view. */
  async zoomOut(): Promise<ZoomView | null> {
    this.requireSession();
    if (this.state.breadcrumbs.length <= 1) {
      return this.view;
    }
    this.state.breadcrumbs.pop();
    const previous = this.state.breadcrumbs.pop()!;
    this.state.activeEntryId = previous.entryId;
    return this.openZoom(previous.dimension, this.view?.window);
  }

  /** Re-fetch the current view (after an exclusion); no event. */
  async refreshView(): Promise<ZoomView | null> {
    if (!this.view) return null;
    this.view = await this.fetchZoom(
      this.view.entry.id,
      this.view.dimension,
      this.view.window,
    );
    return this.view;
  }

  private async fetchZoom(
    entryId: string,
    dimension: Dimension,
    window?: string,
  ): Promise<ZoomView> {
    const [entry, zoom] = await Promise.all([
      this.api.entry(entryId),
      this.api.zoom(entryId, dimension, {
        window,
        session: this.state.sessionId ?? undefined,
      }),
    ]);
    return { entry, dimension, window, result: zoom.result };
  }

  /** Badge for a block; a missing report renders as "unevaluated". */
  async inspectBadge(entryId: string, blockId: string): Promise<BadgeView> {
    try {
      const badge = await this.api.badge(entryId, blockId);
      return { kind: 'scored', badge };
    } catch (err) {
      if (err instanceof ApiFailure && err.code === 'no_report') {
        return { kind: 'unevaluated', entryId, blockId };
      }
      throw err;
    }
  }

  /** Record that the user examined a source's credibility report. */
  async evaluateSource(reportId: string): Promise<void> {
    const sessionId = this.requireSession();
    await this.api.recordEvent(sessionId, 'source_evaluation', { report_id: reportId });
  }

  /**
   * Exclude a source with a mandatory note. The server records the
   * exclusion node; the current view refreshes through the filter.
   */
  async excludeSource(sourceId: string, note: string): Promise<ZoomView | null> {
    const sessionId = this.requireSession();
    if (!note.trim()) {
      throw new Error('an exclusion requires a non-empty note');
    }
    await this.api.excludeSource(sessionId, sourceId, note);
    return this.refreshView();
  }

  async archive(): Promise<PathwayDoc> {
    const sessionId = this.requireSession();
    this.archived = await this.api.archiveSession(sessionId);
    this.state.sessionId = null;
    return this.archived;
  }

  /** Branch (or resume, when nodeId is omitted) into a fresh session. */
  async branch(
    pathwayId: string,
    version: number,
    author: string,
    nodeId?: string,
  ): Promise<SessionDoc> {
    const session = await this.api.branch(pathwayId, version, author, nodeId);
    this.state.sessionId = session.id;
    this.state.breadcrumbs = [];
    this.state.activeEntryId = null;
    this.state.activeDimension = null;
    this.view = null;
    return session;
  }

  share(pathwayId: string, version: number, recipient: string): Promise<{ token: string }> {
    return this.api.share(pathwayId, version, recipient);
  }

  downloadReport(pathwayId: string, version: number, author?: string): Promise<string> {
    return this.api.report(pathwayId, version, author);
  }

  /** Suggestions for the current view, kept in API order. */
  async refreshSuggestions(): Promise<Suggestion[]> {
    if (!this.view) {
      this.state.suggestions = [];
      return [];
    }
    const params: Record<string, unknown> =
      this.view.window === undefined ? {} : { window: this.view.window };
    const signature = nodeSignature('zoom', {
      entry_id: this.view.entry.id,
      dimension: this.view.dimension,
      params,
    });
    this.state.suggestions = await this.api.suggest(signature);
    return this.state.suggestions;
  }

  /** Reload-equivalent: rebuild state from server data alone. */
  async resumeSession(sessionId: string): Promise<SessionDoc> {
    const session = await this.api.session(sessionId);
    this.state.sessionId = session.id;
    this.state.breadcrumbs = [];
    this.state.activeEntryId = null;
    this.state.activeDimension = null;
    this.view = null;
    for (const node of session.nodes) {
      if (node.kind === 'query') {
        this.state.activeEntryId = null;
      } else if (node.kind === 'zoom') {
        const entryId = node.payload['entry_id'] as string;
        const dimension = node.payload['dimension'] as Dimension;
        this.state.activeEntryId = entryId;
        this.state.activeDimension = dimension;
        this.state.breadcrumbs.push({ entryId, dimension });
      }
    }
    const top = this.state.breadcrumbs[this.state.breadcrumbs.length - 1];
    if (top) {
      const params = session.nodes
        .filter((n) => n.kind === 'zoom')
        .map((n) => n.payload['params'] as { window?: string } | undefined)
        .pop();
      this.view = await this.fetchZoom(top.entryId, top.dimension, params?.window);
    }
    return session;
  }
}
