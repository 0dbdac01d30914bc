/**
 * Entry point: wires the controller to the page.
 *
 * The API base defaults to the serving origin; a data-api-base
 * attribute on <body> overrides it for development setups where the
 * service runs on another port.
 */

import { ApiClient, ApiUnavailable } from './api.js';
import { ExplorerController } from './controller.js';
import {
  renderCredibilityPanel,
  renderErrorBanner,
  renderPathwayPanel,
  renderSuggestions,
  renderZoom,
} from './views.js';
import type { Dimension } from './types.js';

function mount(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

export async function boot(): Promise<void> {
  const apiBase = document.body.dataset['apiBase'] ?? '';
  const author = document.body.dataset['author'] ?? 'operator';
  const controller = new ExplorerController(new ApiClient(apiBase));

  const banner = mount('banner');
  const queryForm = mount('query-form') as unknown as HTMLFormElement;
  const queryInput = mount('query-input') as unknown as HTMLInputElement;
  const questionList = mount('question-list');
  const zoomBar = mount('zoom-bar');
  const zoomMount = mount('zoom');
  const credibilityMount = mount('credibility');
  const pathwayMount = mount('pathway');
  const suggestionMount = mount('suggestions');

  const fail = (err: unknown) => {
    banner.replaceChildren(
      renderErrorBanner(
        err instanceof ApiUnavailable
          ? 'API unavailable; retry when the service is reachable'
          : String(err),
      ),
    );
  };
  const clearBanner = () => banner.replaceChildren();

  const redraw = async () => {
    if (controller.view) {
      zoomMount.replaceChildren(
        renderZoom(controller.view, {
          onOpenChild: (entryId) =>
            controller.openChild(entryId).then(redraw).catch(fail),
          onInspectBlock: (entryId, blockId) =>
            controller
              .inspectBadge(entryId || controller.state.activeEntryId!, blockId)
              .then(async (badgeView) => {
                if (badgeView.kind === 'scored') {
                  await controller.evaluateSource(badgeView.badge.report_id);
                }
                credibilityMount.replaceChildren(
                  renderCredibilityPanel(badgeView, {
                    onExclude: (sourceId, note) =>
                      controller.excludeSource(sourceId, note).then(redraw).catch(fail),
                  }),
                );
              })
              .catch(fail),
        }),
      );
    }
    pathwayMount.replaceChildren(
      renderPathwayPanel(controller.state, controller.archived, {
        onArchive: () =>
          controller.archive().then(redraw).catch(fail),
        onBranch: (nodeId) => {
          const archived = controller.archived;
          if (archived) {
            controller
              .branch(archived.id, archived.version, author, nodeId)
              .then(redraw)
              .catch(fail);
          }
        },
        onShare: (recipient) => {
          const archived = controller.archived;
          if (archived) {
            controller.share(archived.id, archived.version, recipient).catch(fail);
          }
        },
        onDownloadReport: () => {
          const archived = controller.archived;
          if (archived) {
            controller
              .downloadReport(archived.id, archived.version, author)
              .then((body) => {
                const blob = new Blob([body], { type: 'application/json' });
                const link = document.createElement('a');
                link.href = URL.createObjectURL(blob);
                link.download = `${archived.id}-v${archived.version}-report.json`;
                link.click();
              })
              .catch(fail);
          }
        },
      }),
    );
    await controller.refreshSuggestions().catch(() => []);
    suggestionMount.replaceChildren(renderSuggestions(controller.state.suggestions));
  };

  try {
    const meta = await controller.bootstrap();
    await controller.startSession(author);
    clearBanner();
    for (const question of meta.curated_questions) {
      const button = document.createElement('button');
      button.className = 'curated-question';
      button.textContent = question.text;
      button.addEventListener('click', () => {
        queryInput.value = question.text;
        controller.submitQuery(question.text).then(redraw).catch(fail);
      });
      questionList.append(button);
    }
  } catch (err) {
    fail(err);
    return;
  }

  queryForm.addEventListener('submit', (event) => {
    event.preventDefault();
    if (!queryInput.value.trim()) return;
    controller
      .submitQuery(queryInput.value)
      .then(async (resolution) => {
        zoomBar.replaceChildren();
        for (const dimension of resolution.suggested_zooms) {
          const button = document.createElement('button');
          button.textContent = `${dimension} zoom`;
          button.addEventListener('click', () => {
            const window =
              dimension === 'temporal'
                ? (prompt('window START..END', '..') ?? '..')
                : undefined;
            controller.openZoom(dimension as Dimension, window).then(redraw).catch(fail);
          });
          zoomBar.append(button);
        }
        await redraw();
      })
      .catch(fail);
  });
}

if (typeof document !== 'undefined' && document.readyState !== 'loading') {
  void boot();
} else if (typeof document !== 'undefined') {
  document.addEventListener('DOMContentLoaded', () => void boot());
}
