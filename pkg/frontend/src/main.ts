/** Browser bootstrap: wire the pure renderers to the live API.
 *
 * All interactive controls are <button> elements, so the whole judging task
 * (select a dimension, label its lists, commit) works with the keyboard
 * alone: Tab to reach a control, Enter/Space to press it. */

import { ApiError, SessionApi } from './api.js';
import type { DimensionsResponse, ResultDoc } from './api.js';
import {
  assignPolarity,
  canCommit,
  emptyDraft,
  selectionBody,
  toggleIndex,
  type SelectionDraft,
} from './model.js';
import {
  renderCommitBar,
  renderDimensionPanels,
  renderErrorBanner,
  renderPreview,
  renderResultView,
} from './render.js';

interface ExplorerState {
  sessionId: string;
  rev: number;
  dimensions: DimensionsResponse | null;
  draft: SelectionDraft;
  visibleF: number;
}

export function mountExplorer(root: HTMLElement, api: SessionApi, sessionId: string): void {
  const state: ExplorerState = {
    sessionId,
    rev: 0,
    dimensions: null,
    draft: emptyDraft(),
    visibleF: 25,
  };

  const drawPanels = () => {
    if (!state.dimensions) return;
    root.innerHTML = renderDimensionPanels(state.dimensions, state.visibleF, state.draft);
  };

  const drawResult = (doc: ResultDoc) => {
    state.rev = doc.rev;
    root.innerHTML = renderResultView(doc);
  };

  const fail = (err: unknown) => {
    const message =
      err instanceof ApiError ? `${err.code}: ${err.message}` : 'service unreachable';
    root.innerHTML = renderErrorBanner(message);
  };

  const load = () => {
    api
      .getDimensions(state.sessionId)
      .then((doc) => {
        state.dimensions = doc;
        drawPanels();
      })
      .catch(fail);
  };

  root.addEventListener('input', (event) => {
    const target = event.target as HTMLInputElement;
    if (target.id === 'visible-f') {
      state.visibleF = Number(target.value);
      const note = root.querySelector<HTMLInputElement>('#judge-note');
      if (note) state.draft = { ...state.draft, note: note.value };
      drawPanels();
    }
  });

  root.addEventListener('click', (event) => {
    const button = (event.target as HTMLElement).closest<HTMLButtonElement>('button');
    if (!button) return;
    const action = button.dataset.action;
    const note = root.querySelector<HTMLInputElement>('#judge-note');
    if (note) state.draft = { ...state.draft, note: note.value };

    if (action === 'toggle') {
      state.draft = toggleIndex(state.draft, Number(button.dataset.eig));
      drawPanels();
    } else if (action === 'polarity') {
      state.draft = assignPolarity(
        state.draft,
        button.dataset.list as 'c1' | 'c2',
        'POSITIVE',
      );
      drawPanels();
    } else if (action === 'preview') {
      const eig = Number(button.dataset.eig);
      api
        .getPreview(state.sessionId, [eig])
        .then((preview) => {
          const slot = root.querySelector(`[data-preview-for="${eig}"]`);
          if (slot) slot.innerHTML = renderPreview(preview);
        })
        .catch(fail);
    } else if (action === 'commit') {
      if (!canCommit(state.draft)) return;
      api
        .postSelection(state.sessionId, selectionBody(state.draft, state.rev))
        .then(drawResult)
        .catch((err) => {
          if (err instanceof ApiError && err.status === 409) {
            root.innerHTML = renderErrorBanner(
              'session changed elsewhere; reload before committing',
            );
          } else if (err instanceof ApiError && err.status === 422) {
            const bar = root.querySelector('.commit-bar');
            if (bar) bar.insertAdjacentHTML('afterend', renderErrorBanner(err.message));
          } else {
            fail(err);
          }
        });
    } else if (action === 'back') {
      drawPanels();
    } else if (action === 'retry') {
      load();
    }
  });

  load();
}

declare global {
  interface Window {
    dimminerExplorer?: { mount: typeof mountExplorer; SessionApi: typeof SessionApi };
  }
}

if (typeof window !== 'undefined') {
  window.dimminerExplorer = { mount: mountExplorer, SessionApi };
  const root = document.getElementById('app');
  if (root) {
    const params = new URLSearchParams(window.location.search);
    const api = new SessionApi(params.get('api') ?? '');
    const sessionId = params.get('session') ?? 'default';
    const bootstrap = () =>
      api
        .createSession(sessionId)
        .catch((err: unknown) => {
          if (err instanceof ApiError && err.status === 409) return null; // exists
          throw err;
        })
        .then(() => mountExplorer(root, api, sessionId));
    bootstrap().catch(() => {
      root.innerHTML = renderErrorBanner('service unreachable');
      root.querySelector('[data-action="retry"]')?.addEventListener('click', bootstrap);
    });
  }
}
