/** Pure HTML renderers. Every displayed number comes straight from an API
 * response via String(); nothing is recomputed or reformatted client-side,
 * so what the judge sees is exactly what the service said. */

import type { DimensionsResponse, DimensionDoc, PreviewDoc, ResultDoc } from './api.js';
import type { SelectionDraft } from './model.js';
import { canCommit } from './model.js';

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function featureColumn(
  label: string,
  entries: [string, number][],
  visibleF: number,
  shortBadge: boolean,
): string {
  const rows = entries
    .slice(0, visibleF)
    .map(
      ([term, weight], rank) =>
        `<li class="feature" data-rank="${rank + 1}">` +
        `<span class="term">${escapeHtml(term)}</span>` +
        `<span class="weight" title="classifier weight">${String(weight)}</span></li>`,
    )
    .join('');
  const badge = shortBadge
    ? '<span class="badge warning" role="status">short list</span>'
    : '';
  return (
    `<div class="feature-column"><h4>${escapeHtml(label)} ${badge}</h4>` +
    `<ol class="features">${rows}</ol></div>`
  );
}

export function renderDimensionPanel(
  dim: DimensionDoc,
  fCount: number,
  visibleF: number,
  draft: SelectionDraft,
): string {
  const chosen = draft.indices.includes(dim.eig_index);
  const rank = draft.indices.indexOf(dim.eig_index);
  const isPrimary = rank === 0;
  return (
    `<section class="panel" data-eig="${dim.eig_index}" aria-label="dimension e_${dim.eig_index}">` +
    `<header><h3>e_${dim.eig_index}</h3>` +
    `<span class="counts">${dim.unambiguous_top_count}+${dim.unambiguous_bottom_count} unambiguous docs</span>` +
    (chosen ? `<span class="badge chosen">chosen #${rank + 1}</span>` : '') +
    `</header>` +
    `<div class="columns">` +
    featureColumn('C1', dim.list_c1, visibleF, dim.list_c1.length < fCount) +
    featureColumn('C2', dim.list_c2, visibleF, dim.list_c2.length < fCount) +
    `</div>` +
    `<footer>` +
    `<button type="button" data-action="toggle" data-eig="${dim.eig_index}">` +
    (chosen ? 'Unselect' : 'Select dimension') +
    `</button>` +
    (isPrimary
      ? `<button type="button" data-action="polarity" data-eig="${dim.eig_index}" data-list="c1">C1 is positive</button>` +
        `<button type="button" data-action="polarity" data-eig="${dim.eig_index}" data-list="c2">C2 is positive</button>`
      : '') +
    `<button type="button" data-action="preview" data-eig="${dim.eig_index}">Preview</button>` +
    `</footer>` +
    `<div class="preview-slot" data-preview-for="${dim.eig_index}"></div>` +
    `</section>`
  );
}

export function renderDimensionPanels(
  doc: DimensionsResponse,
  visibleF: number,
  draft: SelectionDraft,
): string {
  const panels = doc.dimensions
    .map((dim) => renderDimensionPanel(dim, doc.f_count, visibleF, draft))
    .join('');
  return (
    `<div class="explorer">` +
    `<label>visible features <input type="range" id="visible-f" min="1" ` +
    `max="${doc.f_count}" value="${visibleF}" aria-label="visible features per list"></label>` +
    `<div class="panels">${panels}</div>` +
    renderCommitBar(draft) +
    `</div>`
  );
}

export function renderCommitBar(draft: SelectionDraft): string {
  const ready = canCommit(draft);
  const picked = draft.indices.length
    ? draft.indices.map((i) => `e_${i}`).join(', ')
    : 'none';
  const hint = ready
    ? ''
    : '<span class="hint">pick a dimension and label both lists to commit</span>';
  return (
    `<div class="commit-bar">` +
    `<span class="picked">selected: ${picked}</span>` +
    `<label class="note">note <input type="text" id="judge-note" value="${escapeHtml(draft.note)}"></label>` +
    `<button type="button" data-action="commit" id="commit"${ready ? '' : ' disabled'}>Commit selection</button>` +
    hint +
    `</div>`
  );
}

export function renderPreview(preview: PreviewDoc): string {
  const sizes = preview.cluster_sizes;
  const metrics = preview.metrics
    ? `<p class="metrics">accuracy ${String(preview.metrics.accuracy_percent)}% | ` +
      `ARI ${String(preview.metrics.ari)}</p>`
    : '<p class="metrics">no gold labels</p>';
  const sides = preview.samples
    .map((side, cluster) => {
      const snippets = side
        .map((s) => `<li><code>${escapeHtml(s.id)}</code> ${escapeHtml(s.snippet)}</li>`)
        .join('');
      return `<div class="cluster-sample"><h5>cluster ${cluster} (n=${String(sizes[cluster])})</h5><ul>${snippets}</ul></div>`;
    })
    .join('');
  return `<div class="preview">${metrics}${sides}</div>`;
}

export function renderResultView(doc: ResultDoc): string {
  const { result } = doc;
  const clusters = Object.keys(result.cluster_polarity)
    .sort()
    .map((cluster) => {
      const polarity = result.cluster_polarity[cluster];
      const size = result.cluster_sizes[Number(cluster)];
      return `<li class="cluster" data-cluster="${cluster}">` +
        `<span class="polarity">${polarity}</span> n=<span class="size">${String(size)}</span></li>`;
    })
    .join('');
  const metrics = result.metrics
    ? `<dl class="metrics">` +
      `<dt>accuracy (%)</dt><dd id="accuracy">${String(result.metrics.accuracy_percent)}</dd>` +
      `<dt>ARI</dt><dd id="ari">${String(result.metrics.ari)}</dd>` +
      `<dt>runs aggregated</dt><dd id="runs">${String(result.metrics.runs_aggregated)}</dd>` +
      `</dl>`
    : '<p class="metrics">no gold labels, no metrics</p>';
  return (
    `<div class="result-view" data-rev="${doc.rev}">` +
    `<h3>clustering along ${doc.selection.indices.map((i) => `e_${i}`).join(', ')} ` +
    `(${escapeHtml(doc.selection.source)})</h3>` +
    `<ul class="clusters">${clusters}</ul>` +
    metrics +
    `<button type="button" data-action="back">Back to dimensions</button>` +
    `</div>`
  );
}

export function renderErrorBanner(message: string): string {
  return (
    `<div class="banner error" role="alert">${escapeHtml(message)} ` +
    `<button type="button" data-action="retry">Retry</button></div>`
  );
}
