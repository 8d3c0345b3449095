/** Contract tests against recorded API responses from the planted corpus.
 *
 * The UI is stateless with respect to the algorithm: every number it shows
 * must originate from an API response. These tests feed the recorded
 * fixtures through the real client + renderers and compare the rendered
 * numbers against the raw fixture bytes.
 */

import { readFileSync } from 'node:fs';
import { join } from 'node:path';
import { afterEach, describe, expect, it, vi } from 'vitest';

import { ApiError, SessionApi } from '../src/api.js';
import type { DimensionsResponse, PreviewDoc, ResultDoc } from '../src/api.js';
import { assignPolarity, canCommit, emptyDraft, selectionBody, toggleIndex } from '../src/model.js';
import {
  renderCommitBar,
  renderDimensionPanels,
  renderPreview,
  renderResultView,
} from '../src/render.js';

const FIXTURES = join(__dirname, 'fixtures');

function fixtureText(name: string): string {
  return readFileSync(join(FIXTURES, `${name}.json`), 'utf-8');
}

function fixture<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

const dimensions = fixture<DimensionsResponse>('dimensions');
const selectionResponse = fixture<ResultDoc>('selection_response');
const resultDoc = fixture<ResultDoc>('result');
const preview = fixture<PreviewDoc>('preview_e3');

function mockFetchOnce(status: number, body: unknown) {
  const impl = vi.fn(async () => ({
    ok: status >= 200 && status < 300,
    status,
    statusText: String(status),
    json: async () => body,
  }));
  vi.stubGlobal('fetch', impl);
  return impl;
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('dimension panels', () => {
  it('renders one panel per served dimension (4 at m=5)', () => {
    const html = renderDimensionPanels(dimensions, 25, emptyDraft());
    const panels = html.match(/<section class="panel"/g) ?? [];
    expect(panels).toHaveLength(4);
    for (const eig of [2, 3, 4, 5]) {
      expect(html).toContain(`data-eig="${eig}"`);
      expect(html).toContain(`e_${eig}`);
    }
  });

  it('never reorders terms: rows follow the served ranking', () => {
    const html = renderDimensionPanels(dimensions, 100, emptyDraft());
    const served = dimensions.dimensions[0].list_c1.map(([term]) => term);
    const positions = served.map((term) => html.indexOf(`>${term}<`));
    expect(positions.every((p) => p >= 0)).toBe(true);
    const sorted = [...positions].sort((a, b) => a - b);
    expect(positions).toEqual(sorted);
  });

  it('slider cap shows exactly that many rows per column', () => {
    const html = renderDimensionPanels(dimensions, 10, emptyDraft());
    const firstPanel = html.slice(
      html.indexOf('data-eig="2"'),
      html.indexOf('data-eig="3"'),
    );
    const rows = firstPanel.match(/<li class="feature"/g) ?? [];
    expect(rows).toHaveLength(20); // 10 per column, two columns
  });

  it('shows a short-list warning when a list has fewer than F terms', () => {
    const doc: DimensionsResponse = JSON.parse(JSON.stringify(dimensions));
    doc.dimensions[1].list_c2 = doc.dimensions[1].list_c2.slice(0, 3);
    const html = renderDimensionPanels(doc, 25, emptyDraft());
    expect(html).toContain('short list');
    const clean = renderDimensionPanels(dimensions, 25, emptyDraft());
    const full = dimensions.dimensions.every(
      (d) => d.list_c1.length >= dimensions.f_count && d.list_c2.length >= dimensions.f_count,
    );
    expect(clean.includes('short list')).toBe(!full);
  });

  it('is keyboard operable: every action is a real button', () => {
    const html = renderDimensionPanels(dimensions, 25, emptyDraft());
    expect(html).not.toContain('onclick=');
    const actions = html.match(/data-action="(toggle|polarity|preview|commit)"/g) ?? [];
    const buttons = html.match(/<button type="button"/g) ?? [];
    expect(buttons.length).toBeGreaterThanOrEqual(actions.length);
  });
});

describe('polarity-before-commit rule', () => {
  it('blocks commit until a dimension is chosen and both lists are labeled', () => {
    let draft = emptyDraft();
    expect(canCommit(draft)).toBe(false);
    expect(renderCommitBar(draft)).toContain('disabled');

    draft = toggleIndex(draft, 3);
    expect(canCommit(draft)).toBe(false);
    expect(renderCommitBar(draft)).toContain('disabled');

    draft = assignPolarity(draft, 'c2', 'POSITIVE');
    expect(draft.polarity).toEqual({ c1: 'NEGATIVE', c2: 'POSITIVE' });
    expect(canCommit(draft)).toBe(true);
    expect(renderCommitBar(draft)).not.toContain('disabled');
  });

  it('unselecting the last dimension disables commit again', () => {
    let draft = assignPolarity(toggleIndex(emptyDraft(), 3), 'c1', 'POSITIVE');
    expect(canCommit(draft)).toBe(true);
    draft = toggleIndex(draft, 3);
    expect(canCommit(draft)).toBe(false);
  });

  it('selectionBody refuses an incomplete draft and orders indices as ranked', () => {
    expect(() => selectionBody(emptyDraft())).toThrow();
    let draft = toggleIndex(toggleIndex(emptyDraft(), 4), 3); // judge ranks 4 first
    draft = assignPolarity(draft, 'c1', 'POSITIVE');
    const body = selectionBody(draft, 1);
    expect(body.indices).toEqual([4, 3]);
    expect(body.polarity_map).toEqual({ c1: 'POSITIVE', c2: 'NEGATIVE' });
    expect(body.rev).toBe(1);
  });
});

describe('commit round-trip', () => {
  it('posts the draft and renders the fixture result byte-for-byte', async () => {
    const impl = mockFetchOnce(200, selectionResponse);
    const api = new SessionApi('');
    const draft = assignPolarity(toggleIndex(emptyDraft(), 3), 'c2', 'POSITIVE');
    const doc = await api.postSelection('fixture', selectionBody(draft));
    const [url, init] = impl.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe('/sessions/fixture/selection');
    expect(JSON.parse(String(init.body))).toMatchObject({
      indices: [3],
      polarity_map: { c1: 'NEGATIVE', c2: 'POSITIVE' },
    });

    const html = renderResultView(doc);
    const raw = fixtureText('selection_response');
    // the rendered numbers must be the exact byte sequences recorded in the
    // fixture, not reformatted versions of them
    const accuracyBytes = /"accuracy_percent": ([0-9.eE+-]+)/.exec(raw)![1];
    const ariBytes = /"ari": ([0-9.eE+-]+)/.exec(raw)![1];
    const sizesBytes = /"cluster_sizes": \[\s*(\d+),\s*(\d+)\s*\]/.exec(raw)!;
    expect(html).toContain(`<dd id="accuracy">${accuracyBytes}</dd>`);
    expect(html).toContain(`<dd id="ari">${ariBytes}</dd>`);
    expect(html).toContain(`n=<span class="size">${sizesBytes[1]}</span>`);
    expect(html).toContain(`n=<span class="size">${sizesBytes[2]}</span>`);
    for (const [cluster, polarity] of Object.entries(doc.result.cluster_polarity)) {
      expect(html).toContain(`data-cluster="${cluster}"`);
      expect(html).toContain(polarity);
    }
  });

  it('GET result renders identically to the commit response', () => {
    expect(renderResultView(resultDoc)).toBe(renderResultView(selectionResponse));
  });
});

describe('preview rendering', () => {
  it('shows cluster sizes, snippets, and metrics from the response only', () => {
    const html = renderPreview(preview);
    expect(html).toContain(`n=${String(preview.cluster_sizes[0])}`);
    expect(html).toContain(`n=${String(preview.cluster_sizes[1])}`);
    expect(html).toContain(String(preview.metrics!.accuracy_percent));
    expect(html).toContain(preview.samples[0][0].id);
  });
});

describe('api client errors', () => {
  it('surfaces the service error shape', async () => {
    mockFetchOnce(422, { code: 'invalid-indices', message: 'bad index' });
    const api = new SessionApi('');
    await expect(api.getPreview('fixture', [9])).rejects.toMatchObject({
      status: 422,
      code: 'invalid-indices',
    });
    mockFetchOnce(409, { code: 'stale-revision', message: 'conflict' });
    await expect(
      api.postSelection('fixture', {
        indices: [2],
        polarity_map: { c1: 'POSITIVE', c2: 'NEGATIVE' },
        rev: 0,
      }),
    ).rejects.toBeInstanceOf(ApiError);
  });
});
