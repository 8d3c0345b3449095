/** Selection draft state: which dimensions are chosen and how the first
 * dimension's two lists are labeled. Commit stays disabled until at least
 * one dimension is chosen and both polarities are assigned distinctly. */

import type { Polarity, SelectionBody } from './api.js';

export interface SelectionDraft {
  indices: number[]; // judge's ranked order, first = primary
  polarity: { c1: Polarity | null; c2: Polarity | null };
  note: string;
}

export function emptyDraft(): SelectionDraft {
  return { indices: [], polarity: { c1: null, c2: null }, note: '' };
}

export function toggleIndex(draft: SelectionDraft, eig: number): SelectionDraft {
  const indices = draft.indices.includes(eig)
    ? draft.indices.filter((i) => i !== eig)
    : [...draft.indices, eig];
  return { ...draft, indices };
}

/** Labeling one list automatically gives the other list the opposite label. */
export function assignPolarity(
  draft: SelectionDraft,
  list: 'c1' | 'c2',
  polarity: Polarity,
): SelectionDraft {
  const other: Polarity = polarity === 'POSITIVE' ? 'NEGATIVE' : 'POSITIVE';
  const next = { ...draft.polarity, [list]: polarity };
  next[list === 'c1' ? 'c2' : 'c1'] = other;
  return { ...draft, polarity: next };
}

export function canCommit(draft: SelectionDraft): boolean {
  const { c1, c2 } = draft.polarity;
  return draft.indices.length >= 1 && c1 !== null && c2 !== null && c1 !== c2;
}

export function selectionBody(draft: SelectionDraft, rev?: number): SelectionBody {
  if (!canCommit(draft)) {
    throw new Error('draft is not committable: pick a dimension and label both lists');
  }
  return {
    indices: draft.indices,
    polarity_map: { c1: draft.polarity.c1!, c2: draft.polarity.c2! },
    source: 'HUMAN',
    ...(draft.note ? { note: draft.note } : {}),
    ...(rev === undefined ? {} : { rev }),
  };
}
