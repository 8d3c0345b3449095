"""Document ingestion: tokenizing, vocabulary pruning, binary feature vectors.

Three document representations are supported:

* ``BOW``  - presence-valued unigrams with the highest-document-frequency
  terms removed (default 1.5% of the working vocabulary),
* ``BOAW`` - all unigrams kept, no high-frequency cut,
* ``BOSW`` - only unigrams found in a subjectivity lexicon.

All modes drop length-1 tokens, tokens without a letter, and terms that
occur in a single document.
"""

from __future__ import annotations

import gzip
import hashlib
import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, DegenerateCorpusError, LexiconError

MODES = ("BOW", "BOAW", "BOSW")

# Maximal runs of letters/apostrophes after downcasing; digits and other
# punctuation split tokens and never appear in them.
_TOKEN_RE = re.compile(r"[a-z']+")


def tokenize(text: str) -> list[str]:
    """Lowercase `text` and return maximal runs of letters/apostrophes.

    No stemming or other normalization is applied; order is preserved.
    """
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class RawDocument:
    """One input document prior to vectorization."""

    id: str
    text: str
    gold_label: int | None = None
    domain_tag: str | None = None


@dataclass(frozen=True)
class SubjectivityLexicon:
    """Prior-polarity word lists; neutral entries are dropped at load time."""

    positive: frozenset[str]
    negative: frozenset[str]

    def __post_init__(self):
        overlap = self.positive & self.negative
        if overlap:
            raise LexiconError(f"terms with both polarities: {sorted(overlap)[:5]}")

    def words(self) -> frozenset[str]:
        return self.positive | self.negative

    def __len__(self) -> int:
        return len(self.positive) + len(self.negative)


def load_lexicon(stream) -> SubjectivityLexicon:
    """Parse a `term<TAB>polarity` stream into a SubjectivityLexicon.

    `stream` may be a file-like object, an iterable of lines, or a single
    string. Polarity is one of positive/negative/neutral (case-insensitive);
    neutral entries are discarded, terms are lowercased. A malformed line or
    a term claimed by both polarities raises LexiconError.
    """
    if isinstance(stream, str):
        stream = stream.splitlines()
    positive: set[str] = set()
    negative: set[str] = set()
    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconError(f"line {line_no}: expected 'term<TAB>polarity', got {line!r}")
        term = parts[0].strip().lower()
        polarity = parts[1].strip().lower()
        if not term:
            raise LexiconError(f"line {line_no}: empty term")
        if polarity == "positive":
            positive.add(term)
        elif polarity == "negative":
            negative.add(term)
        elif polarity == "neutral":
            continue
        else:
            raise LexiconError(f"line {line_no}: unknown polarity {parts[1]!r}")
    conflicts = positive & negative
    if conflicts:
        raise LexiconError(f"terms listed with both polarities: {sorted(conflicts)[:5]}")
    return SubjectivityLexicon(frozenset(positive), frozenset(negative))


@dataclass(frozen=True)
class Vocabulary:
    """Ordered term list with per-term document frequencies."""

    terms: tuple[str, ...]
    doc_freq: np.ndarray  # aligned with terms
    index: dict[str, int] = field(default_factory=dict, compare=False)

    @staticmethod
    def from_counts(counts: dict[str, int]) -> "Vocabulary":
        terms = tuple(sorted(counts))
        df = np.array([counts[t] for t in terms], dtype=np.int64)
        return Vocabulary(terms, df, {t: j for j, t in enumerate(terms)})

    def __len__(self) -> int:
        return len(self.terms)


def _keepable(term: str) -> bool:
    # length-1, digit-only, and punctuation-only terms are never vocabulary
    return len(term) >= 2 and any(c.isalpha() for c in term)


@dataclass
class Corpus:
    """Vectorized document collection over a pruned vocabulary.

    `vectors` is a binary CSR matrix (one row per document, one column per
    vocabulary term). `texts` keeps the raw character data around for the
    service's preview snippets; it plays no part in any computation.
    """

    ids: tuple[str, ...]
    vectors: sp.csr_matrix
    vocabulary: Vocabulary
    mode: str
    gold_labels: tuple[int | None, ...]
    domain_tags: tuple[str | None, ...]
    texts: tuple[str, ...] | None = None

    def __post_init__(self):
        self._row_of = {doc_id: i for i, doc_id in enumerate(self.ids)}

    @property
    def n(self) -> int:
        return len(self.ids)

    def row_of(self, doc_id: str) -> int:
        return self._row_of[doc_id]

    def gold_by_id(self) -> dict[str, int]:
        """Gold labels keyed by document id; documents without one are absent."""
        return {i: g for i, g in zip(self.ids, self.gold_labels) if g is not None}

    def has_gold(self) -> bool:
        return all(g is not None for g in self.gold_labels) and self.n > 0

    def content_hash(self) -> str:
        """Stable hex digest of the vectorized content (texts excluded)."""
        h = hashlib.sha256()
        h.update(self.mode.encode())
        h.update(json.dumps(list(self.vocabulary.terms)).encode())
        indptr, indices = self.vectors.indptr, self.vectors.indices
        for i, doc_id in enumerate(self.ids):
            cols = sorted(int(c) for c in indices[indptr[i] : indptr[i + 1]])
            h.update(
                json.dumps([doc_id, cols, self.gold_labels[i], self.domain_tags[i]]).encode()
            )
        return h.hexdigest()


def build_corpus(
    docs: list[RawDocument],
    mode: str = "BOW",
    lexicon: SubjectivityLexicon | None = None,
    df_prune_fraction: float = 0.015,
) -> Corpus:
    """Tokenize `docs`, prune the vocabulary per `mode`, and vectorize.

    Pruning order: length/character-class rules and singleton removal first,
    then (BOW only) the ceil(df_prune_fraction * V) highest-document-frequency
    survivors are cut, ties broken by ascending term. BOSW intersects the
    survivors with the lexicon instead.
    """
    if mode not in MODES:
        raise ConfigError(f"unknown representation mode {mode!r}; expected one of {MODES}")
    if mode == "BOSW" and lexicon is None:
        raise ConfigError("BOSW mode requires a subjectivity lexicon")
    if not (0.0 <= df_prune_fraction < 1.0):
        raise ConfigError(f"df_prune_fraction must be in [0, 1), got {df_prune_fraction}")

    seen: set[str] = set()
    for d in docs:
        if not d.id:
            raise ConfigError("document with empty id")
        if d.id in seen:
            raise ConfigError(f"duplicate document id {d.id!r}")
        seen.add(d.id)

    token_sets = [frozenset(tokenize(d.text)) for d in docs]
    df = Counter()
    for toks in token_sets:
        df.update(toks)

    surviving = {t: c for t, c in df.items() if _keepable(t) and c >= 2}

    if mode == "BOW" and surviving:
        n_cut = math.ceil(df_prune_fraction * len(surviving))
        if n_cut:
            by_df = sorted(surviving, key=lambda t: (-surviving[t], t))
            for t in by_df[:n_cut]:
                del surviving[t]
    elif mode == "BOSW":
        words = lexicon.words()
        surviving = {t: c for t, c in surviving.items() if t in words}

    if not surviving:
        raise DegenerateCorpusError("no vocabulary terms survive pruning")

    vocab = Vocabulary.from_counts(surviving)
    indptr = [0]
    indices: list[int] = []
    for toks in token_sets:
        cols = sorted(vocab.index[t] for t in toks if t in vocab.index)
        indices.extend(cols)
        indptr.append(len(indices))
    data = np.ones(len(indices), dtype=np.float64)
    vectors = sp.csr_matrix(
        (data, np.array(indices, dtype=np.int32), np.array(indptr, dtype=np.int32)),
        shape=(len(docs), len(vocab)),
    )
    return Corpus(
        ids=tuple(d.id for d in docs),
        vectors=vectors,
        vocabulary=vocab,
        mode=mode,
        gold_labels=tuple(d.gold_label for d in docs),
        domain_tags=tuple(d.domain_tag for d in docs),
        texts=tuple(d.text for d in docs),
    )


def read_raw_documents(path) -> list[RawDocument]:
    """Read a JSONL corpus file: one {"id", "text", "label"?, "domain"?} per line."""
    docs = []
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}:{line_no}: invalid JSON ({exc})") from exc
            if not isinstance(obj, dict) or "id" not in obj or "text" not in obj:
                raise ConfigError(f"{path}:{line_no}: each line needs 'id' and 'text'")
            docs.append(
                RawDocument(
                    id=str(obj["id"]),
                    text=str(obj["text"]),
                    gold_label=obj.get("label"),
                    domain_tag=obj.get("domain"),
                )
            )
    return docs


CORPUS_CACHE_VERSION = 1


def save_corpus(corpus: Corpus, path) -> None:
    """Write a corpus cache file (JSON, gzipped when the path ends in .gz)."""
    indptr, indices = corpus.vectors.indptr, corpus.vectors.indices
    doc_rows = []
    for i, doc_id in enumerate(corpus.ids):
        doc_rows.append(
            {
                "id": doc_id,
                "cols": [int(c) for c in indices[indptr[i] : indptr[i + 1]]],
                "label": corpus.gold_labels[i],
                "domain": corpus.domain_tags[i],
                "text": corpus.texts[i] if corpus.texts is not None else None,
            }
        )
    payload = {
        "v": CORPUS_CACHE_VERSION,
        "mode": corpus.mode,
        "terms": list(corpus.vocabulary.terms),
        "doc_freq": [int(c) for c in corpus.vocabulary.doc_freq],
        "docs": doc_rows,
    }
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "wt", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_corpus(path) -> Corpus:
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("v") != CORPUS_CACHE_VERSION:
        raise ConfigError(f"unsupported corpus cache version {payload.get('v')!r}")
    terms = tuple(payload["terms"])
    df = np.array(payload["doc_freq"], dtype=np.int64)
    vocab = Vocabulary(terms, df, {t: j for j, t in enumerate(terms)})
    indptr = [0]
    indices: list[int] = []
    ids, labels, domains, texts = [], [], [], []
    for row in payload["docs"]:
        ids.append(row["id"])
        labels.append(row["label"])
        domains.append(row["domain"])
        texts.append(row["text"] or "")
        indices.extend(row["cols"])
        indptr.append(len(indices))
    vectors = sp.csr_matrix(
        (
            np.ones(len(indices), dtype=np.float64),
            np.array(indices, dtype=np.int32),
            np.array(indptr, dtype=np.int32),
        ),
        shape=(len(ids), len(terms)),
    )
    return Corpus(
        ids=tuple(ids),
        vectors=vectors,
        vocabulary=vocab,
        mode=payload["mode"],
        gold_labels=tuple(labels),
        domain_tags=tuple(domains),
        texts=tuple(texts),
    )
