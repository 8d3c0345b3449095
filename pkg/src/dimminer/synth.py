"""Synthetic review-like corpora with planted clustering dimensions.

Each generated document mixes words from an exclusive topic pool, an
exclusive sentiment pool, and a shared noise pool, so the collection can be
clustered by topic or by sentiment. Used by the demos and the test suite;
real corpora enter through `corpus.read_raw_documents` instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import RawDocument, SubjectivityLexicon


def _alpha_words(prefix: str, count: int) -> list[str]:
    # purely alphabetic word forms survive tokenization untouched
    out = []
    for i in range(count):
        hi, lo = divmod(i, 26)
        out.append(f"{prefix}{chr(97 + hi)}{chr(97 + lo)}")
    return out


@dataclass
class PlantedCorpus:
    documents: list[RawDocument]
    topic_labels: dict[str, int]
    sentiment_labels: dict[str, int]
    topic_pools: tuple[list[str], list[str]]
    sentiment_pools: tuple[list[str], list[str]]
    noise_pool: list[str]

    def lexicon(self) -> SubjectivityLexicon:
        pos, neg = self.sentiment_pools
        return SubjectivityLexicon(frozenset(pos), frozenset(neg))


def make_two_factor_corpus(
    n_docs: int = 400,
    topic_pool_size: int = 40,
    sentiment_pool_size: int = 20,
    noise_pool_size: int = 200,
    topic_per_doc: int = 8,
    sentiment_per_doc: int = 3,
    noise_per_doc: int = 10,
    seed: int = 0,
    topic_prefixes: tuple[str, str] = ("topa", "topb"),
    sentiment_pools: tuple[list[str], list[str]] | None = None,
    noise_pool: list[str] | None = None,
    id_prefix: str = "doc",
) -> PlantedCorpus:
    """Documents with independent binary TOPIC and SENTIMENT factors.

    A document draws `topic_per_doc` words from its topic's pool,
    `sentiment_per_doc` from its sentiment's pool, and `noise_per_doc`
    from the shared noise pool. The document's gold_label is its sentiment;
    its domain_tag is its topic. Fixing `seed` fixes the corpus exactly.
    """
    rng = np.random.default_rng(seed)
    topics = (
        _alpha_words(topic_prefixes[0], topic_pool_size),
        _alpha_words(topic_prefixes[1], topic_pool_size),
    )
    if sentiment_pools is None:
        sentiment_pools = (
            _alpha_words("goodw", sentiment_pool_size),
            _alpha_words("badw", sentiment_pool_size),
        )
    if noise_pool is None:
        noise_pool = _alpha_words("filler", noise_pool_size)

    docs: list[RawDocument] = []
    topic_labels: dict[str, int] = {}
    sentiment_labels: dict[str, int] = {}
    for i in range(n_docs):
        topic = int(rng.integers(2))
        sentiment = int(rng.integers(2))
        words = list(rng.choice(topics[topic], size=topic_per_doc, replace=False))
        words += list(rng.choice(sentiment_pools[sentiment], size=sentiment_per_doc, replace=False))
        words += list(rng.choice(noise_pool, size=noise_per_doc, replace=False))
        rng.shuffle(words)
        doc_id = f"{id_prefix}{i:04d}"
        docs.append(
            RawDocument(
                id=doc_id,
                text=" ".join(words),
                gold_label=sentiment,
                domain_tag=topic_prefixes[topic],
            )
        )
        topic_labels[doc_id] = topic
        sentiment_labels[doc_id] = sentiment
    return PlantedCorpus(
        documents=docs,
        topic_labels=topic_labels,
        sentiment_labels=sentiment_labels,
        topic_pools=topics,
        sentiment_pools=sentiment_pools,
        noise_pool=noise_pool,
    )
