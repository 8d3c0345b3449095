"""Dimension selection and the feedback session protocol.

A session holds the induced dimension profiles for one corpus. A selection
names one or more eigenvectors (by a human judge, a subjectivity lexicon,
or a profile adapted from another domain), labels the first profile's two
feature lists POSITIVE/NEGATIVE, and triggers the final clustering of all
documents along the chosen eigenvector(s).

Profile-to-profile similarity is the overlap count between feature lists,
maximized over the two ways of pairing them up, so the result is invariant
to which side of a dimension was called C1.
"""

from __future__ import annotations

import datetime as _dt
import json
import logging
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cluster import Partition, embed, two_means
from .corpus import Corpus, SubjectivityLexicon
from .dimension import NEGATIVE, POSITIVE, DimensionProfile
from .errors import ConfigError, SessionError
from .metrics import MetricReport, report_from_run
from .spectral import EigenBasis

log = logging.getLogger(__name__)

HUMAN = "HUMAN"
LEXICON = "LEXICON"
ADAPTED = "ADAPTED"

SESSION_SCHEMA_VERSION = 1


def _phi(a, b) -> int:
    """Overlap count between two term collections (binary dot product)."""
    return len(set(a) & set(b))


def pairing_scores(a_lists, b_lists) -> tuple[int, int]:
    """(straight, crossed) overlap totals for the two list pairings."""
    a1, a2 = a_lists
    b1, b2 = b_lists
    straight = _phi(a1, b1) + _phi(a2, b2)
    crossed = _phi(a1, b2) + _phi(a2, b1)
    return straight, crossed


def eig_similarity(a_lists, b_lists) -> int:
    """Similarity of two dimensions: the better of the two list pairings."""
    straight, crossed = pairing_scores(a_lists, b_lists)
    return max(straight, crossed)


@dataclass(frozen=True)
class SelectionScore:
    eig_index: int
    score: int
    second_best_score: int

    @property
    def gap(self) -> int:
        return self.score - self.second_best_score


def _argmax_profile(scored: list[tuple[int, DimensionProfile]]) -> SelectionScore:
    # ties break toward the smaller eigenvector index
    best_score, best_index = None, None
    for score, profile in scored:
        if best_score is None or score > best_score or (
            score == best_score and profile.eig_index < best_index
        ):
            best_score, best_index = score, profile.eig_index
    others = [s for s, p in scored if p.eig_index != best_index]
    second = max(others) if others else 0
    return SelectionScore(eig_index=best_index, score=best_score, second_best_score=second)


def adapt_select(source: DimensionProfile, targets: list[DimensionProfile]) -> SelectionScore:
    """Pick the target dimension most similar to a source-domain profile."""
    if not targets:
        raise ConfigError("no target profiles to select among")
    scored = [(eig_similarity(source.lists(), t.lists()), t) for t in targets]
    return _argmax_profile(scored)


def adapt_polarity_map(source: DimensionProfile, target: DimensionProfile) -> dict[str, str]:
    """Propagate the source profile's polarity through the winning pairing.

    The target list aligned with the source's POSITIVE list becomes POSITIVE;
    an unlabeled source defaults to treating its list_c1 as POSITIVE.
    """
    straight, crossed = pairing_scores(source.lists(), target.lists())
    c1_label = source.list_c1.polarity_label or POSITIVE
    c2_label = NEGATIVE if c1_label == POSITIVE else POSITIVE
    if straight >= crossed:
        return {"c1": c1_label, "c2": c2_label}
    return {"c1": c2_label, "c2": c1_label}


def lexicon_select(
    profiles: list[DimensionProfile], lexicon: SubjectivityLexicon
) -> tuple[SelectionScore, dict[str, str]]:
    """Pick the dimension most similar to a subjectivity lexicon.

    Returns the winning score and the polarity map fixed by the winning
    pairing: the feature list matched against the lexicon's positive words
    is POSITIVE.
    """
    if not profiles:
        raise ConfigError("no profiles to select among")
    if len(lexicon) == 0:
        raise ConfigError("empty lexicon")
    lex_lists = (lexicon.positive, lexicon.negative)
    scored = [(eig_similarity(lex_lists, p.lists()), p) for p in profiles]
    selection = _argmax_profile(scored)
    if selection.score == 0:
        log.warning("lexicon overlaps no feature list; selection falls back to e_%d",
                    selection.eig_index)
    winner = next(p for p in profiles if p.eig_index == selection.eig_index)
    straight, crossed = pairing_scores(lex_lists, winner.lists())
    if straight >= crossed:
        polarity = {"c1": POSITIVE, "c2": NEGATIVE}
    else:
        polarity = {"c1": NEGATIVE, "c2": POSITIVE}
    return selection, polarity


def _utcnow() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def session_seed(session_id: str, base_seed: int = 0) -> int:
    """Deterministic clustering seed derived from the session identity."""
    return (int(base_seed) + zlib.crc32(session_id.encode())) & 0xFFFFFFFF


@dataclass
class SelectionResult:
    partition: Partition
    cluster_polarity: dict[int, str] | None
    metrics: MetricReport | None
    runs: int
    seed: int


@dataclass
class FeedbackSession:
    """Per-corpus record of induced profiles, selections, and the clustering."""

    session_id: str
    corpus_ref: str
    profiles: list[DimensionProfile]
    corpus: Corpus | None = None  # runtime only, never persisted
    basis: EigenBasis | None = None  # runtime only, never persisted
    selection: tuple[list[int], str] | None = None
    polarity_map: dict[str, str] | None = None
    result: SelectionResult | None = None
    history: list[dict] = field(default_factory=list)
    created: str = field(default_factory=_utcnow)
    updated: str = field(default_factory=_utcnow)
    rev: int = 0

    def profile_for(self, eig_index: int) -> DimensionProfile:
        for p in self.profiles:
            if p.eig_index == eig_index:
                return p
        raise ConfigError(f"no profile for eigenvector {eig_index}")


def new_session(
    session_id: str, corpus: Corpus, basis: EigenBasis, profiles: list[DimensionProfile]
) -> FeedbackSession:
    if not session_id:
        raise SessionError("session id must be nonempty")
    return FeedbackSession(
        session_id=session_id,
        corpus_ref=corpus.content_hash(),
        profiles=profiles,
        corpus=corpus,
        basis=basis,
    )


def _validate_polarity_map(polarity_map: dict[str, str]) -> dict[str, str]:
    keys = set(polarity_map)
    if keys != {"c1", "c2"}:
        raise ConfigError(f"polarity map must label exactly c1 and c2, got {sorted(keys)}")
    values = set(polarity_map.values())
    if values != {POSITIVE, NEGATIVE}:
        raise ConfigError("polarity map must assign POSITIVE and NEGATIVE distinctly")
    return dict(polarity_map)


def record_selection(
    session: FeedbackSession,
    eig_indices,
    polarity_map: dict[str, str],
    source: str = HUMAN,
    runs: int = 10,
    base_seed: int = 0,
    note: str | None = None,
) -> FeedbackSession:
    """Cluster all documents along the selected eigenvector(s) and store it.

    Re-selection is allowed and overwrites the previous result; every attempt
    stays in the session history.
    """
    if session.basis is None or session.corpus is None:
        raise SessionError("session has no corpus/basis attached; cannot cluster")
    indices = [int(i) for i in eig_indices]
    if not indices:
        raise ConfigError("at least one eigenvector index is required")
    for i in indices:
        session.profile_for(i)  # raises on unknown index
    polarity_map = _validate_polarity_map(polarity_map)
    if source not in (HUMAN, LEXICON, ADAPTED):
        raise ConfigError(f"unknown selection source {source!r}")

    seed = session_seed(session.session_id, base_seed)
    emb = embed(session.basis, indices)
    run = two_means(emb, runs=runs, base_seed=seed)
    partition = run.canonical

    first = session.profile_for(indices[0])
    top_in_1 = sum(partition.label_of(d) for d in first.unambiguous_top)
    top_cluster = 1 if top_in_1 * 2 > len(first.unambiguous_top) else 0
    cluster_polarity = {
        top_cluster: polarity_map["c1"],
        1 - top_cluster: polarity_map["c2"],
    }

    metrics = None
    if session.corpus.has_gold():
        metrics = report_from_run(run, session.corpus.gold_by_id())

    session.selection = (indices, source)
    session.polarity_map = polarity_map
    session.result = SelectionResult(
        partition=partition,
        cluster_polarity=cluster_polarity,
        metrics=metrics,
        runs=runs,
        seed=seed,
    )
    session.history.append(
        {
            "indices": indices,
            "polarity_map": polarity_map,
            "source": source,
            "note": note,
            "at": _utcnow(),
        }
    )
    session.updated = _utcnow()
    session.rev += 1
    return session


def session_to_json(session: FeedbackSession) -> dict:
    doc = {
        "v": SESSION_SCHEMA_VERSION,
        "session_id": session.session_id,
        "corpus_ref": session.corpus_ref,
        "created": session.created,
        "updated": session.updated,
        "rev": session.rev,
        "profiles": [p.to_json() for p in session.profiles],
        "history": session.history,
        "selection": None,
        "polarity_map": session.polarity_map,
        "result": None,
    }
    if session.selection is not None:
        indices, source = session.selection
        doc["selection"] = {"indices": indices, "source": source}
    if session.result is not None:
        r = session.result
        doc["result"] = {
            "ids": list(r.partition.ids),
            "assign": [int(a) for a in r.partition.assign],
            "provenance": r.partition.provenance,
            "cluster_polarity": (
                {str(k): v for k, v in r.cluster_polarity.items()}
                if r.cluster_polarity
                else None
            ),
            "cluster_sizes": list(r.partition.cluster_sizes()),
            "metrics": r.metrics.to_json() if r.metrics is not None else None,
            "runs": r.runs,
            "seed": r.seed,
        }
    return doc


def session_from_json(doc: dict) -> FeedbackSession:
    if doc.get("v") != SESSION_SCHEMA_VERSION:
        raise SessionError(f"unsupported session schema version {doc.get('v')!r}")
    session = FeedbackSession(
        session_id=doc["session_id"],
        corpus_ref=doc["corpus_ref"],
        profiles=[DimensionProfile.from_json(p) for p in doc["profiles"]],
        created=doc["created"],
        updated=doc["updated"],
        rev=doc.get("rev", 0),
        history=list(doc.get("history", [])),
        polarity_map=doc.get("polarity_map"),
    )
    if doc.get("selection"):
        session.selection = (list(doc["selection"]["indices"]), doc["selection"]["source"])
    if doc.get("result"):
        r = doc["result"]
        partition = Partition(
            ids=tuple(r["ids"]),
            assign=np.array(r["assign"], dtype=np.int8),
            provenance=r.get("provenance", "restored"),
        )
        metrics = None
        if r.get("metrics"):
            mj = r["metrics"]
            metrics = MetricReport(
                accuracy_percent=mj["accuracy_percent"],
                ari=mj["ari"],
                runs_aggregated=mj.get("runs_aggregated", 1),
                per_run_accuracy=mj.get("per_run_accuracy"),
                per_run_ari=mj.get("per_run_ari"),
            )
        session.result = SelectionResult(
            partition=partition,
            cluster_polarity=(
                {int(k): v for k, v in r["cluster_polarity"].items()}
                if r.get("cluster_polarity")
                else None
            ),
            metrics=metrics,
            runs=r.get("runs", 10),
            seed=r.get("seed", 0),
        )
    return session


def save_session(session: FeedbackSession, sessions_dir) -> Path:
    sessions_dir = Path(sessions_dir)
    sessions_dir.mkdir(parents=True, exist_ok=True)
    path = sessions_dir / f"{session.session_id}.json"
    path.write_text(json.dumps(session_to_json(session), indent=2), encoding="utf-8")
    return path


def load_session(path) -> FeedbackSession:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return session_from_json(doc)
