"""Local HTTP service over one corpus + eigenbasis.

The service owns a single decomposition and exposes the feedback-session
protocol: list/create sessions, inspect each dimension's feature lists,
preview what-if clusterings, and commit a selection (human, lexicon, or
adapted). Long computations happen at startup or in the CLI, never inside
a request handler. Errors are JSON `{code, message}` bodies.
"""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .cluster import embed, two_means
from .corpus import Corpus, SubjectivityLexicon
from .dimension import DimensionProfile
from .errors import ConfigError, DimminerError
from .feedback import (
    ADAPTED,
    HUMAN,
    LEXICON,
    FeedbackSession,
    adapt_polarity_map,
    adapt_select,
    lexicon_select,
    load_session,
    new_session,
    record_selection,
    save_session,
    session_seed,
    session_to_json,
)
from .metrics import report_from_run
from .spectral import EigenBasis

log = logging.getLogger(__name__)

SNIPPET_CHARS = 300
SNIPPETS_PER_CLUSTER = 10


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class ServiceState:
    corpus: Corpus
    basis: EigenBasis
    profiles: list[DimensionProfile]
    sessions_dir: Path
    kmeans_runs: int = 10
    base_seed: int = 0
    f_count: int = 100
    sessions: dict[str, FeedbackSession] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def load_persisted_sessions(self) -> None:
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        corpus_ref = self.corpus.content_hash()
        for path in sorted(self.sessions_dir.glob("*.json")):
            try:
                session = load_session(path)
            except Exception:
                log.warning("skipping unreadable session file %s", path)
                continue
            if session.corpus_ref != corpus_ref:
                log.warning("skipping session %s (different corpus)", session.session_id)
                continue
            session.corpus = self.corpus
            session.basis = self.basis
            session.profiles = self.profiles
            self.sessions[session.session_id] = session

    def get(self, session_id: str) -> FeedbackSession:
        session = self.sessions.get(session_id)
        if session is None:
            raise ApiError(404, "unknown-session", f"no session {session_id!r}")
        return session


def _session_summary(session: FeedbackSession) -> dict:
    return {
        "session_id": session.session_id,
        "created": session.created,
        "updated": session.updated,
        "rev": session.rev,
        "selection": (
            {"indices": session.selection[0], "source": session.selection[1]}
            if session.selection
            else None
        ),
        "has_result": session.result is not None,
    }


def _result_doc(session: FeedbackSession) -> dict:
    if session.result is None:
        raise ApiError(404, "no-result", "session has no committed selection yet")
    doc = session_to_json(session)
    return {
        "session_id": session.session_id,
        "rev": session.rev,
        "selection": doc["selection"],
        "polarity_map": doc["polarity_map"],
        "result": doc["result"],
    }


def _check_rev(session: FeedbackSession, body: dict) -> None:
    rev = body.get("rev")
    if rev is not None and int(rev) != session.rev:
        raise ApiError(
            409, "stale-revision", f"session is at rev {session.rev}, request was for rev {rev}"
        )


def _dimension_doc(profile: DimensionProfile) -> dict:
    doc = profile.to_json()
    doc["unambiguous_top_count"] = len(profile.unambiguous_top)
    doc["unambiguous_bottom_count"] = len(profile.unambiguous_bottom)
    return doc


def create_app(state: ServiceState, ui_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="dimminer", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    state.load_persisted_sessions()
    if ui_dir is not None:
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    @app.exception_handler(ApiError)
    async def api_error_handler(_: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"code": exc.code, "message": exc.message})

    @app.exception_handler(DimminerError)
    async def package_error_handler(_: Request, exc: DimminerError):
        return JSONResponse(status_code=422, content={"code": exc.code, "message": str(exc)})

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": [_session_summary(s) for s in state.sessions.values()]}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        body = await _json_body(request, optional=True)
        session_id = str(body.get("session_id") or uuid.uuid4().hex[:12])
        with state.lock:
            if session_id in state.sessions:
                raise ApiError(409, "session-exists", f"session {session_id!r} already exists")
            session = new_session(session_id, state.corpus, state.basis, state.profiles)
            state.sessions[session_id] = session
            save_session(session, state.sessions_dir)
        return _session_summary(session)

    @app.get("/sessions/{session_id}/dimensions")
    def dimensions(session_id: str):
        session = state.get(session_id)
        return {
            "session_id": session.session_id,
            "f_count": state.f_count,
            "dimensions": [_dimension_doc(p) for p in session.profiles],
        }

    @app.get("/sessions/{session_id}/preview")
    def preview(session_id: str, eig: str):
        session = state.get(session_id)
        indices = _parse_indices(eig)
        for i in indices:
            session.profile_for(i)
        seed = session_seed(session.session_id, state.base_seed)
        run = two_means(embed(state.basis, indices), runs=state.kmeans_runs, base_seed=seed)
        partition = run.canonical
        samples = [[], []]
        texts = state.corpus.texts or ("",) * state.corpus.n
        for cluster in (0, 1):
            for doc_id in partition.members(cluster)[:SNIPPETS_PER_CLUSTER]:
                samples[cluster].append(
                    {"id": doc_id, "snippet": texts[state.corpus.row_of(doc_id)][:SNIPPET_CHARS]}
                )
        metrics = None
        if state.corpus.has_gold():
            metrics = report_from_run(run, state.corpus.gold_by_id()).to_json()
        return {
            "session_id": session.session_id,
            "eig_indices": indices,
            "cluster_sizes": list(partition.cluster_sizes()),
            "samples": samples,
            "metrics": metrics,
        }

    @app.post("/sessions/{session_id}/selection")
    async def selection(session_id: str, request: Request):
        body = await _json_body(request)
        indices = body.get("indices")
        polarity_map = body.get("polarity_map")
        if not isinstance(indices, list) or not indices:
            raise ApiError(422, "invalid-indices", "body.indices must be a nonempty list")
        if not isinstance(polarity_map, dict):
            raise ApiError(422, "invalid-polarity", "body.polarity_map must label c1 and c2")
        source = body.get("source", HUMAN)
        with state.lock:
            session = state.get(session_id)
            _check_rev(session, body)
            try:
                record_selection(
                    session,
                    indices,
                    polarity_map,
                    source=source,
                    runs=state.kmeans_runs,
                    base_seed=state.base_seed,
                    note=body.get("note"),
                )
            except ConfigError as exc:
                raise ApiError(422, exc.code, str(exc)) from exc
            save_session(session, state.sessions_dir)
        return _result_doc(session)

    @app.get("/sessions/{session_id}/result")
    def result(session_id: str):
        return _result_doc(state.get(session_id))

    @app.post("/sessions/{session_id}/lexicon-selection")
    async def lexicon_selection(session_id: str, request: Request):
        body = await _json_body(request)
        positive = body.get("positive")
        negative = body.get("negative")
        if not isinstance(positive, list) or not isinstance(negative, list):
            raise ApiError(422, "invalid-lexicon", "body needs 'positive' and 'negative' lists")
        lexicon = SubjectivityLexicon(
            frozenset(t.lower() for t in positive), frozenset(t.lower() for t in negative)
        )
        with state.lock:
            session = state.get(session_id)
            _check_rev(session, body)
            score, polarity_map = lexicon_select(session.profiles, lexicon)
            record_selection(
                session,
                [score.eig_index],
                polarity_map,
                source=LEXICON,
                runs=state.kmeans_runs,
                base_seed=state.base_seed,
                note=body.get("note"),
            )
            save_session(session, state.sessions_dir)
        doc = _result_doc(session)
        doc["selection_score"] = {
            "eig_index": score.eig_index,
            "score": score.score,
            "second_best_score": score.second_best_score,
            "gap": score.gap,
        }
        return doc

    @app.post("/sessions/{session_id}/adapt")
    async def adapt(session_id: str, request: Request):
        body = await _json_body(request)
        source_profile = body.get("source_profile")
        if not isinstance(source_profile, dict):
            raise ApiError(422, "invalid-profile", "body.source_profile must be a profile object")
        try:
            source = DimensionProfile.from_json(source_profile)
        except (KeyError, TypeError, ValueError) as exc:
            raise ApiError(422, "invalid-profile", f"malformed source profile: {exc}") from exc
        if body.get("positive_list") in ("c1", "c2"):
            source.list_c1.polarity_label = (
                "POSITIVE" if body["positive_list"] == "c1" else "NEGATIVE"
            )
            source.list_c2.polarity_label = (
                "NEGATIVE" if body["positive_list"] == "c1" else "POSITIVE"
            )
        with state.lock:
            session = state.get(session_id)
            _check_rev(session, body)
            score = adapt_select(source, session.profiles)
            winner = session.profile_for(score.eig_index)
            polarity_map = adapt_polarity_map(source, winner)
            record_selection(
                session,
                [score.eig_index],
                polarity_map,
                source=ADAPTED,
                runs=state.kmeans_runs,
                base_seed=state.base_seed,
                note=body.get("note"),
            )
            save_session(session, state.sessions_dir)
        doc = _result_doc(session)
        doc["selection_score"] = {
            "eig_index": score.eig_index,
            "score": score.score,
            "second_best_score": score.second_best_score,
            "gap": score.gap,
        }
        return doc

    return app


def _parse_indices(raw: str) -> list[int]:
    try:
        indices = [int(part) for part in raw.split(",") if part.strip()]
    except ValueError as exc:
        raise ApiError(422, "invalid-indices", f"cannot parse eigenvector list {raw!r}") from exc
    if not indices:
        raise ApiError(422, "invalid-indices", "at least one eigenvector index is required")
    return indices


async def _json_body(request: Request, optional: bool = False) -> dict:
    raw = await request.body()
    if not raw:
        if optional:
            return {}
        raise ApiError(422, "invalid-body", "a JSON object body is required")
    try:
        body = await request.json()
    except Exception as exc:
        raise ApiError(422, "invalid-body", "request body is not valid JSON") from exc
    if not isinstance(body, dict):
        raise ApiError(422, "invalid-body", "request body must be a JSON object")
    return body
