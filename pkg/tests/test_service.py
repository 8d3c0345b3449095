import json

import pytest
from fastapi.testclient import TestClient

from dimminer.service import ServiceState, create_app


@pytest.fixture()
def client(planted_corpus, planted_basis, planted_profiles, tmp_path):
    state = ServiceState(
        corpus=planted_corpus,
        basis=planted_basis,
        profiles=planted_profiles,
        sessions_dir=tmp_path / "sessions",
    )
    app = create_app(state)
    with TestClient(app) as c:
        c.state_obj = state
        yield c


def make_session(client, session_id="s1"):
    r = client.post("/sessions", json={"session_id": session_id})
    assert r.status_code == 201, r.text
    return r.json()


class TestSessions:
    def test_create_and_list(self, client):
        doc = make_session(client)
        assert doc["session_id"] == "s1"
        assert doc["has_result"] is False
        listed = client.get("/sessions").json()["sessions"]
        assert [s["session_id"] for s in listed] == ["s1"]

    def test_create_conflict(self, client):
        make_session(client)
        r = client.post("/sessions", json={"session_id": "s1"})
        assert r.status_code == 409
        assert r.json()["code"] == "session-exists"

    def test_unknown_session_404(self, client):
        r = client.get("/sessions/nope/dimensions")
        assert r.status_code == 404
        assert r.json() == {"code": "unknown-session", "message": "no session 'nope'"}

    def test_sessions_persist_across_restart(self, client, planted_corpus, planted_basis, planted_profiles, tmp_path):
        make_session(client)
        client.post(
            "/sessions/s1/selection",
            json={"indices": [3], "polarity_map": {"c1": "NEGATIVE", "c2": "POSITIVE"}},
        )
        state = ServiceState(
            corpus=planted_corpus,
            basis=planted_basis,
            profiles=planted_profiles,
            sessions_dir=tmp_path / "sessions",
        )
        with TestClient(create_app(state)) as fresh:
            listed = fresh.get("/sessions").json()["sessions"]
            assert [s["session_id"] for s in listed] == ["s1"]
            assert listed[0]["has_result"] is True


class TestDimensions:
    def test_four_panels_with_lists(self, client):
        make_session(client)
        doc = client.get("/sessions/s1/dimensions").json()
        dims = doc["dimensions"]
        assert [d["eig_index"] for d in dims] == [2, 3, 4, 5]
        for d in dims:
            assert len(d["list_c1"]) <= 100
            assert len(d["list_c2"]) <= 100
            assert d["unambiguous_top_count"] == 50
            assert d["unambiguous_bottom_count"] == 50


class TestPreview:
    def test_preview_shape(self, client):
        make_session(client)
        doc = client.get("/sessions/s1/preview", params={"eig": "3"}).json()
        assert doc["eig_indices"] == [3]
        assert sum(doc["cluster_sizes"]) == 400
        assert len(doc["samples"]) == 2
        assert all(len(side) <= 10 for side in doc["samples"])
        assert all("snippet" in s and len(s["snippet"]) <= 300 for s in doc["samples"][0])
        assert doc["metrics"]["accuracy_percent"] >= 90.0

    def test_preview_multi_eig(self, client):
        make_session(client)
        doc = client.get("/sessions/s1/preview", params={"eig": "3,4"}).json()
        assert doc["eig_indices"] == [3, 4]

    def test_preview_is_pure(self, client):
        make_session(client)
        before = client.get("/sessions").json()
        client.get("/sessions/s1/preview", params={"eig": "4"})
        after = client.get("/sessions").json()
        assert before == after

    def test_preview_bad_indices(self, client):
        make_session(client)
        assert client.get("/sessions/s1/preview", params={"eig": "9"}).status_code == 422
        assert client.get("/sessions/s1/preview", params={"eig": "x"}).status_code == 422


class TestSelection:
    def test_commit_and_result_roundtrip(self, client, planted):
        make_session(client)
        r = client.post(
            "/sessions/s1/selection",
            json={"indices": [3], "polarity_map": {"c1": "NEGATIVE", "c2": "POSITIVE"}},
        )
        assert r.status_code == 200, r.text
        doc = r.json()
        assert doc["selection"] == {"indices": [3], "source": "HUMAN"}
        assert doc["result"]["metrics"]["accuracy_percent"] >= 90.0
        assert sorted(doc["result"]["cluster_polarity"].values()) == ["NEGATIVE", "POSITIVE"]
        again = client.get("/sessions/s1/result").json()
        assert again == doc

    def test_preview_then_commit_other_dimension(self, client):
        make_session(client)
        client.get("/sessions/s1/preview", params={"eig": "4"})
        client.post(
            "/sessions/s1/selection",
            json={"indices": [3], "polarity_map": {"c1": "POSITIVE", "c2": "NEGATIVE"}},
        )
        doc = client.get("/sessions/s1/result").json()
        assert doc["selection"]["indices"] == [3]

    def test_result_404_before_selection(self, client):
        make_session(client)
        r = client.get("/sessions/s1/result")
        assert r.status_code == 404
        assert r.json()["code"] == "no-result"

    def test_invalid_selection_422(self, client):
        make_session(client)
        bad = [
            {"indices": [], "polarity_map": {"c1": "POSITIVE", "c2": "NEGATIVE"}},
            {"indices": [1], "polarity_map": {"c1": "POSITIVE", "c2": "NEGATIVE"}},
            {"indices": [3], "polarity_map": {"c1": "POSITIVE", "c2": "POSITIVE"}},
            {"indices": [3]},
        ]
        for body in bad:
            r = client.post("/sessions/s1/selection", json=body)
            assert r.status_code == 422, body
            assert "code" in r.json()

    def test_stale_revision_409(self, client):
        make_session(client)
        ok = client.post(
            "/sessions/s1/selection",
            json={"indices": [3], "polarity_map": {"c1": "POSITIVE", "c2": "NEGATIVE"}, "rev": 0},
        )
        assert ok.status_code == 200
        stale = client.post(
            "/sessions/s1/selection",
            json={"indices": [2], "polarity_map": {"c1": "POSITIVE", "c2": "NEGATIVE"}, "rev": 0},
        )
        assert stale.status_code == 409
        assert stale.json()["code"] == "stale-revision"

    def test_reselection_replaces_result(self, client):
        make_session(client)
        client.post(
            "/sessions/s1/selection",
            json={"indices": [2], "polarity_map": {"c1": "POSITIVE", "c2": "NEGATIVE"}},
        )
        first = client.get("/sessions/s1/result").json()
        client.post(
            "/sessions/s1/selection",
            json={"indices": [3], "polarity_map": {"c1": "POSITIVE", "c2": "NEGATIVE"}},
        )
        second = client.get("/sessions/s1/result").json()
        assert second["selection"]["indices"] == [3]
        assert second["result"]["assign"] != first["result"]["assign"]


class TestAutomaticSelection:
    def test_lexicon_selection(self, client, planted):
        make_session(client)
        r = client.post(
            "/sessions/s1/lexicon-selection",
            json={
                "positive": list(planted.sentiment_pools[0]),
                "negative": list(planted.sentiment_pools[1]),
            },
        )
        assert r.status_code == 200, r.text
        doc = r.json()
        assert doc["selection"]["source"] == "LEXICON"
        assert doc["selection_score"]["eig_index"] == 3
        assert doc["selection_score"]["gap"] >= 5

    def test_adapt_selection(self, client, planted_profiles):
        make_session(client)
        source = planted_profiles[1].to_json()  # e_3 profile doubles as a source
        r = client.post(
            "/sessions/s1/adapt",
            json={"source_profile": source, "positive_list": "c1"},
        )
        assert r.status_code == 200, r.text
        doc = r.json()
        assert doc["selection"]["source"] == "ADAPTED"
        assert doc["selection_score"]["eig_index"] == 3

    def test_bad_bodies_422(self, client):
        make_session(client)
        assert client.post("/sessions/s1/lexicon-selection", json={"positive": "x"}).status_code == 422
        assert client.post("/sessions/s1/adapt", json={}).status_code == 422


class TestStaticUI:
    def test_explorer_served_when_mounted(self, planted_corpus, planted_basis, planted_profiles, tmp_path):
        ui = tmp_path / "ui"
        ui.mkdir()
        (ui / "index.html").write_text("<html><body>explorer</body></html>", encoding="utf-8")
        state = ServiceState(
            corpus=planted_corpus,
            basis=planted_basis,
            profiles=planted_profiles,
            sessions_dir=tmp_path / "sessions",
        )
        with TestClient(create_app(state, ui_dir=ui)) as client:
            r = client.get("/ui/")
            assert r.status_code == 200
            assert "explorer" in r.text
