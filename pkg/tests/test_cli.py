import json

import pytest
from fastapi.testclient import TestClient

from dimminer.cli import main
from dimminer.service import ServiceState, create_app


@pytest.fixture(scope="module")
def planted_jsonl(tmp_path_factory, planted):
    path = tmp_path_factory.mktemp("data") / "planted.jsonl"
    rows = [
        {"id": d.id, "text": d.text, "label": d.gold_label, "domain": d.domain_tag}
        for d in planted.documents
    ]
    path.write_text("\n".join(json.dumps(r) for r in rows), encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def lexicon_tsv(tmp_path_factory, planted):
    path = tmp_path_factory.mktemp("data") / "lexicon.tsv"
    lines = [f"{t}\tpositive" for t in planted.sentiment_pools[0]]
    lines += [f"{t}\tnegative" for t in planted.sentiment_pools[1]]
    lines.append("the\tneutral")
    path.write_text("\n".join(lines), encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory, planted_jsonl):
    root = tmp_path_factory.mktemp("dimminer_data")
    rc = main(["--data-dir", str(root), "ingest", "--input", str(planted_jsonl), "--name", "planted"])
    assert rc == 0
    return root


def run(data_dir, *argv):
    return main(["--data-dir", str(data_dir), *argv])


class TestPipelineCommands:
    def test_ingest_created_cache(self, data_dir):
        assert (data_dir / "corpora" / "planted.json.gz").exists()

    def test_decompose_caches_basis(self, data_dir, capsys):
        assert run(data_dir, "decompose", "--name", "planted") == 0
        first = capsys.readouterr().out
        assert "computed top-5 eigenpairs" in first or "cached top-5 eigenpairs" in first
        assert run(data_dir, "decompose", "--name", "planted") == 0
        assert "cached top-5 eigenpairs" in capsys.readouterr().out
        assert list((data_dir / "bases").glob("*.eig"))

    def test_profiles_emit_json(self, data_dir, capsys):
        assert run(data_dir, "profiles", "--name", "planted") == 0
        out_dir = data_dir / "profiles" / "planted"
        files = sorted(p.name for p in out_dir.glob("e*.json"))
        assert files == ["e2.json", "e3.json", "e4.json", "e5.json"]
        doc = json.loads((out_dir / "e3.json").read_text())
        assert set(doc) == {"eig_index", "top_ids", "bottom_ids", "list_c1", "list_c2"}
        assert len(doc["top_ids"]) == 50

    def test_baselines_all(self, data_dir, capsys):
        assert run(data_dir, "baselines", "--name", "planted", "--which", "all", "--irm-k", "20") == 0
        out = capsys.readouterr().out
        assert "second-eig" in out and "top-5" in out and "irm(k=20)" in out
        assert "accuracy" in out and "ARI" in out

    def test_select_and_eval(self, data_dir, capsys):
        rc = run(
            data_dir,
            "select", "--name", "planted", "--session", "cli-h",
            "--eig", "3", "--positive-list", "c2",
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "selected e_3 (HUMAN)" in out
        assert (data_dir / "sessions" / "cli-h.json").exists()
        assert run(data_dir, "eval", "--name", "planted", "--session", "cli-h") == 0
        table = capsys.readouterr().out
        assert "accuracy (%)" in table

    def test_eval_json(self, data_dir, capsys):
        assert run(data_dir, "eval", "--name", "planted", "--session", "cli-h", "--json") == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["accuracy_percent"] >= 90.0

    def test_lexicon_select(self, data_dir, lexicon_tsv, capsys):
        rc = run(
            data_dir,
            "lexicon-select", "--name", "planted", "--session", "cli-lex",
            "--lexicon", str(lexicon_tsv),
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "selected e_3 (LEXICON)" in out
        assert "score" in out and "gap" in out

    def test_adapt(self, data_dir, capsys):
        profile_path = data_dir / "profiles" / "planted" / "e3.json"
        rc = run(
            data_dir,
            "adapt", "--name", "planted", "--session", "cli-adapt",
            "--source-profile", str(profile_path), "--positive-list", "c2",
        )
        assert rc == 0
        assert "selected e_3 (ADAPTED)" in capsys.readouterr().out

    def test_multi_eig_select(self, data_dir, capsys):
        rc = run(
            data_dir,
            "select", "--name", "planted", "--session", "cli-multi",
            "--eig", "3,4", "--positive-list", "c1",
        )
        assert rc == 0
        doc = json.loads((data_dir / "sessions" / "cli-multi.json").read_text())
        assert doc["selection"]["indices"] == [3, 4]


class TestConfigFile:
    def test_config_file_and_flag_override(self, data_dir, tmp_path, capsys):
        cfg = tmp_path / "config.json"
        cfg.write_text(json.dumps({"m": 3, "f_count": 20}), encoding="utf-8")
        rc = run(
            data_dir,
            "profiles", "--name", "planted", "--config", str(cfg), "--f-count", "5",
        )
        assert rc == 0
        out = capsys.readouterr().out
        # config file sets m=3 (two profiles); the flag overrides f_count to 5
        assert "e_2: 5/5 terms" in out
        assert "e_3: 5/5 terms" in out
        assert "e_4" not in out

    def test_missing_config_file(self, data_dir, capsys):
        assert run(data_dir, "decompose", "--name", "planted", "--config", "absent.json") == 2
        assert "error: config:" in capsys.readouterr().err


class TestErrors:
    def test_unknown_corpus(self, data_dir, capsys):
        rc = run(data_dir, "decompose", "--name", "missing")
        assert rc == 2
        err = capsys.readouterr().err
        assert err.startswith("error: config: ")
        assert err.count("\n") == 1

    def test_eval_without_target(self, data_dir, capsys):
        assert run(data_dir, "eval", "--name", "planted") == 2
        assert capsys.readouterr().err.startswith("error: config: ")


class TestParity:
    def test_cli_and_http_selection_agree(self, data_dir, planted_corpus, planted_basis, planted_profiles, tmp_path):
        run(
            data_dir,
            "select", "--name", "planted", "--session", "parity",
            "--eig", "3", "--positive-list", "c2",
        )
        cli_doc = json.loads((data_dir / "sessions" / "parity.json").read_text())

        state = ServiceState(
            corpus=planted_corpus,
            basis=planted_basis,
            profiles=planted_profiles,
            sessions_dir=tmp_path / "sessions",
        )
        with TestClient(create_app(state)) as client:
            client.post("/sessions", json={"session_id": "parity"})
            r = client.post(
                "/sessions/parity/selection",
                json={
                    "indices": [3],
                    "polarity_map": {"c1": "NEGATIVE", "c2": "POSITIVE"},
                },
            )
            assert r.status_code == 200
        http_doc = json.loads((tmp_path / "sessions" / "parity.json").read_text())

        def strip_times(doc):
            doc = json.loads(json.dumps(doc))
            doc.pop("created"), doc.pop("updated")
            for h in doc["history"]:
                h.pop("at")
            return doc

        assert strip_times(cli_doc) == strip_times(http_doc)
