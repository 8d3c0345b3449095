"""Record API responses from the planted corpus for the frontend contract test.

Writes JSON fixtures under frontend/tests/fixtures/. Rerun after any change
to the service wire format, then re-run the frontend tests.
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from dimminer import build_corpus
from dimminer.pipeline import PipelineConfig, decompose, profiles_for
from dimminer.service import ServiceState, create_app
from dimminer.synth import make_two_factor_corpus

FIXTURES = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


def main() -> None:
    planted = make_two_factor_corpus(seed=26)
    corpus = build_corpus(planted.documents)
    config = PipelineConfig()
    _, _, basis = decompose(corpus, config)
    profiles = profiles_for(corpus, basis, config)
    state = ServiceState(
        corpus=corpus,
        basis=basis,
        profiles=profiles,
        sessions_dir=Path(tempfile.mkdtemp()) / "sessions",
        f_count=config.f_count,
    )
    client = TestClient(create_app(state))

    out: dict[str, dict] = {}
    out["session_created"] = client.post(
        "/sessions", json={"session_id": "fixture"}
    ).json()
    out["sessions_list"] = client.get("/sessions").json()
    out["dimensions"] = client.get("/sessions/fixture/dimensions").json()
    out["preview_e3"] = client.get(
        "/sessions/fixture/preview", params={"eig": "3"}
    ).json()
    out["selection_response"] = client.post(
        "/sessions/fixture/selection",
        json={
            "indices": [3],
            "polarity_map": {"c1": "NEGATIVE", "c2": "POSITIVE"},
            "source": "HUMAN",
            "note": "contract fixture",
        },
    ).json()
    out["result"] = client.get("/sessions/fixture/result").json()

    FIXTURES.mkdir(parents=True, exist_ok=True)
    for name, doc in out.items():
        path = FIXTURES / f"{name}.json"
        path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
