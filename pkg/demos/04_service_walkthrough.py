"""Walk the HTTP session protocol end to end, in process.

The same service normally runs via `dimminer serve`; here we mount it on a
test client so the walkthrough needs no open port. The browser explorer
under frontend/ speaks exactly this protocol.
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from dimminer import build_corpus
from dimminer.pipeline import PipelineConfig, decompose, profiles_for
from dimminer.service import ServiceState, create_app
from dimminer.synth import make_two_factor_corpus

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
)
client = TestClient(create_app(state))

print("POST /sessions")
session = client.post("/sessions", json={"session_id": "walkthrough"}).json()
print("  ->", session)

print("\nGET /sessions/walkthrough/dimensions")
dims = client.get("/sessions/walkthrough/dimensions").json()["dimensions"]
for d in dims:
    head = ", ".join(t for t, _ in d["list_c1"][:4])
    print(f"  e_{d['eig_index']}: {d['unambiguous_top_count']}+{d['unambiguous_bottom_count']} "
          f"unambiguous docs; C1 starts {head}")

print("\nGET /sessions/walkthrough/preview?eig=3   (what-if, no side effects)")
preview = client.get("/sessions/walkthrough/preview", params={"eig": "3"}).json()
print(f"  cluster sizes {preview['cluster_sizes']}, "
      f"accuracy {preview['metrics']['accuracy_percent']:.1f}%")
print(f"  first snippet: {preview['samples'][0][0]['snippet'][:60]}...")

print("\nPOST /sessions/walkthrough/selection   (commit e_3, C2 = POSITIVE)")
committed = client.post(
    "/sessions/walkthrough/selection",
    json={"indices": [3], "polarity_map": {"c1": "NEGATIVE", "c2": "POSITIVE"}},
).json()
print(f"  result: sizes {committed['result']['cluster_sizes']}, "
      f"accuracy {committed['result']['metrics']['accuracy_percent']:.2f}%")

print("\nGET /sessions/walkthrough/result")
result = client.get("/sessions/walkthrough/result").json()
print(f"  polarity {result['result']['cluster_polarity']}, rev {result['rev']}")

print("\nPOST /sessions/walkthrough/lexicon-selection   (hands-free re-selection)")
lex = client.post(
    "/sessions/walkthrough/lexicon-selection",
    json={
        "positive": list(planted.sentiment_pools[0]),
        "negative": list(planted.sentiment_pools[1]),
    },
).json()
print(f"  picked e_{lex['selection_score']['eig_index']} "
      f"score {lex['selection_score']['score']} gap {lex['selection_score']['gap']}")
