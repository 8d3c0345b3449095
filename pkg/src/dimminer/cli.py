"""Command-line interface: every pipeline stage plus the HTTP service.

Artifacts live under a data directory (flag --data-dir, env
DIMMINER_DATA_DIR, default ./dimminer_data):

    corpora/<name>.json.gz    vectorized corpora (`ingest`)
    bases/<key>.eig           eigenbasis caches (`decompose`)
    profiles/<name>/e<i>.json dimension profiles (`profiles`)
    sessions/<id>.json        feedback sessions (`select`, ...)

Failures print one machine-parsable line to stderr: `error: <code>: <message>`.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .corpus import load_corpus, load_lexicon, read_raw_documents, save_corpus
from .dimension import NEGATIVE, POSITIVE, DimensionProfile
from .errors import ConfigError, DimminerError, SessionError
from .feedback import (
    ADAPTED,
    HUMAN,
    LEXICON,
    adapt_polarity_map,
    adapt_select,
    lexicon_select,
    load_session,
    new_session,
    record_selection,
    save_session,
)
from .metrics import supervised_cv
from .pipeline import (
    PipelineConfig,
    baseline_irm,
    baseline_second_eig,
    baseline_top_m,
    corpus_from_documents,
    laplacian_for,
    profiles_for,
)
from .spectral import (
    LaplacianKind,
    basis_cache_key,
    load_basis,
    save_basis,
    similarity_matrix,
    top_eigenpairs,
)

DEFAULT_DATA_DIR = "./dimminer_data"


def data_dir_from(args) -> Path:
    raw = args.data_dir or os.environ.get("DIMMINER_DATA_DIR") or DEFAULT_DATA_DIR
    return Path(raw)


def add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pipeline config")
    group.add_argument("--config", help="JSON file with PipelineConfig fields")
    group.add_argument("--mode", choices=["BOW", "BOAW", "BOSW"])
    group.add_argument("--df-prune-fraction", type=float)
    group.add_argument("--m", type=int)
    group.add_argument("--unambiguous-fraction", type=float)
    group.add_argument("--f-count", type=int)
    group.add_argument("--c-param", type=float)
    group.add_argument("--kmeans-runs", type=int)
    group.add_argument("--base-seed", type=int)
    group.add_argument("--laplacian-kind", choices=[k.value for k in LaplacianKind])
    group.add_argument("--irm-k", type=int)


def config_from(args) -> PipelineConfig:
    config = PipelineConfig()
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        config = PipelineConfig.from_dict(json.loads(path.read_text(encoding="utf-8")))
    overrides = {
        name: getattr(args, name, None)
        for name in PipelineConfig.field_names()
        if getattr(args, name, None) is not None
    }
    return config.replace(**overrides)


def corpus_path(data_dir: Path, name: str) -> Path:
    return data_dir / "corpora" / f"{name}.json.gz"


def load_named_corpus(data_dir: Path, name: str):
    path = corpus_path(data_dir, name)
    if not path.exists():
        raise ConfigError(f"no ingested corpus named {name!r} (expected {path})")
    return load_corpus(path)


def ensure_basis(data_dir: Path, corpus, config: PipelineConfig):
    """Load the eigenbasis from cache, computing and caching it on a miss."""
    key = basis_cache_key(
        corpus.content_hash(), config.laplacian_kind, config.m, config.irm_k
    )
    path = data_dir / "bases" / f"{key}.eig"
    if path.exists():
        basis, _, _ = load_basis(path, expected_key=key)
        return basis, path, True
    graph = similarity_matrix(corpus)
    lap = laplacian_for(graph, config)
    basis = top_eigenpairs(lap, config.m)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_basis(basis, config.laplacian_kind, key, path)
    return basis, path, False


def load_or_create_session(data_dir: Path, session_id: str, corpus, basis, profiles):
    path = data_dir / "sessions" / f"{session_id}.json"
    if path.exists():
        session = load_session(path)
        if session.corpus_ref != corpus.content_hash():
            raise SessionError(
                f"session {session_id!r} belongs to a different corpus"
            )
        session.corpus, session.basis, session.profiles = corpus, basis, profiles
        return session
    return new_session(session_id, corpus, basis, profiles)


def print_report(name: str, report) -> None:
    if report is None:
        print(f"{name:<16} accuracy n/a (no gold labels)")
    else:
        print(f"{name:<16} accuracy {report.accuracy_percent:6.2f}%   ARI {report.ari:+.4f}")


def cmd_ingest(args) -> int:
    data_dir = data_dir_from(args)
    config = config_from(args)
    docs = read_raw_documents(args.input)
    lexicon = None
    if args.lexicon:
        with open(args.lexicon, "rt", encoding="utf-8") as fh:
            lexicon = load_lexicon(fh)
    corpus = corpus_from_documents(docs, config, lexicon=lexicon)
    path = corpus_path(data_dir, args.name)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, path)
    print(
        f"ingested {corpus.n} documents, vocabulary {len(corpus.vocabulary)} terms "
        f"({corpus.mode}) -> {path}"
    )
    return 0


def cmd_decompose(args) -> int:
    data_dir = data_dir_from(args)
    config = config_from(args)
    corpus = load_named_corpus(data_dir, args.name)
    basis, path, cached = ensure_basis(data_dir, corpus, config)
    state = "cached" if cached else "computed"
    print(
        f"{state} top-{basis.m} eigenpairs over {len(basis.active_ids)} documents "
        f"(residual {basis.residual_tol:.2e}) -> {path}"
    )
    return 0


def cmd_profiles(args) -> int:
    data_dir = data_dir_from(args)
    config = config_from(args)
    corpus = load_named_corpus(data_dir, args.name)
    basis, _, _ = ensure_basis(data_dir, corpus, config)
    profiles = profiles_for(corpus, basis, config)
    out_dir = data_dir / "profiles" / args.name
    out_dir.mkdir(parents=True, exist_ok=True)
    for profile in profiles:
        out = out_dir / f"e{profile.eig_index}.json"
        out.write_text(json.dumps(profile.to_json(), indent=2), encoding="utf-8")
        print(f"e_{profile.eig_index}: {len(profile.list_c1)}/{len(profile.list_c2)} terms -> {out}")
    return 0


def cmd_baselines(args) -> int:
    data_dir = data_dir_from(args)
    config = config_from(args)
    corpus = load_named_corpus(data_dir, args.name)
    which = args.which
    if which in ("second-eig", "top-m", "all"):
        basis, _, _ = ensure_basis(data_dir, corpus, config)
        if which in ("second-eig", "all"):
            _, report = baseline_second_eig(corpus, basis, config)
            print_report("second-eig", report)
        if which in ("top-m", "all"):
            _, report = baseline_top_m(corpus, basis, config)
            print_report(f"top-{config.m}", report)
    if which in ("irm", "all"):
        k = args.irm_k or config.irm_k
        if k is None:
            raise ConfigError("the IRM baseline needs --irm-k")
        graph = similarity_matrix(corpus)
        _, report = baseline_irm(corpus, graph, config, k=k)
        print_report(f"irm(k={k})", report)
    return 0


def _session_pieces(args, config):
    data_dir = data_dir_from(args)
    corpus = load_named_corpus(data_dir, args.name)
    basis, _, _ = ensure_basis(data_dir, corpus, config)
    profiles = profiles_for(corpus, basis, config)
    session = load_or_create_session(data_dir, args.session, corpus, basis, profiles)
    return data_dir, corpus, basis, profiles, session


def _finish_selection(data_dir, session, score=None) -> int:
    path = save_session(session, data_dir / "sessions")
    indices, source = session.selection
    line = f"selected e_{','.join(str(i) for i in indices)} ({source})"
    if score is not None:
        line += f" score {score.score} gap {score.gap}"
    print(line)
    polarity = session.result.cluster_polarity
    sizes = session.result.partition.cluster_sizes()
    print(
        f"clusters: {polarity[0]} n={sizes[0]}  {polarity[1]} n={sizes[1]}"
    )
    if session.result.metrics is not None:
        print(session.result.metrics.to_table())
    print(f"session -> {path}")
    return 0


def cmd_select(args) -> int:
    config = config_from(args)
    data_dir, _, _, _, session = _session_pieces(args, config)
    indices = [int(x) for x in args.eig.split(",") if x.strip()]
    if args.positive_list == "c1":
        polarity = {"c1": POSITIVE, "c2": NEGATIVE}
    else:
        polarity = {"c1": NEGATIVE, "c2": POSITIVE}
    record_selection(
        session,
        indices,
        polarity,
        source=HUMAN,
        runs=config.kmeans_runs,
        base_seed=config.base_seed,
        note=args.note,
    )
    return _finish_selection(data_dir, session)


def cmd_lexicon_select(args) -> int:
    config = config_from(args)
    data_dir, _, _, profiles, session = _session_pieces(args, config)
    with open(args.lexicon, "rt", encoding="utf-8") as fh:
        lexicon = load_lexicon(fh)
    score, polarity = lexicon_select(profiles, lexicon)
    record_selection(
        session,
        [score.eig_index],
        polarity,
        source=LEXICON,
        runs=config.kmeans_runs,
        base_seed=config.base_seed,
        note=args.note,
    )
    return _finish_selection(data_dir, session, score)


def cmd_adapt(args) -> int:
    config = config_from(args)
    data_dir, _, _, profiles, session = _session_pieces(args, config)
    source = DimensionProfile.from_json(
        json.loads(Path(args.source_profile).read_text(encoding="utf-8"))
    )
    if args.positive_list:
        source.list_c1.polarity_label = POSITIVE if args.positive_list == "c1" else NEGATIVE
        source.list_c2.polarity_label = NEGATIVE if args.positive_list == "c1" else POSITIVE
    score = adapt_select(source, profiles)
    winner = session.profile_for(score.eig_index)
    polarity = adapt_polarity_map(source, winner)
    record_selection(
        session,
        [score.eig_index],
        polarity,
        source=ADAPTED,
        runs=config.kmeans_runs,
        base_seed=config.base_seed,
        note=args.note,
    )
    return _finish_selection(data_dir, session, score)


def cmd_eval(args) -> int:
    data_dir = data_dir_from(args)
    config = config_from(args)
    corpus = load_named_corpus(data_dir, args.name)
    if args.cv:
        acc = supervised_cv(corpus, folds=args.folds, c_param=config.c_param)
        if args.json:
            print(json.dumps({"cv_accuracy_percent": acc, "folds": args.folds}))
        else:
            print(f"{args.folds}-fold supervised accuracy {acc:.2f}%")
        return 0
    if not args.session:
        raise ConfigError("eval needs --session (or --cv)")
    path = data_dir / "sessions" / f"{args.session}.json"
    if not path.exists():
        raise SessionError(f"no session {args.session!r} under {path.parent}")
    session = load_session(path)
    if session.result is None or session.result.metrics is None:
        raise SessionError("session has no evaluated result (missing selection or gold labels)")
    if args.json:
        print(session.result.metrics.dumps())
    else:
        print(session.result.metrics.to_table())
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceState, create_app

    data_dir = data_dir_from(args)
    config = config_from(args)
    corpus = load_named_corpus(data_dir, args.name)
    basis, _, _ = ensure_basis(data_dir, corpus, config)
    profiles = profiles_for(corpus, basis, config)
    state = ServiceState(
        corpus=corpus,
        basis=basis,
        profiles=profiles,
        sessions_dir=data_dir / "sessions",
        kmeans_runs=config.kmeans_runs,
        base_seed=config.base_seed,
        f_count=config.f_count,
    )
    ui_dir = Path(args.ui) if args.ui else None
    if ui_dir is not None and not ui_dir.is_dir():
        raise ConfigError(f"--ui directory not found: {ui_dir}")
    app = create_app(state, ui_dir=ui_dir)
    print(f"serving {args.name} on http://{args.host}:{args.port}"
          + (f" (explorer at /ui/)" if ui_dir else ""))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimminer",
        description="Induce clustering dimensions of a document collection and "
        "cluster along the one you pick.",
    )
    parser.add_argument("--data-dir", help="artifact root (env DIMMINER_DATA_DIR)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="build and cache a corpus from JSONL")
    p.add_argument("--input", required=True, help="JSONL file of documents")
    p.add_argument("--name", required=True, help="corpus name")
    p.add_argument("--lexicon", help="tab-separated lexicon (required for BOSW)")
    add_config_flags(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("decompose", help="cache the top-m eigenpairs of a corpus")
    p.add_argument("--name", required=True)
    add_config_flags(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("profiles", help="emit dimension profiles as JSON")
    p.add_argument("--name", required=True)
    add_config_flags(p)
    p.set_defaults(func=cmd_profiles)

    p = sub.add_parser("baselines", help="run the reference clusterings with metrics")
    p.add_argument("--name", required=True)
    p.add_argument(
        "--which", default="all", choices=["second-eig", "top-m", "irm", "all"]
    )
    add_config_flags(p)
    p.set_defaults(func=cmd_baselines)

    p = sub.add_parser("select", help="commit a human dimension selection")
    p.add_argument("--name", required=True)
    p.add_argument("--session", required=True)
    p.add_argument("--eig", required=True, help="eigenvector index list, e.g. 3 or 3,4")
    p.add_argument("--positive-list", required=True, choices=["c1", "c2"])
    p.add_argument("--note")
    add_config_flags(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("lexicon-select", help="select the dimension via a lexicon")
    p.add_argument("--name", required=True)
    p.add_argument("--session", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--note")
    add_config_flags(p)
    p.set_defaults(func=cmd_lexicon_select)

    p = sub.add_parser("adapt", help="select the dimension via a source-domain profile")
    p.add_argument("--name", required=True)
    p.add_argument("--session", required=True)
    p.add_argument("--source-profile", required=True, help="profile JSON file")
    p.add_argument("--positive-list", choices=["c1", "c2"],
                   help="which source list is POSITIVE (default c1)")
    p.add_argument("--note")
    add_config_flags(p)
    p.set_defaults(func=cmd_adapt)

    p = sub.add_parser("eval", help="print a metric report")
    p.add_argument("--name", required=True)
    p.add_argument("--session", help="report a committed session result")
    p.add_argument("--cv", action="store_true", help="supervised cross-validation instead")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--json", action="store_true")
    add_config_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--name", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--ui", help="static explorer directory to mount at /ui")
    add_config_flags(p)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DimminerError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
