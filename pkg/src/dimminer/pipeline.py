"""End-to-end plumbing: configuration, decomposition, and baseline runs."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields

from .cluster import ClusterRun, embed, two_means
from .corpus import Corpus, SubjectivityLexicon, build_corpus
from .dimension import DimensionProfile, build_profiles
from .errors import ConfigError
from .metrics import MetricReport, report_from_run
from .spectral import (
    EigenBasis,
    Laplacian,
    LaplacianKind,
    SimilarityGraph,
    irm_laplacian,
    normalized_laplacian,
    similarity_matrix,
    top_eigenpairs,
)


@dataclass
class PipelineConfig:
    """Every knob of the pipeline; defaults follow the reference setup."""

    mode: str = "BOW"
    df_prune_fraction: float = 0.015
    m: int = 5
    unambiguous_fraction: float = 0.25
    f_count: int = 100
    c_param: float = 1.0
    kmeans_runs: int = 10
    base_seed: int = 0
    laplacian_kind: LaplacianKind = LaplacianKind.NORMALIZED
    irm_k: int | None = None

    def __post_init__(self):
        if isinstance(self.laplacian_kind, str):
            self.laplacian_kind = LaplacianKind(self.laplacian_kind)

    @staticmethod
    def field_names() -> list[str]:
        return [f.name for f in fields(PipelineConfig)]

    @staticmethod
    def from_dict(values: dict) -> "PipelineConfig":
        unknown = set(values) - set(PipelineConfig.field_names())
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return PipelineConfig(**values)

    def replace(self, **overrides) -> "PipelineConfig":
        data = asdict(self)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return PipelineConfig.from_dict(data)

    def to_json(self) -> dict:
        data = asdict(self)
        data["laplacian_kind"] = self.laplacian_kind.value
        return data


def corpus_from_documents(docs, config: PipelineConfig, lexicon: SubjectivityLexicon | None = None) -> Corpus:
    return build_corpus(
        docs, mode=config.mode, lexicon=lexicon, df_prune_fraction=config.df_prune_fraction
    )


def laplacian_for(graph: SimilarityGraph, config: PipelineConfig) -> Laplacian:
    if config.laplacian_kind == LaplacianKind.IRM:
        if config.irm_k is None:
            raise ConfigError("irm_k must be set for the IRM laplacian")
        return irm_laplacian(graph, config.irm_k)
    return normalized_laplacian(graph)


def decompose(corpus: Corpus, config: PipelineConfig) -> tuple[SimilarityGraph, Laplacian, EigenBasis]:
    graph = similarity_matrix(corpus)
    lap = laplacian_for(graph, config)
    basis = top_eigenpairs(lap, config.m)
    return graph, lap, basis


def profiles_for(corpus: Corpus, basis: EigenBasis, config: PipelineConfig) -> list[DimensionProfile]:
    return build_profiles(
        corpus,
        basis,
        f_count=config.f_count,
        c_param=config.c_param,
        fraction=config.unambiguous_fraction,
    )


def cluster_along(
    basis: EigenBasis, indices, config: PipelineConfig, seed: int | None = None
) -> ClusterRun:
    emb = embed(basis, indices)
    return two_means(
        emb, runs=config.kmeans_runs, base_seed=config.base_seed if seed is None else seed
    )


def _scored(run: ClusterRun, corpus: Corpus) -> MetricReport | None:
    if not corpus.has_gold():
        return None
    return report_from_run(run, corpus.gold_by_id())


def baseline_second_eig(corpus: Corpus, basis: EigenBasis, config: PipelineConfig):
    """Cluster on e_2 alone: the plain normalized-cut relaxation."""
    run = cluster_along(basis, [2], config)
    return run, _scored(run, corpus)


def baseline_top_m(corpus: Corpus, basis: EigenBasis, config: PipelineConfig):
    """Cluster in the space of e_1..e_m (row-normalized)."""
    run = cluster_along(basis, range(1, basis.m + 1), config)
    return run, _scored(run, corpus)


def baseline_irm(corpus: Corpus, graph: SimilarityGraph, config: PipelineConfig, k: int | None = None):
    """Interested-reader-model clustering: top 2 eigenvectors of the IRM Laplacian."""
    k = k if k is not None else config.irm_k
    if k is None:
        raise ConfigError("an IRM neighbor count k is required")
    lap = irm_laplacian(graph, k)
    basis = top_eigenpairs(lap, 2)
    run = cluster_along(basis, [1, 2], config)
    return run, _scored(run, corpus)


def sweep_irm_k(corpus: Corpus, graph: SimilarityGraph, config: PipelineConfig, ks) -> list[tuple[int, MetricReport | None]]:
    """Run the IRM baseline for each k; handy because results are k-sensitive."""
    out = []
    for k in ks:
        _, report = baseline_irm(corpus, graph, config, k=k)
        out.append((int(k), report))
    return out
