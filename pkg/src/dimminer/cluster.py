"""2-means in eigenvector subspaces plus cut / normalized-cut evaluation.

A 1-D embedding keeps raw eigenvector values; embeddings of two or more
eigenvectors are row-normalized to unit length (signs retained). 2-means
runs Lloyd iterations from data-point seeds drawn by a deterministic
generator keyed on (base_seed, run index); the canonical partition is the
run with the lowest within-cluster sum of squared distances.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateDataError, UndefinedNCutError
from .spectral import EigenBasis, SimilarityGraph

log = logging.getLogger(__name__)

MAX_LLOYD_ITERATIONS = 300


@dataclass
class Embedding:
    points: np.ndarray  # (n_active, q)
    source_eig_indices: tuple[int, ...]
    row_normalized: bool
    active_ids: tuple[str, ...]
    isolated_ids: tuple[str, ...]


def embed(basis: EigenBasis, indices) -> Embedding:
    """Select eigenvectors (1-based, ascending order) as embedding columns."""
    idx = sorted(set(int(i) for i in indices))
    if not idx:
        raise ConfigError("at least one eigenvector index is required")
    for i in idx:
        if not (1 <= i <= basis.m):
            raise ConfigError(f"eigenvector index {i} out of range 1..{basis.m}")
    points = np.column_stack([basis.eigenvector(i) for i in idx])
    normalized = len(idx) >= 2
    if normalized:
        norms = np.linalg.norm(points, axis=1)
        nonzero = norms > 0
        points = points.copy()
        points[nonzero] /= norms[nonzero, None]
    return Embedding(
        points=points,
        source_eig_indices=tuple(idx),
        row_normalized=normalized,
        active_ids=basis.active_ids,
        isolated_ids=basis.isolated_ids,
    )


@dataclass
class Partition:
    """Two-way assignment over every document id (isolated ones included)."""

    ids: tuple[str, ...]
    assign: np.ndarray  # 0/1 per id
    provenance: str

    def __post_init__(self):
        self._pos = {doc_id: i for i, doc_id in enumerate(self.ids)}

    def cluster_sizes(self) -> tuple[int, int]:
        ones = int(self.assign.sum())
        return (len(self.ids) - ones, ones)

    def label_of(self, doc_id: str) -> int:
        return int(self.assign[self._pos[doc_id]])

    def members(self, cluster: int) -> list[str]:
        return [d for d, a in zip(self.ids, self.assign) if a == cluster]


@dataclass
class ClusterRun:
    canonical: Partition
    per_run_partitions: list[Partition]
    per_run_sse: list[float]
    runs: int
    base_seed: int


def _lloyd(points: np.ndarray, c0: np.ndarray, c1: np.ndarray) -> tuple[np.ndarray, float, list[float]]:
    """Lloyd iterations to an assignment fixpoint.

    Returns (assign, final sse, per-iteration sse trajectory).
    """
    assign = None
    centroids = np.vstack([c0, c1])
    trajectory: list[float] = []
    for _ in range(MAX_LLOYD_ITERATIONS):
        d0 = ((points - centroids[0]) ** 2).sum(axis=1)
        d1 = ((points - centroids[1]) ** 2).sum(axis=1)
        new_assign = (d1 < d0).astype(np.int8)  # ties go to cluster 0
        for c in (0, 1):
            if not (new_assign == c).any():
                # empty-cluster repair: move the point farthest from its centroid
                other = 1 - c
                dist = d0 if other == 0 else d1
                new_assign[int(np.argmax(dist))] = c
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        centroids = np.vstack(
            [points[assign == 0].mean(axis=0), points[assign == 1].mean(axis=0)]
        )
        d0 = ((points - centroids[0]) ** 2).sum(axis=1)
        d1 = ((points - centroids[1]) ** 2).sum(axis=1)
        trajectory.append(float(np.where(assign == 0, d0, d1).sum()))
    return assign, trajectory[-1], trajectory


def _with_isolated(assign: np.ndarray, emb: Embedding, provenance: str) -> Partition:
    ids = emb.active_ids + emb.isolated_ids
    if emb.isolated_ids:
        bigger = 0 if (assign == 0).sum() >= (assign == 1).sum() else 1
        log.warning(
            "%d isolated documents attached to cluster %d", len(emb.isolated_ids), bigger
        )
        assign = np.concatenate([assign, np.full(len(emb.isolated_ids), bigger, dtype=np.int8)])
    return Partition(ids=ids, assign=assign.astype(np.int8), provenance=provenance)


def two_means(emb: Embedding, runs: int = 10, base_seed: int = 0) -> ClusterRun:
    """Repeated 2-means over `emb`; canonical result is the min-SSE run."""
    points = emb.points
    n = points.shape[0]
    if n < 2:
        raise DegenerateDataError("need at least 2 documents to cluster")
    if runs < 1:
        raise ConfigError(f"runs must be >= 1, got {runs}")
    if np.all(points == points[0]):
        raise DegenerateDataError("all embedded points are identical")

    partitions: list[Partition] = []
    sses: list[float] = []
    for run in range(runs):
        rng = np.random.default_rng((base_seed, run))
        i = int(rng.integers(n))
        distinct = np.flatnonzero(~np.all(points == points[i], axis=1))
        j = int(rng.choice(distinct))
        assign, sse, _ = _lloyd(points, points[i], points[j])
        provenance = (
            f"two_means eig={list(emb.source_eig_indices)} run={run} "
            f"base_seed={base_seed} seeds=({i},{j})"
        )
        partitions.append(_with_isolated(assign, emb, provenance))
        sses.append(sse)

    best = int(np.argmin(sses))
    canonical = Partition(
        ids=partitions[best].ids,
        assign=partitions[best].assign.copy(),
        provenance=partitions[best].provenance + " canonical",
    )
    return ClusterRun(
        canonical=canonical,
        per_run_partitions=partitions,
        per_run_sse=sses,
        runs=runs,
        base_seed=base_seed,
    )


def _masks(p: Partition, g: SimilarityGraph) -> tuple[np.ndarray, np.ndarray]:
    labels = np.array([p.label_of(doc_id) for doc_id in g.ids], dtype=np.int8)
    return labels == 0, labels == 1


def cut_value(p: Partition, g: SimilarityGraph) -> float:
    """Total similarity between the two clusters."""
    in0, in1 = _masks(p, g)
    return float(g.matrix[in0][:, in1].sum())


def ncut_value(p: Partition, g: SimilarityGraph) -> float:
    """Cut normalized by each cluster's total connection to the whole graph."""
    in0, in1 = _masks(p, g)
    cut = float(g.matrix[in0][:, in1].sum())
    assoc0 = float(g.degrees[in0].sum())
    assoc1 = float(g.degrees[in1].sum())
    if assoc0 == 0.0 or assoc1 == 0.0:
        raise UndefinedNCutError("a cluster has zero total degree; NCut is undefined")
    return cut / assoc0 + cut / assoc1


def threshold_partition(basis: EigenBasis, g: SimilarityGraph, eig_index: int = 2) -> Partition:
    """Best-NCut threshold split along one eigenvector's linear order.

    Documents are ordered by their eigenvector entries and every prefix
    split is scored; the lowest-NCut one wins. This is the simple
    thresholding alternative to 2-means for a single eigenvector.
    """
    values = basis.eigenvector(eig_index)
    if basis.isolated_ids:
        raise UndefinedNCutError("threshold split needs every document in the graph")
    order = np.argsort(-values, kind="stable")
    n = len(order)
    best = None
    for k in range(1, n):
        assign = np.ones(n, dtype=np.int8)
        assign[order[:k]] = 0
        p = Partition(
            ids=basis.active_ids,
            assign=assign,
            provenance=f"threshold split of e_{eig_index} at rank {k}",
        )
        nc = ncut_value(p, g)
        if best is None or nc < best[0]:
            best = (nc, p)
    return best[1]
