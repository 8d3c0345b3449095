"""Similarity graph, degree-normalized Laplacians, and top eigenpairs.

Two Laplacians are supported:

* ``NORMALIZED``: D^{-1/2} S D^{-1/2} over the non-isolated documents; its
  eigenvalues lie in [-1, 1] and sqrt(d) is the top eigenvector on a
  connected graph.
* ``IRM`` (interested reader model): (S' + d_max I - D') / d_max where S' is
  the k-nearest-neighbor sparsification of S (an entry survives when either
  endpoint ranks the other among its k most similar documents).

The eigensolver is dense symmetric diagonalization up to `dense_cutoff`
documents and a fully reorthogonalized Lanczos iteration with a fixed-seed
start vector above that; both are deterministic for identical inputs.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sp

from .corpus import Corpus
from .errors import ConfigError, ConvergenceError, DegenerateGraphError

DENSE_CUTOFF = 4096


class LaplacianKind(str, Enum):
    NORMALIZED = "normalized"
    IRM = "irm"


@dataclass
class SimilarityGraph:
    """Sparse symmetric nonnegative similarity matrix with zero diagonal."""

    ids: tuple[str, ...]
    matrix: sp.csr_matrix
    degrees: np.ndarray

    @property
    def n(self) -> int:
        return len(self.ids)


def similarity_matrix(corpus: Corpus) -> SimilarityGraph:
    """Pairwise dot products of the binary document vectors, diagonal zeroed."""
    if corpus.n == 0:
        raise DegenerateGraphError("empty corpus")
    s = (corpus.vectors @ corpus.vectors.T).tocsr()
    s.setdiag(0.0)
    s.eliminate_zeros()
    s.sort_indices()
    degrees = np.asarray(s.sum(axis=1)).ravel()
    return SimilarityGraph(ids=corpus.ids, matrix=s, degrees=degrees)


@dataclass
class Laplacian:
    matrix: sp.csr_matrix
    kind: LaplacianKind
    active_ids: tuple[str, ...]
    isolated_ids: tuple[str, ...]

    @property
    def n_active(self) -> int:
        return len(self.active_ids)


def normalized_laplacian(g: SimilarityGraph) -> Laplacian:
    """D^{-1/2} S D^{-1/2} over the documents with nonzero degree."""
    active = g.degrees > 0
    if not active.any():
        raise DegenerateGraphError("every document is isolated")
    idx = np.flatnonzero(active)
    sub = g.matrix[idx][:, idx].tocsr()
    inv_sqrt = 1.0 / np.sqrt(g.degrees[idx])
    scale = sp.diags(inv_sqrt)
    lap = (scale @ sub @ scale).tocsr()
    lap.sort_indices()
    ids = np.array(g.ids, dtype=object)
    return Laplacian(
        matrix=lap,
        kind=LaplacianKind.NORMALIZED,
        active_ids=tuple(ids[idx]),
        isolated_ids=tuple(ids[np.flatnonzero(~active)]),
    )


def _knn_keep_mask(s: sp.csr_matrix, k: int) -> np.ndarray:
    """Boolean (n, n) mask: M[i, j] iff j is among i's k most similar docs.

    Neighbors are ranked by (similarity desc, index asc) over the nonzero
    entries of row i, so ties resolve deterministically.
    """
    n = s.shape[0]
    mask = np.zeros((n, n), dtype=bool)
    indptr, indices, data = s.indptr, s.indices, s.data
    for i in range(n):
        cols = indices[indptr[i] : indptr[i + 1]]
        vals = data[indptr[i] : indptr[i + 1]]
        if cols.size == 0:
            continue
        order = np.lexsort((cols, -vals))
        mask[i, cols[order[:k]]] = True
    return mask


def irm_laplacian(g: SimilarityGraph, k: int) -> Laplacian:
    """(S' + d_max I - D') / d_max over the k-NN-sparsified similarity matrix."""
    if k < 1:
        raise ConfigError(f"neighbor count k must be >= 1, got {k}")
    keep = _knn_keep_mask(g.matrix, k)
    keep |= keep.T
    sparse_s = g.matrix.multiply(sp.csr_matrix(keep)).tocsr()
    new_deg = np.asarray(sparse_s.sum(axis=1)).ravel()
    d_max = float(new_deg.max()) if new_deg.size else 0.0
    if d_max == 0.0:
        raise DegenerateGraphError("sparsified similarity matrix has no edges")
    lap = (sparse_s + sp.diags(d_max - new_deg)) / d_max
    lap = lap.tocsr()
    lap.sort_indices()
    return Laplacian(
        matrix=lap, kind=LaplacianKind.IRM, active_ids=tuple(g.ids), isolated_ids=()
    )


@dataclass
class EigenBasis:
    """Top-m eigenpairs, eigenvalues descending, sign-fixed eigenvectors.

    `vectors` has one column per eigenpair, rows aligned with `active_ids`.
    The entry of largest absolute value in each column is positive (first
    such entry wins on ties). `residual_tol` bounds ||L e - lambda e||_2
    for every pair.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    m: int
    residual_tol: float
    active_ids: tuple[str, ...]
    isolated_ids: tuple[str, ...]

    def eigenvector(self, index: int) -> np.ndarray:
        """1-based accessor: eigenvector(1) pairs with the largest eigenvalue."""
        if not (1 <= index <= self.m):
            raise ConfigError(f"eigenvector index {index} out of range 1..{self.m}")
        return self.vectors[:, index - 1]


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    for j in range(vectors.shape[1]):
        peak = np.argmax(np.abs(vectors[:, j]))
        if vectors[peak, j] < 0:
            vectors[:, j] = -vectors[:, j]
    return vectors


def _lanczos_top(matrix: sp.csr_matrix, m: int, tol: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Top-m eigenpairs via Lanczos with full reorthogonalization.

    The start vector comes from a fixed-seed generator so repeated runs are
    bit-identical. Raises ConvergenceError when the Krylov space hits its cap
    before the residual estimates drop below `tol`.
    """
    n = matrix.shape[0]
    max_dim = min(n, max(10 * m, 300))
    rng = np.random.default_rng(seed)
    q = rng.standard_normal(n)
    q /= np.linalg.norm(q)

    basis = np.zeros((n, max_dim))
    alphas: list[float] = []
    betas: list[float] = []
    basis[:, 0] = q
    worst = np.inf
    for j in range(max_dim):
        w = matrix @ basis[:, j]
        alphas.append(float(basis[:, j] @ w))
        w -= basis[:, : j + 1] @ (basis[:, : j + 1].T @ w)
        w -= basis[:, : j + 1] @ (basis[:, : j + 1].T @ w)  # second pass for safety
        beta = float(np.linalg.norm(w))
        k = j + 1
        if k >= m:
            tri = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
            theta, s = np.linalg.eigh(tri)
            top = np.argsort(theta)[::-1][:m]
            resid = np.abs(beta * s[-1, top])
            worst = float(resid.max())
            if worst <= tol or k == n:
                vecs = basis[:, :k] @ s[:, top]
                # renormalize; reorthogonalization keeps this near 1 already
                vecs /= np.linalg.norm(vecs, axis=0)
                return theta[top], vecs
        if j + 1 < max_dim:
            if beta <= 1e-14:
                # Krylov space closed early; restart with a fresh direction
                fresh = rng.standard_normal(n)
                fresh -= basis[:, : j + 1] @ (basis[:, : j + 1].T @ fresh)
                beta_f = np.linalg.norm(fresh)
                if beta_f <= 1e-14:
                    break
                basis[:, j + 1] = fresh / beta_f
                betas.append(0.0)
            else:
                basis[:, j + 1] = w / beta
                betas.append(beta)
    raise ConvergenceError(
        f"Lanczos did not converge within {max_dim} iterations", worst_residual=worst
    )


def top_eigenpairs(lap: Laplacian, m: int, dense_cutoff: int = DENSE_CUTOFF) -> EigenBasis:
    """Eigenpairs for the m largest eigenvalues of `lap`, deterministically."""
    n = lap.n_active
    if not (1 <= m <= n):
        raise ConfigError(f"m must be in 1..{n}, got {m}")
    if n <= dense_cutoff:
        dense = lap.matrix.toarray()
        values, vectors = np.linalg.eigh(dense)
        values = values[::-1][:m].copy()
        vectors = vectors[:, ::-1][:, :m].copy()
    else:
        values, vectors = _lanczos_top(lap.matrix, m, tol=1e-10, seed=0)
    vectors = _fix_signs(vectors)
    residuals = np.linalg.norm(lap.matrix @ vectors - vectors * values, axis=0)
    return EigenBasis(
        eigenvalues=values,
        vectors=vectors,
        m=m,
        residual_tol=float(residuals.max()),
        active_ids=lap.active_ids,
        isolated_ids=lap.isolated_ids,
    )


# ---------------------------------------------------------------------------
# On-disk eigenbasis cache: versioned header followed by little-endian
# IEEE-754 doubles. Keyed by a content hash of (corpus, kind, m, irm_k).

_BASIS_MAGIC = b"DMEB"
BASIS_CACHE_VERSION = 1


def basis_cache_key(corpus_hash: str, kind: LaplacianKind, m: int, irm_k: int | None = None) -> str:
    blob = json.dumps([corpus_hash, kind.value, m, irm_k]).encode()
    return hashlib.sha256(blob).hexdigest()


def _write_block(fh, payload: bytes) -> None:
    fh.write(struct.pack("<I", len(payload)))
    fh.write(payload)


def _read_block(fh) -> bytes:
    (size,) = struct.unpack("<I", fh.read(4))
    return fh.read(size)


def save_basis(basis: EigenBasis, kind: LaplacianKind, key: str, path) -> None:
    vec = np.ascontiguousarray(basis.vectors, dtype="<f8")
    val = np.ascontiguousarray(basis.eigenvalues, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(_BASIS_MAGIC)
        fh.write(struct.pack("<I", BASIS_CACHE_VERSION))
        _write_block(fh, kind.value.encode())
        _write_block(fh, key.encode())
        fh.write(struct.pack("<III", basis.m, len(basis.active_ids), len(basis.isolated_ids)))
        fh.write(struct.pack("<d", basis.residual_tol))
        fh.write(val.tobytes())
        fh.write(vec.tobytes())
        _write_block(fh, json.dumps(list(basis.active_ids)).encode())
        _write_block(fh, json.dumps(list(basis.isolated_ids)).encode())


def load_basis(path, expected_key: str | None = None) -> tuple[EigenBasis, LaplacianKind, str]:
    with open(path, "rb") as fh:
        if fh.read(4) != _BASIS_MAGIC:
            raise ConfigError(f"{path}: not an eigenbasis cache file")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != BASIS_CACHE_VERSION:
            raise ConfigError(f"{path}: unsupported cache version {version}")
        kind = LaplacianKind(_read_block(fh).decode())
        key = _read_block(fh).decode()
        if expected_key is not None and key != expected_key:
            raise ConfigError(f"{path}: cache key mismatch")
        m, n_active, n_isolated = struct.unpack("<III", fh.read(12))
        (residual_tol,) = struct.unpack("<d", fh.read(8))
        values = np.frombuffer(fh.read(8 * m), dtype="<f8").copy()
        vectors = np.frombuffer(fh.read(8 * m * n_active), dtype="<f8").reshape(n_active, m).copy()
        active_ids = tuple(json.loads(_read_block(fh).decode()))
        isolated_ids = tuple(json.loads(_read_block(fh).decode()))
    if len(active_ids) != n_active or len(isolated_ids) != n_isolated:
        raise ConfigError(f"{path}: corrupt id blocks")
    basis = EigenBasis(
        eigenvalues=values,
        vectors=vectors,
        m=m,
        residual_tol=residual_tol,
        active_ids=active_ids,
        isolated_ids=isolated_ids,
    )
    return basis, kind, key
