import numpy as np
import pytest
import scipy.sparse as sp

from dimminer import (
    RawDocument,
    build_corpus,
    irm_laplacian,
    normalized_laplacian,
    similarity_matrix,
    top_eigenpairs,
)
from dimminer.errors import ConfigError, DegenerateGraphError
from dimminer.spectral import (
    LaplacianKind,
    SimilarityGraph,
    basis_cache_key,
    load_basis,
    save_basis,
)
from conftest import random_connected_graph


def graph_from_dense(s):
    s = np.asarray(s, dtype=float)
    ids = tuple(f"d{i}" for i in range(s.shape[0]))
    return SimilarityGraph(ids=ids, matrix=sp.csr_matrix(s), degrees=s.sum(axis=1))


class TestSimilarityMatrix:
    def test_shared_term_counts(self):
        corpus = build_corpus(
            [
                RawDocument("x", "aa bb cc"),
                RawDocument("y", "bb cc dd"),
                RawDocument("z", "aa bb dd"),
            ],
            mode="BOAW",
        )
        g = similarity_matrix(corpus)
        s = g.matrix.toarray()
        x, y = corpus.row_of("x"), corpus.row_of("y")
        assert s[x, y] == 2.0  # shares bb, cc

    def test_diagonal_zero_and_symmetric(self):
        corpus = build_corpus(
            [RawDocument("x", "aa bb"), RawDocument("y", "aa bb"), RawDocument("z", "bb cc")],
            mode="BOAW",
        )
        g = similarity_matrix(corpus)
        s = g.matrix.toarray()
        assert np.all(np.diag(s) == 0.0)
        assert np.array_equal(s, s.T)
        assert np.array_equal(g.degrees, s.sum(axis=1))

    def test_disjoint_vocabulary_docs(self):
        corpus = build_corpus(
            [
                RawDocument("x", "aa bb"),
                RawDocument("y", "aa bb"),
                RawDocument("z", "cc dd"),
                RawDocument("w", "cc dd"),
            ],
            mode="BOAW",
        )
        s = similarity_matrix(corpus).matrix.toarray()
        assert s[0, 2] == 0.0


class TestNormalizedLaplacian:
    def test_exchange_matrix(self):
        lap = normalized_laplacian(graph_from_dense([[0, 2], [2, 0]]))
        assert np.allclose(lap.matrix.toarray(), [[0, 1], [1, 0]])
        values = np.linalg.eigvalsh(lap.matrix.toarray())
        assert np.allclose(sorted(values), [-1, 1])

    def test_isolated_documents_excluded(self):
        lap = normalized_laplacian(
            graph_from_dense([[0, 2, 0], [2, 0, 0], [0, 0, 0]])
        )
        assert len(lap.active_ids) == 2
        assert lap.isolated_ids == ("d2",)

    def test_all_isolated_rejected(self):
        with pytest.raises(DegenerateGraphError):
            normalized_laplacian(graph_from_dense(np.zeros((3, 3))))

    def test_disconnected_cliques_eigenvalue_multiplicity(self):
        # dense eigendecomposition oracle on the 4x4 block matrix
        s = np.zeros((4, 4))
        s[0, 1] = s[1, 0] = 2.0
        s[2, 3] = s[3, 2] = 3.0
        lap = normalized_laplacian(graph_from_dense(s))
        values = np.linalg.eigvalsh(lap.matrix.toarray())
        assert np.sum(np.abs(values - 1.0) < 1e-12) == 2


class TestIRMLaplacian:
    def test_equal_degrees_cancel(self):
        lap = irm_laplacian(graph_from_dense([[0, 2], [2, 0]]), k=1)
        assert lap.kind == LaplacianKind.IRM
        assert np.allclose(lap.matrix.toarray(), [[0, 1], [1, 0]])

    def test_large_k_keeps_everything(self):
        rng = np.random.default_rng(3)
        s = random_connected_graph(rng, 8)
        g = graph_from_dense(s)
        lap = irm_laplacian(g, k=7)
        d = s.sum(axis=1)
        dmax = d.max()
        expect = (s + np.diag(dmax - d)) / dmax
        assert np.allclose(lap.matrix.toarray(), expect)

    def test_mutual_knn_keep_rule(self):
        # pairs (0,1)=5, (0,2)=3, (1,2)=1: with k=1 the weight-1 pair is
        # zeroed because neither endpoint ranks the other first, while
        # (0,2) survives since 0 is 2's best neighbor.
        s = np.array([[0, 5, 3], [5, 0, 1], [3, 1, 0]], dtype=float)
        lap = irm_laplacian(graph_from_dense(s), k=1)
        d = np.array([8.0, 5.0, 3.0])  # degrees of sparsified matrix
        dmax = 8.0
        sparsified = np.array([[0, 5, 3], [5, 0, 0], [3, 0, 0]], dtype=float)
        expect = (sparsified + np.diag(dmax - d)) / dmax
        assert np.allclose(lap.matrix.toarray(), expect)

    def test_sparsified_matrix_symmetric(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            s = random_connected_graph(rng, 10)
            lap = irm_laplacian(graph_from_dense(s), k=2)
            dense = lap.matrix.toarray()
            assert np.allclose(dense, dense.T)

    def test_k_must_be_positive(self):
        with pytest.raises(ConfigError):
            irm_laplacian(graph_from_dense([[0, 1], [1, 0]]), k=0)


class TestTopEigenpairs:
    def test_exchange_matrix_pairs(self):
        lap = normalized_laplacian(graph_from_dense([[0, 2], [2, 0]]))
        basis = top_eigenpairs(lap, 2)
        assert np.allclose(basis.eigenvalues, [1.0, -1.0])
        r = 1 / np.sqrt(2)
        assert np.allclose(basis.eigenvector(1), [r, r])
        assert np.allclose(basis.eigenvector(2), [r, -r])  # sign convention

    def test_first_eigenvector_is_sqrt_degrees(self):
        rng = np.random.default_rng(5)
        s = random_connected_graph(rng, 30)
        lap = normalized_laplacian(graph_from_dense(s))
        basis = top_eigenpairs(lap, 3)
        expected = np.sqrt(s.sum(axis=1))
        expected /= np.linalg.norm(expected)
        assert np.allclose(basis.eigenvector(1), expected, atol=1e-10)
        assert abs(basis.eigenvalues[0] - 1.0) < 1e-12

    def test_disconnected_cliques_span_and_separation(self):
        # with a tied top eigenvalue any orthonormal basis of the eigenspace
        # may come back, so assert subspace membership and that the 2-D
        # embedding separates the components, not exact vectors
        s = np.zeros((4, 4))
        s[0, 1] = s[1, 0] = 2.0
        s[2, 3] = s[3, 2] = 3.0
        lap = normalized_laplacian(graph_from_dense(s))
        basis = top_eigenpairs(lap, 2)
        assert np.allclose(basis.eigenvalues, [1.0, 1.0])
        # eigenspace of eigenvalue 1 is spanned by the per-component indicators
        u1 = np.array([1.0, 1.0, 0.0, 0.0]) / np.sqrt(2)
        u2 = np.array([0.0, 0.0, 1.0, 1.0]) / np.sqrt(2)
        proj = np.outer(u1, u1) + np.outer(u2, u2)
        for i in (1, 2):
            v = basis.eigenvector(i)
            assert np.allclose(proj @ v, v, atol=1e-10)
        pts = basis.vectors
        assert np.allclose(pts[0], pts[1], atol=1e-10)
        assert np.allclose(pts[2], pts[3], atol=1e-10)
        assert not np.allclose(pts[0], pts[2], atol=1e-6)

    def test_orthonormal_and_residuals(self):
        rng = np.random.default_rng(9)
        s = random_connected_graph(rng, 40)
        lap = normalized_laplacian(graph_from_dense(s))
        basis = top_eigenpairs(lap, 5)
        gram = basis.vectors.T @ basis.vectors
        assert np.allclose(gram, np.eye(5), atol=1e-6)
        assert basis.residual_tol <= 1e-8
        dense = lap.matrix.toarray()
        for i in range(1, 6):
            v = basis.eigenvector(i)
            lam = basis.eigenvalues[i - 1]
            assert np.linalg.norm(dense @ v - lam * v) <= basis.residual_tol + 1e-15

    def test_rayleigh_quotient_bound(self):
        rng = np.random.default_rng(13)
        s = random_connected_graph(rng, 25)
        lap = normalized_laplacian(graph_from_dense(s))
        basis = top_eigenpairs(lap, 3)
        dense = lap.matrix.toarray()
        e1 = basis.eigenvector(1)
        lam2 = basis.eigenvalues[1]
        for _ in range(200):
            g = rng.standard_normal(len(e1))
            g -= (g @ e1) * e1
            g /= np.linalg.norm(g)
            assert g @ dense @ g <= lam2 + 1e-9
        e2 = basis.eigenvector(2)
        assert abs(e2 @ dense @ e2 - lam2) <= 1e-9

    def test_spectral_bound(self):
        rng = np.random.default_rng(17)
        for _ in range(5):
            s = random_connected_graph(rng, 20)
            lap = normalized_laplacian(graph_from_dense(s))
            basis = top_eigenpairs(lap, 20)
            assert np.max(np.abs(basis.eigenvalues)) <= 1.0 + 1e-9

    def test_m_out_of_range(self):
        lap = normalized_laplacian(graph_from_dense([[0, 1], [1, 0]]))
        with pytest.raises(ConfigError):
            top_eigenpairs(lap, 0)
        with pytest.raises(ConfigError):
            top_eigenpairs(lap, 3)

    def test_deterministic_bytes(self, tmp_path):
        rng = np.random.default_rng(23)
        s = random_connected_graph(rng, 15)
        lap = normalized_laplacian(graph_from_dense(s))
        key = basis_cache_key("h", LaplacianKind.NORMALIZED, 4)
        paths = []
        for run in range(2):
            basis = top_eigenpairs(lap, 4)
            p = tmp_path / f"basis{run}.eig"
            save_basis(basis, LaplacianKind.NORMALIZED, key, p)
            paths.append(p)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_lanczos_agrees_with_dense(self):
        rng = np.random.default_rng(29)
        s = random_connected_graph(rng, 60)
        lap = normalized_laplacian(graph_from_dense(s))
        dense_basis = top_eigenpairs(lap, 4)
        sparse_basis = top_eigenpairs(lap, 4, dense_cutoff=10)  # force Lanczos
        assert np.allclose(sparse_basis.eigenvalues, dense_basis.eigenvalues, atol=1e-8)
        for i in range(1, 5):
            a, b = sparse_basis.eigenvector(i), dense_basis.eigenvector(i)
            assert min(np.linalg.norm(a - b), np.linalg.norm(a + b)) < 1e-6
        assert sparse_basis.residual_tol <= 1e-8


class TestBasisCache:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(31)
        s = random_connected_graph(rng, 12)
        lap = normalized_laplacian(graph_from_dense(s))
        basis = top_eigenpairs(lap, 3)
        key = basis_cache_key("corpushash", LaplacianKind.NORMALIZED, 3)
        path = tmp_path / "basis.eig"
        save_basis(basis, LaplacianKind.NORMALIZED, key, path)
        back, kind, got_key = load_basis(path, expected_key=key)
        assert kind == LaplacianKind.NORMALIZED
        assert got_key == key
        assert np.array_equal(back.eigenvalues, basis.eigenvalues)
        assert np.array_equal(back.vectors, basis.vectors)
        assert back.active_ids == basis.active_ids
        assert back.residual_tol == basis.residual_tol

    def test_key_mismatch_rejected(self, tmp_path):
        rng = np.random.default_rng(37)
        s = random_connected_graph(rng, 8)
        lap = normalized_laplacian(graph_from_dense(s))
        basis = top_eigenpairs(lap, 2)
        path = tmp_path / "basis.eig"
        save_basis(basis, LaplacianKind.NORMALIZED, "key-a", path)
        with pytest.raises(ConfigError):
            load_basis(path, expected_key="key-b")

    def test_keys_distinguish_inputs(self):
        k1 = basis_cache_key("h", LaplacianKind.NORMALIZED, 5)
        k2 = basis_cache_key("h", LaplacianKind.IRM, 5, irm_k=15)
        k3 = basis_cache_key("h", LaplacianKind.NORMALIZED, 4)
        assert len({k1, k2, k3}) == 3
