import numpy as np
import pytest

from dimminer import build_corpus
from dimminer.pipeline import PipelineConfig, decompose, profiles_for
from dimminer.synth import make_two_factor_corpus

# Seed chosen once so the planted structure is comfortably recoverable;
# everything downstream is deterministic given it.
PLANTED_SEED = 26


@pytest.fixture(scope="session")
def planted():
    return make_two_factor_corpus(seed=PLANTED_SEED)


@pytest.fixture(scope="session")
def planted_corpus(planted):
    return build_corpus(planted.documents)


@pytest.fixture(scope="session")
def config():
    return PipelineConfig()


@pytest.fixture(scope="session")
def planted_decomposition(planted_corpus, config):
    return decompose(planted_corpus, config)


@pytest.fixture(scope="session")
def planted_basis(planted_decomposition):
    return planted_decomposition[2]


@pytest.fixture(scope="session")
def planted_graph(planted_decomposition):
    return planted_decomposition[0]


@pytest.fixture(scope="session")
def planted_profiles(planted_corpus, planted_basis, config):
    return profiles_for(planted_corpus, planted_basis, config)


def random_connected_graph(rng, n, extra_edge_prob=0.3, max_weight=9):
    """Random connected similarity matrix with integer weights.

    A random spanning tree guarantees connectivity; extra edges are added
    independently. Integer weights keep cut arithmetic exact.
    """
    s = np.zeros((n, n))
    order = rng.permutation(n)
    for k in range(1, n):
        a, b = order[k], order[rng.integers(k)]
        w = float(rng.integers(1, max_weight + 1))
        s[a, b] = s[b, a] = w
    for i in range(n):
        for j in range(i + 1, n):
            if s[i, j] == 0 and rng.random() < extra_edge_prob:
                w = float(rng.integers(1, max_weight + 1))
                s[i, j] = s[j, i] = w
    return s
