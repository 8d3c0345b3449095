"""Active spectral clustering along user-selected dimensions.

The pipeline: build binary document vectors over a pruned vocabulary,
form the dot-product similarity graph and its degree-normalized Laplacian,
take the top eigenvectors as candidate clustering dimensions, summarize
each dimension as two max-margin-ranked feature lists, let a caller (human,
lexicon, or source-domain profile) pick the dimension, and cluster every
document along it with full evaluation.
"""

from .cluster import ClusterRun, Embedding, Partition, cut_value, embed, ncut_value, two_means
from .corpus import (
    Corpus,
    RawDocument,
    SubjectivityLexicon,
    Vocabulary,
    build_corpus,
    load_lexicon,
    read_raw_documents,
    tokenize,
)
from .dimension import (
    DimensionProfile,
    FeatureList,
    MarginModel,
    build_profiles,
    mmfr,
    select_unambiguous,
    train_margin_classifier,
)
from .feedback import (
    ADAPTED,
    HUMAN,
    LEXICON,
    FeedbackSession,
    SelectionScore,
    adapt_select,
    eig_similarity,
    lexicon_select,
    load_session,
    new_session,
    record_selection,
    save_session,
)
from .metrics import MetricReport, accuracy, ari, supervised_cv
from .pipeline import PipelineConfig, decompose, profiles_for
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

__version__ = "0.1.0"

__all__ = [
    "ADAPTED",
    "ClusterRun",
    "Corpus",
    "DimensionProfile",
    "EigenBasis",
    "Embedding",
    "FeatureList",
    "FeedbackSession",
    "HUMAN",
    "LEXICON",
    "Laplacian",
    "LaplacianKind",
    "MarginModel",
    "MetricReport",
    "Partition",
    "PipelineConfig",
    "RawDocument",
    "SelectionScore",
    "SimilarityGraph",
    "SubjectivityLexicon",
    "Vocabulary",
    "accuracy",
    "adapt_select",
    "ari",
    "build_corpus",
    "build_profiles",
    "cut_value",
    "decompose",
    "eig_similarity",
    "embed",
    "irm_laplacian",
    "lexicon_select",
    "load_lexicon",
    "load_session",
    "mmfr",
    "ncut_value",
    "new_session",
    "normalized_laplacian",
    "profiles_for",
    "read_raw_documents",
    "record_selection",
    "save_session",
    "select_unambiguous",
    "similarity_matrix",
    "supervised_cv",
    "tokenize",
    "top_eigenpairs",
    "train_margin_classifier",
    "two_means",
]
