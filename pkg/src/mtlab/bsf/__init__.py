"""Business sensitivity framework: lexicon expansion via embedding
neighborhoods, keyword sentence matching, bag-of-ngrams classifiers, and
the cross-language disagreement report."""

from .embeddings import (
    Embeddings,
    EmbeddingError,
    train_embeddings,
    load_embeddings,
    save_embeddings,
)
from .lexicon import (
    AspectLexicon,
    expand_seeds,
    match_sentences,
    load_terms,
    save_terms,
)
from .classifier import (
    ClassifierSpec,
    HashedLinearClassifier,
    ClassifierError,
    EvaluationMetrics,
    train_classifier,
    evaluate_classifier,
    save_classifier,
    load_classifier,
)
from .report import BsfReport, cross_language_report

__all__ = [
    "Embeddings",
    "EmbeddingError",
    "train_embeddings",
    "load_embeddings",
    "save_embeddings",
    "AspectLexicon",
    "expand_seeds",
    "match_sentences",
    "load_terms",
    "save_terms",
    "ClassifierSpec",
    "HashedLinearClassifier",
    "ClassifierError",
    "EvaluationMetrics",
    "train_classifier",
    "evaluate_classifier",
    "save_classifier",
    "load_classifier",
    "BsfReport",
    "cross_language_report",
]
