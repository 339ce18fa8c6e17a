"""Skip-gram negative-sampling word embeddings, desk scale.

Plain numpy implementation of the classic recipe: frequent-word
subsampling, unigram^0.75 negative table, linearly decaying learning
rate.  Deterministic for a given seed.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ..rng import stream

__all__ = [
    "Embeddings",
    "EmbeddingError",
    "train_embeddings",
    "load_embeddings",
    "save_embeddings",
]

LOW_DATA_TOKENS = 1000


class EmbeddingError(ValueError):
    pass


@dataclass
class Embeddings:
    vectors: dict[str, np.ndarray]
    dim: int

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __getitem__(self, word: str) -> np.ndarray:
        return self.vectors[word]

    def words(self) -> list[str]:
        return list(self.vectors)

    def cosine(self, a: str, b: str) -> float:
        va, vb = self.vectors[a], self.vectors[b]
        na, nb = np.linalg.norm(va), np.linalg.norm(vb)
        if na == 0.0 or nb == 0.0:
            return 0.0
        return float(va @ vb / (na * nb))

    def neighbors(self, word: str, k: int) -> list[tuple[str, float]]:
        """Top-k words by cosine similarity, excluding the word itself."""
        scored = [(other, self.cosine(word, other)) for other in self.vectors if other != word]
        scored.sort(key=lambda item: (-item[1], item[0]))
        return scored[:k]


def train_embeddings(
    sentences: list[list[str]],
    dim: int = 32,
    window: int = 4,
    negatives: int = 5,
    epochs: int = 3,
    seed: int = 0,
    initial_lr: float = 0.025,
    min_count: int = 1,
    subsample_threshold: float = 1e-2,
) -> Embeddings:
    """Train skip-gram vectors with negative sampling on tokenized sentences.

    Multi-word phrases must be pre-joined into single tokens (for example
    with underscores) before training.  The subsampling threshold defaults
    far above the classic web-scale value because desk corpora have tiny
    vocabularies where every word counts as frequent.
    """
    if dim < 1 or window < 1 or epochs < 1:
        raise EmbeddingError("dim, window and epochs must all be positive")
    counts = Counter(tok for sent in sentences for tok in sent)
    total_tokens = sum(counts.values())
    if total_tokens == 0:
        raise EmbeddingError("cannot train embeddings on an empty corpus")
    if total_tokens < LOW_DATA_TOKENS:
        warnings.warn(
            f"embedding corpus has only {total_tokens} tokens; vectors will be noisy",
            UserWarning,
        )
    vocab = sorted(w for w, c in counts.items() if c >= min_count)
    index = {w: i for i, w in enumerate(vocab)}
    v = len(vocab)

    rng = stream(seed, "word2vec")
    vec_in = (rng.random((v, dim)) - 0.5) / dim
    vec_out = np.zeros((v, dim))

    # unigram^0.75 negative-sampling table
    freq = np.array([counts[w] for w in vocab], dtype=np.float64)
    noise = freq ** 0.75
    noise /= noise.sum()
    noise_cdf = np.cumsum(noise)

    # subsampling keep-probability for frequent words
    keep = np.minimum(1.0, np.sqrt(subsample_threshold / (freq / total_tokens))
                      + subsample_threshold / (freq / total_tokens))

    total_centers = max(1, total_tokens * epochs)
    processed = 0
    for epoch in range(epochs):
        for sent in sentences:
            ids = [index[t] for t in sent if t in index]
            kept = [i for i in ids if rng.random() < keep[i]]
            for pos, center in enumerate(kept):
                processed += 1
                lr = max(initial_lr * (1.0 - processed / total_centers), initial_lr * 1e-4)
                span = 1 + int(rng.integers(window))
                lo = max(0, pos - span)
                hi = min(len(kept), pos + span + 1)
                for ctx_pos in range(lo, hi):
                    if ctx_pos == pos:
                        continue
                    context = kept[ctx_pos]
                    negs = np.searchsorted(noise_cdf, rng.random(negatives))
                    negs = negs[negs != center]
                    targets = np.concatenate(([center], negs))
                    labels = np.zeros(len(targets))
                    labels[0] = 1.0
                    vin = vec_in[context]
                    vouts = vec_out[targets]
                    scores = 1.0 / (1.0 + np.exp(-vouts @ vin))
                    gradient = (scores - labels) * lr
                    vec_in[context] -= gradient @ vouts
                    vec_out[targets] -= np.outer(gradient, vin)
    return Embeddings({w: vec_in[index[w]].copy() for w in vocab}, dim)


def save_embeddings(emb: Embeddings, path: str) -> None:
    """Standard text vector format: `count dim` header, then one word per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(emb.vectors)} {emb.dim}\n")
        for word, vec in emb.vectors.items():
            fh.write(word + " " + " ".join(repr(float(x)) for x in vec) + "\n")


def load_embeddings(path: str) -> Embeddings:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise EmbeddingError(f"{path}: header must be 'count dim'")
        count, dim = int(header[0]), int(header[1])
        vectors: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise EmbeddingError(
                    f"{path}: line {lineno}: expected {dim} values, got {len(parts) - 1}"
                )
            word = parts[0]
            if word in vectors:
                warnings.warn(f"{path}: duplicate word {word!r}, last occurrence wins", UserWarning)
            vectors[word] = np.array([float(x) for x in parts[1:]])
    if len(vectors) != count:
        warnings.warn(
            f"{path}: header claims {count} words, found {len(vectors)}", UserWarning
        )
    return Embeddings(vectors, dim)
