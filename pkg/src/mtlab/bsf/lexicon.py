"""Aspect lexicons: seed expansion through embedding neighborhoods and
keyword sentence matching.

The proofreading step is an offline file round trip: candidates are
exported with `save_terms`, a language specialist edits the list, and the
approved file is re-imported with `load_terms`.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field

from .embeddings import Embeddings

__all__ = ["AspectLexicon", "expand_seeds", "match_sentences", "load_terms", "save_terms"]

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def _tokens(text: str) -> list[str]:
    return [t.lower() for t in _TOKEN_RE.findall(text)]


@dataclass
class AspectLexicon:
    aspect: str
    language: str
    seed_terms: list[str] = field(default_factory=list)
    candidate_terms: list[tuple[str, float]] = field(default_factory=list)
    approved_terms: list[str] = field(default_factory=list)

    def matching_terms(self) -> list[str]:
        return self.approved_terms or self.seed_terms


def expand_seeds(
    emb: Embeddings, seeds: list[str], k: int, min_sim: float = 0.0
) -> list[tuple[str, float]]:
    """Union of the top-k cosine neighbors of each seed, deduplicated by
    best similarity, seeds themselves excluded, sorted best-first."""
    present = [s for s in seeds if s in emb]
    missing = [s for s in seeds if s not in emb]
    if missing:
        warnings.warn(f"seeds missing from embedding vocabulary: {missing}", UserWarning)
    if not present:
        warnings.warn("all seeds are out of vocabulary; no candidates", UserWarning)
        return []
    best: dict[str, float] = {}
    seed_set = set(seeds)
    for seed in present:
        for word, sim in emb.neighbors(seed, k):
            if word in seed_set or sim < min_sim:
                continue
            if word not in best or sim > best[word]:
                best[word] = sim
    return sorted(best.items(), key=lambda item: (-item[1], item[0]))


def match_sentences(sentences: list[str], lexicon: AspectLexicon) -> list[int]:
    """Indices of sentences containing any lexicon term.

    Matching is case-insensitive on whole tokens; multi-word terms must
    appear as contiguous token sequences.
    """
    terms = [_tokens(term) for term in lexicon.matching_terms() if term.strip()]
    if not terms:
        raise ValueError(f"lexicon {lexicon.aspect}/{lexicon.language} has no usable terms")
    matched = []
    for i, sentence in enumerate(sentences):
        toks = _tokens(sentence)
        for term in terms:
            width = len(term)
            if any(toks[j : j + width] == term for j in range(len(toks) - width + 1)):
                matched.append(i)
                break
    return matched


def load_terms(path: str) -> list[str]:
    """One term per line; `#` starts a comment."""
    terms = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            term = line.split("#", 1)[0].strip()
            if term:
                terms.append(term)
    return terms


def save_terms(terms: list, path: str, header: str = "") -> None:
    """Writes plain terms or (term, similarity) candidate pairs."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            fh.write(f"# {header}\n")
        for term in terms:
            if isinstance(term, tuple):
                fh.write(f"{term[0]}  # cosine {term[1]:.4f}\n")
            else:
                fh.write(term + "\n")
