"""Multiclass logistic regression over hashed unigram+bigram counts.

Features are hashed with FNV-1a 64 (fixed and platform independent)
truncated to `bits` bits; collisions are tolerated.  Training is plain
softmax SGD with a small L2 term applied to the touched columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..rng import stream
from .lexicon import _tokens

__all__ = [
    "ClassifierSpec",
    "HashedLinearClassifier",
    "ClassifierError",
    "EvaluationMetrics",
    "fnv1a64",
    "train_classifier",
    "evaluate_classifier",
    "save_classifier",
    "load_classifier",
]

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


class ClassifierError(ValueError):
    pass


def fnv1a64(text: str) -> int:
    value = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        value ^= byte
        value = (value * _FNV_PRIME) & _MASK64
    return value


@dataclass(frozen=True)
class ClassifierSpec:
    bits: int = 18
    use_bigrams: bool = True
    lr: float = 0.5
    epochs: int = 12
    l2: float = 1e-6


def hashed_features(text: str, bits: int, use_bigrams: bool = True) -> dict[int, float]:
    """Sparse {slot: count} vector; unigram and bigram key spaces are tagged
    so they never alias each other directly."""
    size = 1 << bits
    toks = _tokens(text)
    counts: dict[int, float] = {}
    for tok in toks:
        slot = fnv1a64("u:" + tok) % size
        counts[slot] = counts.get(slot, 0.0) + 1.0
    if use_bigrams:
        for a, b in zip(toks, toks[1:]):
            slot = fnv1a64("b:" + a + " " + b) % size
            counts[slot] = counts.get(slot, 0.0) + 1.0
    return counts


@dataclass
class HashedLinearClassifier:
    labels: tuple[str, ...]
    bits: int
    weights: np.ndarray          # (n_labels, 2**bits)
    bias: np.ndarray             # (n_labels,)
    spec: ClassifierSpec

    def scores(self, text: str) -> np.ndarray:
        feats = hashed_features(text, self.bits, self.spec.use_bigrams)
        if not feats:
            return self.bias.copy()
        idx = np.fromiter(feats.keys(), dtype=np.int64)
        cnt = np.fromiter(feats.values(), dtype=np.float64)
        return self.weights[:, idx] @ cnt + self.bias

    def predict(self, text: str) -> str:
        return self.labels[int(np.argmax(self.scores(text)))]

    def predict_many(self, texts: list[str]) -> list[str]:
        return [self.predict(t) for t in texts]


def train_classifier(
    labeled: list[tuple[str, str]],
    spec: ClassifierSpec = ClassifierSpec(),
    seed: int = 0,
) -> HashedLinearClassifier:
    """Softmax SGD over hashed n-gram counts; deterministic per seed."""
    labels = tuple(sorted({label for _, label in labeled}))
    if len(labels) < 2:
        raise ClassifierError(f"need at least 2 distinct labels, got {labels}")
    label_index = {label: i for i, label in enumerate(labels)}
    size = 1 << spec.bits
    weights = np.zeros((len(labels), size))
    bias = np.zeros(len(labels))
    features = [hashed_features(text, spec.bits, spec.use_bigrams) for text, _ in labeled]
    targets = [label_index[label] for _, label in labeled]

    for epoch in range(spec.epochs):
        order = stream(seed, f"clf-epoch-{epoch}").permutation(len(labeled))
        for i in order:
            feats = features[i]
            if feats:
                idx = np.fromiter(feats.keys(), dtype=np.int64)
                cnt = np.fromiter(feats.values(), dtype=np.float64)
                scores = weights[:, idx] @ cnt + bias
            else:
                idx = cnt = None
                scores = bias.copy()
            scores -= scores.max()
            prob = np.exp(scores)
            prob /= prob.sum()
            prob[targets[i]] -= 1.0
            if idx is not None:
                weights[:, idx] -= spec.lr * (np.outer(prob, cnt) + spec.l2 * weights[:, idx])
            bias -= spec.lr * prob
    return HashedLinearClassifier(labels, spec.bits, weights, bias, spec)


@dataclass(frozen=True)
class EvaluationMetrics:
    per_label: dict
    accuracy: float
    macro_f1: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    n: int

    def to_text(self) -> str:
        lines = [f"{'label':<20} {'precision':>9} {'recall':>9} {'f1':>9} {'support':>8}"]
        for label, m in self.per_label.items():
            lines.append(
                f"{label:<20} {m['precision']:>9.2f} {m['recall']:>9.2f} "
                f"{m['f1']:>9.2f} {m['support']:>8d}"
            )
        lines.append(
            f"{'average (weighted)':<20} {self.weighted_precision:>9.2f} "
            f"{self.weighted_recall:>9.2f} {self.weighted_f1:>9.2f} {self.n:>8d}"
        )
        return "\n".join(lines)


def evaluate_classifier(
    clf: HashedLinearClassifier, heldout: list[tuple[str, str]]
) -> EvaluationMetrics:
    """One-vs-rest precision/recall/F1 per label, plus macro and weighted means."""
    if not heldout:
        raise ClassifierError("held-out set is empty")
    predictions = [clf.predict(text) for text, _ in heldout]
    truths = [label for _, label in heldout]
    per_label = {}
    f1s = []
    for label in clf.labels:
        tp = sum(1 for p, t in zip(predictions, truths) if p == label and t == label)
        fp = sum(1 for p, t in zip(predictions, truths) if p == label and t != label)
        fn = sum(1 for p, t in zip(predictions, truths) if p != label and t == label)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_label[label] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": tp + fn,
        }
        f1s.append(f1)
    n = len(heldout)
    accuracy = sum(1 for p, t in zip(predictions, truths) if p == t) / n
    weights = [per_label[label]["support"] / n for label in clf.labels]
    weighted = lambda key: sum(per_label[l][key] * w for l, w in zip(clf.labels, weights))
    return EvaluationMetrics(
        per_label,
        accuracy,
        sum(f1s) / len(f1s),
        weighted("precision"),
        weighted("recall"),
        weighted("f1"),
        n,
    )


_CLF_HEADER = "bsfclf-v1"


def save_classifier(clf: HashedLinearClassifier, path: str) -> None:
    """Auditability-first text dump: labels, bias, then nonzero weight columns."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{_CLF_HEADER} {clf.bits} {len(clf.labels)} "
                 f"{int(clf.spec.use_bigrams)}\n")
        fh.write("\t".join(clf.labels) + "\n")
        fh.write("bias " + " ".join(repr(float(x)) for x in clf.bias) + "\n")
        nonzero = np.nonzero(np.any(clf.weights != 0.0, axis=0))[0]
        for slot in nonzero:
            fh.write(f"{slot} " + " ".join(repr(float(x)) for x in clf.weights[:, slot]) + "\n")


def load_classifier(path: str) -> HashedLinearClassifier:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if not header or header[0] != _CLF_HEADER:
            raise ClassifierError(f"{path}: not a {_CLF_HEADER} file")
        bits, n_labels, use_bigrams = int(header[1]), int(header[2]), bool(int(header[3]))
        labels = tuple(fh.readline().rstrip("\n").split("\t"))
        if len(labels) != n_labels:
            raise ClassifierError(f"{path}: label count mismatch")
        bias_line = fh.readline().split()
        bias = np.array([float(x) for x in bias_line[1:]])
        weights = np.zeros((n_labels, 1 << bits))
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            weights[:, int(parts[0])] = [float(x) for x in parts[1:]]
    spec = ClassifierSpec(bits=bits, use_bigrams=use_bigrams)
    return HashedLinearClassifier(labels, bits, weights, bias, spec)
