"""Subword tokenization: BPE training/application, case features, exact inversion.

A sentence is pre-split into units (words, digit runs, punctuation runs,
placeholders, odd whitespace).  Words are lowercased and annotated with a
case feature; mixed-case words are split at case boundaries first.  BPE
merges are learned over the unit frequency dictionary and never cross unit
boundaries.  Joiner flags record which adjacent pieces had no space between
them, so detokenization is byte-exact for every input sentence.
"""

from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import groupby

from .corpus import ParallelCorpus

__all__ = [
    "CASE_C",
    "CASE_L",
    "CASE_U",
    "CASE_N",
    "DEFAULT_MARKER",
    "PLACEHOLDER_RE",
    "format_placeholder",
    "AnnotatedToken",
    "TokenizedSentence",
    "BpeModel",
    "TokenizerError",
    "train_bpe",
    "train_bpe_texts",
    "tokenize",
    "detokenize",
    "vocabulary",
    "save_model",
    "load_model",
    "render_tokens",
    "parse_tokens",
]

CASE_C = "C"  # true case: initial capital, rest lower
CASE_L = "L"  # all lower
CASE_U = "U"  # all capitals
CASE_N = "N"  # non-alphabetic (piece kept verbatim)

DEFAULT_MARKER = "■"

# placeholder tokens pass through pre-splitting whole and are never merged
PLACEHOLDER_RE = re.compile(r"⟦[A-Z][A-Z0-9]*_\d+⟧")


def format_placeholder(code: str, index: int) -> str:
    return f"⟦{code}_{index}⟧"


class TokenizerError(ValueError):
    pass


@dataclass(frozen=True)
class AnnotatedToken:
    piece: str
    case: str
    joined_right: bool = False  # no space between this piece and the next


@dataclass(frozen=True)
class TokenizedSentence:
    tokens: tuple[AnnotatedToken, ...] = ()

    def __len__(self) -> int:
        return len(self.tokens)

    def pieces(self) -> list[str]:
        return [t.piece for t in self.tokens]


@dataclass
class BpeModel:
    """Ordered merge list plus the base alphabet; immutable after training."""

    merges: tuple[tuple[str, str], ...]
    alphabet: frozenset[str]
    mode: str = "joint"
    _ranks: dict = field(init=False, repr=False, compare=False)
    _cache: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self._ranks = {pair: i for i, pair in enumerate(self.merges)}
        self._cache = {}

    @property
    def merge_count(self) -> int:
        return len(self.merges)

    def prefix(self, k: int) -> "BpeModel":
        """Model restricted to the first k merges (training determinism makes
        this identical to retraining with merge_count=k)."""
        return BpeModel(self.merges[:k], self.alphabet, self.mode)


# ---------------------------------------------------------------------------
# pre-splitting


@dataclass(frozen=True)
class _Unit:
    text: str          # lowercased for cased words, verbatim otherwise
    case: str
    atomic: bool       # placeholders / whitespace: never BPE-split
    joined_right: bool


def _classify(fragment: str) -> tuple[str, str]:
    """Return (piece_text, case) such that restoring case is byte-exact.

    Falls back to a verbatim N unit whenever lower/upper round-tripping
    would not reproduce the original (rare Unicode casing edge cases).
    """
    if not any(c.islower() or c.isupper() for c in fragment):
        return fragment, CASE_N
    low = fragment.lower()
    if fragment == low:
        return low, CASE_L
    if low and fragment == low[0].upper() + low[1:]:
        return low, CASE_C
    if fragment == low.upper():
        return low, CASE_U
    return fragment, CASE_N


def _case_fragments(run: str) -> list[str]:
    """Split a letter run at case boundaries (WiFi -> Wi|Fi, HTTPServer -> HTTP|Server)."""
    starts = [0]
    for i in range(1, len(run)):
        if run[i].isupper() and run[i - 1].islower():
            starts.append(i)
        elif (
            run[i].islower()
            and run[i - 1].isupper()
            and i >= 2
            and run[i - 2].isupper()
        ):
            starts.append(i - 1)
    starts.append(len(run))
    # the second rule can emit a start directly after the first rule's; dedupe
    starts = sorted(set(starts))
    return [run[a:b] for a, b in zip(starts, starts[1:])]


def _chunk_units(chunk: str) -> list[_Unit]:
    """Split one whitespace-free chunk into units (all joined internally)."""
    units: list[_Unit] = []

    def emit_plain(text: str) -> None:
        cat = lambda c: "L" if c.isalpha() else ("D" if c.isdigit() else "O")
        for kind, grp in groupby(text, key=cat):
            run = "".join(grp)
            if kind == "L":
                for frag in _case_fragments(run):
                    piece, case = _classify(frag)
                    units.append(_Unit(piece, case, False, True))
            else:
                units.append(_Unit(run, CASE_N, False, True))

    pos = 0
    for m in PLACEHOLDER_RE.finditer(chunk):
        if m.start() > pos:
            emit_plain(chunk[pos : m.start()])
        units.append(_Unit(m.group(), CASE_N, True, True))
        pos = m.end()
    if pos < len(chunk):
        emit_plain(chunk[pos:])
    return units


def _presplit(sentence: str) -> list[_Unit]:
    units: list[_Unit] = []
    runs = ["".join(grp) for _, grp in groupby(sentence, key=str.isspace)]
    for i, run in enumerate(runs):
        if run[0].isspace():
            interior = 0 < i < len(runs) - 1
            if interior and run == " ":
                # a single space between chunks is the default separator
                if units:
                    units[-1] = _Unit(units[-1].text, units[-1].case, units[-1].atomic, False)
                continue
            units.append(_Unit(run, CASE_N, True, True))
        else:
            units.extend(_chunk_units(run))
    if units:
        units[-1] = _Unit(units[-1].text, units[-1].case, units[-1].atomic, False)
    return units


# ---------------------------------------------------------------------------
# training


def _unit_frequencies(texts) -> Counter:
    counts: Counter = Counter()
    for text in texts:
        for unit in _presplit(text):
            if not unit.atomic:
                counts[unit.text] += 1
    return counts


def _train_merges(unit_freqs: Counter, merge_count: int) -> tuple[list[tuple[str, str]], set[str]]:
    """Greedy merge learning with incremental pair-count maintenance.

    Pair counts are word-frequency weighted; ties break to the
    lexicographically smallest (left, right) pair.  Training stops early
    once no pair occurs at least twice.
    """
    words = [tuple(w) for w in unit_freqs]
    freqs = [unit_freqs[w] for w in unit_freqs]
    alphabet = {c for w in words for c in w}

    pair_counts: Counter = Counter()
    pair_where: defaultdict = defaultdict(set)
    for wi, word in enumerate(words):
        for pair in zip(word, word[1:]):
            pair_counts[pair] += freqs[wi]
            pair_where[pair].add(wi)

    merges: list[tuple[str, str]] = []
    for _ in range(merge_count):
        best, best_count = None, 0
        for pair, count in pair_counts.items():
            if count < 2:
                continue
            if count > best_count or (count == best_count and pair < best):
                best, best_count = pair, count
        if best is None:
            break
        merges.append(best)
        left, right = best
        merged = left + right
        for wi in list(pair_where[best]):
            old = words[wi]
            new_word = _merge_word(old, left, right, merged)
            words[wi] = new_word
            old_pairs = list(zip(old, old[1:]))
            new_pairs = list(zip(new_word, new_word[1:]))
            for pair in old_pairs:
                pair_counts[pair] -= freqs[wi]
                if pair_counts[pair] <= 0:
                    del pair_counts[pair]
            for pair in new_pairs:
                pair_counts[pair] += freqs[wi]
            new_set = set(new_pairs)
            for pair in set(old_pairs) - new_set:
                pair_where[pair].discard(wi)
            for pair in new_set:
                pair_where[pair].add(wi)
    return merges, alphabet


def _merge_word(word: tuple, left: str, right: str, merged: str) -> tuple:
    out = []
    i = 0
    while i < len(word):
        if i + 1 < len(word) and word[i] == left and word[i + 1] == right:
            out.append(merged)
            i += 2
        else:
            out.append(word[i])
            i += 1
    return tuple(out)


def train_bpe_texts(texts: list[str], merge_count: int, mode: str = "joint") -> BpeModel:
    """Train a single model over an arbitrary text collection."""
    if merge_count < 0:
        raise TokenizerError("merge_count must be non-negative")
    freqs = _unit_frequencies(texts)
    if not freqs:
        raise TokenizerError("cannot train on an empty corpus")
    merges, alphabet = _train_merges(freqs, merge_count)
    return BpeModel(tuple(merges), frozenset(alphabet), mode)


def train_bpe(corpus: ParallelCorpus, merge_count: int, mode: str = "joint"):
    """Train on a parallel corpus: one joint model, or a (source, target) pair."""
    if len(corpus) == 0:
        raise TokenizerError("cannot train on an empty corpus")
    if mode == "joint":
        return train_bpe_texts(corpus.sources() + corpus.targets(), merge_count, "joint")
    if mode == "separate":
        src = train_bpe_texts(corpus.sources(), merge_count, "separate-source")
        tgt = train_bpe_texts(corpus.targets(), merge_count, "separate-target")
        return src, tgt
    raise TokenizerError(f"unknown mode {mode!r}")


def vocabulary(model: BpeModel) -> set[str]:
    """Alphabet plus every merge result."""
    return set(model.alphabet) | {left + right for left, right in model.merges}


# ---------------------------------------------------------------------------
# application


def _encode_unit(model: BpeModel, text: str) -> tuple[str, ...]:
    """Apply merges in training order within one unit (rank-based, cached)."""
    cached = model._cache.get(text)
    if cached is not None:
        return cached
    symbols = list(text)
    ranks = model._ranks
    while len(symbols) > 1:
        best_rank, best_pair = None, None
        for pair in zip(symbols, symbols[1:]):
            rank = ranks.get(pair)
            if rank is not None and (best_rank is None or rank < best_rank):
                best_rank, best_pair = rank, pair
        if best_pair is None:
            break
        symbols = list(_merge_word(tuple(symbols), best_pair[0], best_pair[1],
                                   best_pair[0] + best_pair[1]))
    result = tuple(symbols)
    if len(model._cache) < 1_000_000:
        model._cache[text] = result
    return result


def tokenize(model: BpeModel, sentence: str) -> TokenizedSentence:
    """Segment a sentence into annotated subword pieces.

    Total: characters outside the alphabet simply pass through as
    single-character pieces.
    """
    tokens: list[AnnotatedToken] = []
    for unit in _presplit(sentence):
        if unit.atomic:
            tokens.append(AnnotatedToken(unit.text, unit.case, unit.joined_right))
            continue
        pieces = _encode_unit(model, unit.text)
        last = len(pieces) - 1
        for j, piece in enumerate(pieces):
            if unit.case == CASE_C:
                case = CASE_C if j == 0 else CASE_L
            else:
                case = unit.case
            joined = True if j < last else unit.joined_right
            tokens.append(AnnotatedToken(piece, case, joined))
    return TokenizedSentence(tuple(tokens))


def _restore(token: AnnotatedToken) -> str:
    if token.case == CASE_C and token.piece:
        return token.piece[0].upper() + token.piece[1:]
    if token.case == CASE_U:
        return token.piece.upper()
    return token.piece


def detokenize(ts: TokenizedSentence) -> str:
    """Exact inverse of tokenize: joiners collapse spaces, case features
    restore the original casing."""
    out: list[str] = []
    for i, token in enumerate(ts.tokens):
        if i > 0 and not ts.tokens[i - 1].joined_right:
            out.append(" ")
        out.append(_restore(token))
    return "".join(out)


# ---------------------------------------------------------------------------
# text renderings

_ESCAPES = [("\\", "\\\\"), (" ", "\\s"), ("\t", "\\t"), ("\n", "\\n"),
            ("\r", "\\r"), ("|", "\\p")]


def _escape(piece: str, marker: str) -> str:
    for raw, esc in _ESCAPES:
        piece = piece.replace(raw, esc)
    return piece.replace(marker, "\\m")


def _unescape(piece: str, marker: str) -> str:
    out = []
    i = 0
    back = {"\\": "\\", "s": " ", "t": "\t", "n": "\n", "r": "\r", "p": "|", "m": marker}
    while i < len(piece):
        if piece[i] == "\\" and i + 1 < len(piece) and piece[i + 1] in back:
            out.append(back[piece[i + 1]])
            i += 2
        else:
            out.append(piece[i])
            i += 1
    return "".join(out)


def render_tokens(ts: TokenizedSentence, marker: str = DEFAULT_MARKER) -> str:
    """One-line text form: `piece|CASE` items separated by single spaces.

    A spaceless gap puts the marker on the left piece's right edge, except
    that a gap before a non-alphabetic token marks that token's left edge
    instead (matching the conventional look: `wi■ fi ■,`).
    """
    items = []
    for i, token in enumerate(ts.tokens):
        lead = i > 0 and ts.tokens[i - 1].joined_right and token.case == CASE_N
        trail = token.joined_right and i + 1 < len(ts.tokens) and ts.tokens[i + 1].case != CASE_N
        body = _escape(token.piece, marker)
        items.append((marker if lead else "") + body + (marker if trail else "") + "|" + token.case)
    return " ".join(items)


def parse_tokens(text: str, marker: str = DEFAULT_MARKER) -> TokenizedSentence:
    """Inverse of render_tokens."""
    if not text:
        return TokenizedSentence()
    raw_items = text.split(" ")
    parsed = []
    for item in raw_items:
        body, sep, case = item.rpartition("|")
        if not sep or case not in (CASE_C, CASE_L, CASE_U, CASE_N):
            raise TokenizerError(f"malformed token item {item!r}")
        # escaping guarantees the raw marker never appears inside a body
        lead = body.startswith(marker)
        if lead:
            body = body[len(marker):]
        trail = body.endswith(marker)
        if trail:
            body = body[: -len(marker)]
        parsed.append((_unescape(body, marker), case, lead, trail))
    tokens = []
    for i, (piece, case, lead, trail) in enumerate(parsed):
        joined = trail or (i + 1 < len(parsed) and parsed[i + 1][2])
        tokens.append(AnnotatedToken(piece, case, joined))
    return TokenizedSentence(tuple(tokens))


# ---------------------------------------------------------------------------
# model files

_MODEL_HEADER = "bpe-v1"


def save_model(model: BpeModel, path: str) -> None:
    """Versioned header, one merge per line; alphabet appended for losslessness."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{_MODEL_HEADER} {model.mode} {model.merge_count}\n")
        for left, right in model.merges:
            fh.write(f"{left} {right}\n")
        chars = sorted(model.alphabet)
        for i in range(0, len(chars), 64):
            block = " ".join(_escape(c, DEFAULT_MARKER) for c in chars[i : i + 64])
            fh.write(f"#alphabet {block}\n")


def load_model(path: str) -> BpeModel:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if not lines or not lines[0].startswith(_MODEL_HEADER + " "):
        raise TokenizerError(f"{path}: not a {_MODEL_HEADER} model file")
    _, mode, count_text = lines[0].split(" ")
    count = int(count_text)
    merges = []
    alphabet: set[str] = set()
    for line in lines[1:]:
        if not line:
            continue
        if line.startswith("#alphabet"):
            for item in line.split(" ")[1:]:
                alphabet.add(_unescape(item, DEFAULT_MARKER))
            continue
        left, right = line.split(" ")
        merges.append((left, right))
    if len(merges) != count:
        raise TokenizerError(f"{path}: header claims {count} merges, found {len(merges)}")
    if not alphabet:
        alphabet = {c for pair in merges for sym in pair for c in sym}
    return BpeModel(tuple(merges), frozenset(alphabet), mode)
