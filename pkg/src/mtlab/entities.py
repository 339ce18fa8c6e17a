"""Template-based entity handling: mismatch scanning, masking, locale-aware unmasking.

Entities (distances, durations, clock times, dates) are recognized by
per-language regex templates, replaced by indexed placeholders before
translation, and substituted back afterwards with the value rendered in
the target locale.  A corpus scan reports source/target count mismatches
to drive the template refinement loop.
"""

from __future__ import annotations

import json
import re
import warnings
from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .corpus import ParallelCorpus
from .tokenizer import PLACEHOLDER_RE, format_placeholder

__all__ = [
    "EntityTemplate",
    "PlaceholderEntry",
    "PlaceholderMap",
    "LocaleFormat",
    "MismatchReport",
    "EntityError",
    "TemplateError",
    "DanglingPlaceholderError",
    "EntityWarning",
    "Distance",
    "Duration",
    "TimeOfDay",
    "DateValue",
    "KM_PER_MILE",
    "scan_mismatches",
    "mask",
    "unmask",
    "validate_entity_translation",
    "starter_templates",
    "load_templates",
    "save_templates",
]

KM_PER_MILE = Decimal("1.609344")

TYPE_CODES = {"distance": "DIST", "duration": "DUR", "time": "TIME", "date": "DATE"}


class EntityError(ValueError):
    pass


class TemplateError(EntityError):
    pass


class DanglingPlaceholderError(EntityError):
    pass


class EntityWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# normalized values


@dataclass(frozen=True)
class Distance:
    magnitude: Decimal
    unit: str  # m | km | mi

    def meters(self) -> float:
        factor = {"m": Decimal(1), "km": Decimal(1000), "mi": KM_PER_MILE * 1000}[self.unit]
        return float(self.magnitude * factor)


@dataclass(frozen=True)
class Duration:
    minutes: int


@dataclass(frozen=True)
class TimeOfDay:
    minutes: int  # since midnight


@dataclass(frozen=True)
class DateValue:
    year: int
    month: int
    day: int


def _values_comparable(a, b, rel_tol: float) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Distance):
        am, bm = a.meters(), b.meters()
        return abs(am - bm) <= rel_tol * max(abs(am), abs(bm), 1e-12)
    return a == b


# ---------------------------------------------------------------------------
# templates


@dataclass
class EntityTemplate:
    entity_type: str
    language: str
    pattern: str
    parser: object = None  # callable(str) -> value; default chosen by (type, language)
    regex: re.Pattern = field(init=False, repr=False)

    def __post_init__(self):
        try:
            self.regex = re.compile(self.pattern, re.IGNORECASE)
        except re.error as exc:
            raise TemplateError(
                f"template {self.entity_type}/{self.language}: bad pattern {self.pattern!r}: {exc}"
            ) from None
        if self.parser is None:
            self.parser = _default_parser(self.entity_type, self.language)

    def parse(self, text: str):
        return self.parser(text)


_EN_MONTHS = {m.lower(): i + 1 for i, m in enumerate(
    ["January", "February", "March", "April", "May", "June", "July",
     "August", "September", "October", "November", "December"])}
_DE_MONTHS = {m.lower(): i + 1 for i, m in enumerate(
    ["Januar", "Februar", "März", "April", "Mai", "Juni", "Juli",
     "August", "September", "Oktober", "November", "Dezember"])}

_NUM_RE = re.compile(r"\d+(?:[.,]\d+)?")


def _parse_number(text: str, language: str) -> Decimal:
    m = _NUM_RE.search(text)
    if not m:
        raise EntityError(f"no number in entity text {text!r}")
    num = m.group()
    if language == "de":
        num = num.replace(",", ".")
    else:
        num = num.replace(",", "")  # thousands separator
    return Decimal(num)


def _parse_distance(text: str, language: str) -> Distance:
    low = text.lower()
    if "km" in low or "kilomet" in low:
        unit = "km"
    elif "mi" in low and "min" not in low or "meile" in low:
        unit = "mi"
    else:
        unit = "m"
    return Distance(_parse_number(text, language), unit)


def _parse_duration(text: str, language: str) -> Duration:
    low = text.lower()
    hours = any(k in low for k in ("hour", "stunde", "stündig"))
    n = _parse_number(text, language)
    return Duration(int(n * 60) if hours else int(n))


def _parse_time(text: str, language: str) -> TimeOfDay:
    low = text.lower().strip()
    m = re.search(r"(\d{1,2})(?::(\d{2}))?", low)
    if not m:
        raise EntityError(f"unparseable time {text!r}")
    hour, minute = int(m.group(1)), int(m.group(2) or 0)
    if re.search(r"\dp|p\.?\s?m\.?", low) and hour != 12:
        hour += 12
    elif re.search(r"\da|a\.?\s?m\.?", low) and hour == 12:
        hour = 0
    return TimeOfDay((hour % 24) * 60 + minute)


def _parse_date(text: str, language: str) -> DateValue:
    months = _DE_MONTHS if language == "de" else _EN_MONTHS
    low = text.lower().strip()
    iso = re.fullmatch(r"(\d{4})-(\d{2})-(\d{2})", low)
    if iso:
        return DateValue(int(iso.group(1)), int(iso.group(2)), int(iso.group(3)))
    for name, number in months.items():
        if name in low:
            nums = re.findall(r"\d+", low)
            if len(nums) >= 2:
                day, year = int(nums[0]), int(nums[-1])
                return DateValue(year, number, day)
    numeric = re.fullmatch(r"(\d{1,2})[./](\d{1,2})[./](\d{4})", low)
    if numeric:
        a, b, year = int(numeric.group(1)), int(numeric.group(2)), int(numeric.group(3))
        if language == "de":
            return DateValue(year, b, a)   # DD.MM.YYYY
        return DateValue(year, a, b)       # MM/DD/YYYY
    raise EntityError(f"unparseable date {text!r}")


def _default_parser(entity_type: str, language: str):
    table = {
        "distance": _parse_distance,
        "duration": _parse_duration,
        "time": _parse_time,
        "date": _parse_date,
    }
    fn = table.get(entity_type)
    if fn is None:
        return lambda text: text  # unknown types normalize to their surface form
    return lambda text: fn(text, language)


_EN_MONTH_ALT = "|".join(m.capitalize() for m in _EN_MONTHS)
_DE_MONTH_ALT = "|".join(("März" if m == "märz" else m.capitalize()) for m in _DE_MONTHS)

_STARTER_PATTERNS = {
    "en": {
        "distance": r"\b\d+(?:\.\d+)?\s*(?:kilometers?|kilometres?|km|meters?|metres?|miles?|mi|m)\b",
        "duration": r"\b\d+[-\s]?(?:minutes?|min|hours?)\b",
        "time": r"\b\d{1,2}:\d{2}\s?(?:[ap]\.?m\.?)?\b|\b\d{1,2}\s?[ap]\.?m\.?(?=\W|$)",
        "date": (r"\b(?:" + _EN_MONTH_ALT + r")\s+\d{1,2},?\s+\d{4}\b"
                 r"|\b\d{1,2}\s+(?:" + _EN_MONTH_ALT + r")\s+\d{4}\b"
                 r"|\b\d{4}-\d{2}-\d{2}\b|\b\d{1,2}/\d{1,2}/\d{4}\b"),
    },
    "de": {
        "distance": r"\b\d+(?:,\d+)?\s*(?:Kilometern?|km|Metern?|Meilen?|m)\b",
        "duration": r"\b\d+[-\s]?(?:Minuten?|minütige[nrms]?|Min\.?|Stunden?|stündige[nrms]?)\b",
        "time": r"\b\d{1,2}:\d{2}(?:\s?Uhr)?\b|\b\d{1,2}\s?Uhr\b",
        "date": (r"\b\d{1,2}\.\s?(?:" + _DE_MONTH_ALT + r")\s+\d{4}\b"
                 r"|\b\d{1,2}\.\d{1,2}\.\d{4}\b|\b\d{4}-\d{2}-\d{2}\b"),
    },
}


def starter_templates(language: str) -> list[EntityTemplate]:
    """Shipped starting point for the refinement loop (English and German)."""
    try:
        patterns = _STARTER_PATTERNS[language]
    except KeyError:
        raise TemplateError(f"no starter templates for language {language!r}") from None
    return [EntityTemplate(t, language, p) for t, p in patterns.items()]


def load_templates(path: str) -> list[EntityTemplate]:
    """One record per line: type <tab> lang <tab> pattern; '#' comments."""
    templates = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise TemplateError(f"{path}: line {i}: expected 3 tab-separated fields")
            templates.append(EntityTemplate(parts[0], parts[1], parts[2]))
    return templates


def save_templates(templates: list[EntityTemplate], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for t in templates:
            fh.write(f"{t.entity_type}\t{t.language}\t{t.pattern}\n")


# ---------------------------------------------------------------------------
# matching


@dataclass(frozen=True)
class EntityMatch:
    start: int
    end: int
    text: str
    entity_type: str
    value: object


def find_entities(sentence: str, templates: list[EntityTemplate]) -> list[EntityMatch]:
    """Non-overlapping matches, leftmost-longest; earlier template wins ties.

    Spans inside existing placeholders are never matched, which makes
    masking idempotent.
    """
    forbidden = [(m.start(), m.end()) for m in PLACEHOLDER_RE.finditer(sentence)]
    candidates = []
    for t_index, template in enumerate(templates):
        for m in template.regex.finditer(sentence):
            if any(m.start() < fe and fs < m.end() for fs, fe in forbidden):
                continue
            candidates.append((m.start(), -(m.end() - m.start()), t_index, m.end(), template))
    candidates.sort(key=lambda c: c[:3])
    picked: list[EntityMatch] = []
    cursor = 0
    for start, neg_len, t_index, end, template in candidates:
        if start < cursor:
            continue
        text = sentence[start:end]
        picked.append(EntityMatch(start, end, text, template.entity_type, template.parse(text)))
        cursor = end
    return picked


# ---------------------------------------------------------------------------
# masking / unmasking


@dataclass(frozen=True)
class PlaceholderEntry:
    index: int
    entity_type: str
    original_text: str
    value: object


@dataclass(frozen=True)
class PlaceholderMap:
    masked_sentence: str
    entries: tuple[PlaceholderEntry, ...]
    source_language: str


@dataclass(frozen=True)
class LocaleFormat:
    language: str
    decimal_separator: str = "."
    time_style: str = "24h"            # "24h" | "12h"
    date_pattern: str = "YYYY-MM-DD"   # tokens: YYYY MM DD M D
    unit_policy: str = "keep"          # "keep" | "to_km" | "to_mi"

    def __post_init__(self):
        if self.decimal_separator not in (".", ","):
            raise EntityError(f"decimal separator must be '.' or ',', got {self.decimal_separator!r}")


EN_LOCALE = LocaleFormat("en", ".", "12h", "MM/DD/YYYY", "keep")
DE_LOCALE = LocaleFormat("de", ",", "24h", "DD.MM.YYYY", "keep")


def mask(sentence: str, templates: list[EntityTemplate]) -> PlaceholderMap:
    """Replace recognized entities with indexed `⟦TYPE_i⟧` placeholders."""
    matches = find_entities(sentence, templates)
    out = []
    entries = []
    cursor = 0
    for i, m in enumerate(matches):
        code = TYPE_CODES.get(m.entity_type, m.entity_type.upper())
        out.append(sentence[cursor : m.start])
        out.append(format_placeholder(code, i))
        entries.append(PlaceholderEntry(i, m.entity_type, m.text, m.value))
        cursor = m.end
    out.append(sentence[cursor:])
    language = templates[0].language if templates else ""
    return PlaceholderMap("".join(out), tuple(entries), language)


def _format_number(mag: Decimal, separator: str) -> str:
    return str(mag).replace(".", separator)


def _render_value(entry: PlaceholderEntry, locale: LocaleFormat) -> str:
    value = entry.value
    if isinstance(value, Distance):
        mag, unit = value.magnitude, value.unit
        if locale.unit_policy == "to_km" and unit == "mi":
            mag = (mag * KM_PER_MILE).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)
            unit = "km"
        elif locale.unit_policy == "to_mi" and unit == "km":
            mag = (mag / KM_PER_MILE).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)
            unit = "mi"
        return f"{_format_number(mag, locale.decimal_separator)} {unit}"
    if isinstance(value, Duration):
        return f"{value.minutes} min"
    if isinstance(value, TimeOfDay):
        hour, minute = divmod(value.minutes, 60)
        if locale.time_style == "12h":
            suffix = "am" if hour < 12 else "pm"
            display = hour % 12 or 12
            return f"{display}:{minute:02d} {suffix}"
        return f"{hour:02d}:{minute:02d}"
    if isinstance(value, DateValue):
        out = locale.date_pattern
        for token, rendered in [("YYYY", f"{value.year:04d}"), ("MM", f"{value.month:02d}"),
                                ("DD", f"{value.day:02d}"), ("M", str(value.month)),
                                ("D", str(value.day))]:
            out = out.replace(token, rendered)
        return out
    return str(value)


def unmask(translated: str, pmap: PlaceholderMap, locale: LocaleFormat) -> str:
    """Substitute placeholders back, rendering values for the target locale.

    With the source locale the original surface forms are restored
    verbatim, making mask -> unmask a byte-exact round trip.
    """
    by_index = {e.index: e for e in pmap.entries}
    seen: Counter = Counter()

    def substitute(m: re.Match) -> str:
        index = int(m.group().rstrip("⟧").rpartition("_")[2])
        entry = by_index.get(index)
        if entry is None:
            raise DanglingPlaceholderError(
                f"placeholder {m.group()} has no entry in the map (indices "
                f"{sorted(by_index)})"
            )
        seen[index] += 1
        if locale.language == pmap.source_language:
            return entry.original_text
        return _render_value(entry, locale)

    result = PLACEHOLDER_RE.sub(substitute, translated)
    lost = sorted(set(by_index) - set(seen))
    if lost:
        warnings.warn(f"placeholders lost by translation: indices {lost}", EntityWarning)
    duplicated = sorted(i for i, n in seen.items() if n > 1)
    if duplicated:
        warnings.warn(f"placeholders duplicated by translation: indices {duplicated}", EntityWarning)
    return result


# ---------------------------------------------------------------------------
# corpus scan & validation


@dataclass(frozen=True)
class MismatchReport:
    mismatch_counts: dict
    sample_ids: dict
    unmatched: dict           # language -> {surface: count}
    total_unmatched: int
    pair_count: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "pair_count": self.pair_count,
                "mismatch_counts": self.mismatch_counts,
                "sample_ids": self.sample_ids,
                "unmatched": {lang: dict(table) for lang, table in self.unmatched.items()},
                "total_unmatched": self.total_unmatched,
            },
            ensure_ascii=False,
        )

    def to_text(self) -> str:
        lines = [f"pairs scanned: {self.pair_count}"]
        for etype in sorted(self.mismatch_counts):
            ids = ", ".join(str(i) for i in self.sample_ids[etype][:10])
            lines.append(f"{etype:<12} mismatched pairs: {self.mismatch_counts[etype]:<6} sample ids: {ids}")
        for lang in sorted(self.unmatched):
            lines.append(f"-- most common unmatched surfaces [{lang}] --")
            for surface, count in Counter(self.unmatched[lang]).most_common(20):
                lines.append(f"{count:>6}  {surface}")
        return "\n".join(lines)


def scan_mismatches(
    corpus: ParallelCorpus,
    templates_src: list[EntityTemplate],
    templates_tgt: list[EntityTemplate],
    max_samples: int = 50,
) -> MismatchReport:
    """Count pairs whose per-type entity counts differ between the sides.

    For mismatched pairs, surfaces that cannot be paired with an
    equal-valued surface on the other side are tallied per language; the
    resulting frequency table is what the refinement loop proofreads.
    """
    if not templates_src or not templates_tgt:
        raise TemplateError("template lists must be non-empty for both sides")
    types = sorted({t.entity_type for t in templates_src} | {t.entity_type for t in templates_tgt})
    mismatch_counts = {t: 0 for t in types}
    sample_ids = {t: [] for t in types}
    src_lang = templates_src[0].language or "src"
    tgt_lang = templates_tgt[0].language or "tgt"
    if tgt_lang == src_lang:
        tgt_lang += "-tgt"
    unmatched = {src_lang: Counter(), tgt_lang: Counter()}
    total = 0
    for pair in corpus:
        src_matches = find_entities(pair.source, templates_src)
        tgt_matches = find_entities(pair.target, templates_tgt)
        for etype in types:
            src_here = [m for m in src_matches if m.entity_type == etype]
            tgt_here = [m for m in tgt_matches if m.entity_type == etype]
            if len(src_here) == len(tgt_here):
                continue
            mismatch_counts[etype] += 1
            if len(sample_ids[etype]) < max_samples:
                sample_ids[etype].append(pair.id)
            remaining = list(tgt_here)
            for sm in src_here:
                hit = next((tm for tm in remaining
                            if _values_comparable(sm.value, tm.value, 1e-9)), None)
                if hit is not None:
                    remaining.remove(hit)
                else:
                    unmatched[src_lang][sm.text] += 1
                    total += 1
            for tm in remaining:
                unmatched[tgt_lang][tm.text] += 1
                total += 1
    return MismatchReport(mismatch_counts, sample_ids,
                          {k: dict(v) for k, v in unmatched.items()}, total, len(corpus))


@dataclass(frozen=True)
class EntityValidation:
    scores: tuple[int, ...]
    accuracy: float


def validate_entity_translation(
    pairs: list[tuple[str, str]],
    templates_src: list[EntityTemplate],
    templates_tgt: list[EntityTemplate],
    rel_tolerance: float = 0.005,
) -> EntityValidation:
    """Binary per-sentence scores: 1 iff the normalized entity values agree.

    Distances compare in meters (so unit conversions count as correct
    within the relative tolerance); other types compare exactly.
    """
    scores = []
    for i, (source, output) in enumerate(pairs):
        src_matches = find_entities(source, templates_src)
        if not src_matches:
            raise EntityError(f"pair {i}: source contains no audited entity")
        tgt_matches = find_entities(output, templates_tgt)
        remaining = list(tgt_matches)
        ok = True
        for sm in src_matches:
            hit = next((tm for tm in remaining
                        if _values_comparable(sm.value, tm.value, rel_tolerance)), None)
            if hit is None:
                ok = False
                break
            remaining.remove(hit)
        scores.append(1 if ok and not remaining else 0)
    accuracy = sum(scores) / len(scores) if scores else 0.0
    return EntityValidation(tuple(scores), accuracy)
