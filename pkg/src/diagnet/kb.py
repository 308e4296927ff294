"""Knowledge base: disease/symptom/indicator catalogs and the signed weight table.

The knowledge base is a value object: every edit produces a new snapshot with a
bumped version, so concurrent readers can keep using the snapshot they hold.
Weights are exact rationals (``fractions.Fraction``); floats only appear at the
scoring boundary in the engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

DEFAULT_INDICATOR_LABELS = ("yes", "no")
MIN_INDICATORS = 2
MAX_INDICATORS = 9

SECTION_HEADERS = ("[diseases]", "[symptoms]", "[indicators]", "[weights]")


class KBError(Exception):
    """Base class for knowledge-base failures."""


class KBParseError(KBError):
    """A line of a knowledge-base document could not be parsed."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class KBValidationError(KBError):
    """The knowledge base violates structural invariants (all are reported)."""

    def __init__(self, violations: list["Violation"]):
        self.violations = list(violations)
        summary = "; ".join(v.message for v in self.violations)
        super().__init__(f"{len(self.violations)} violation(s): {summary}")


class UnknownDiseaseError(KBError):
    def __init__(self, d: int):
        super().__init__(f"unknown disease index {d}")
        self.disease_index = d


class InvalidReferenceError(KBError):
    """A weight edit referenced a missing disease, symptom, or indicator slot."""


@dataclass(frozen=True)
class Violation:
    code: str
    location: tuple[int, int, int]  # (disease, symptom, indicator), 0 = not applicable
    message: str


@dataclass(frozen=True)
class KnowledgeBase:
    """Immutable snapshot of catalogs plus the sparse signed weight table."""

    diseases: dict[int, str]
    symptoms: dict[int, str]
    indicators: dict[int, tuple[str, ...]]  # symptom -> defined labels, slot k = index k+1
    weights: dict[tuple[int, int, int], Fraction]  # (d, s, i) -> weight, omitted = 0
    version: int = 1

    def indicator_labels(self, s: int) -> tuple[str, ...]:
        return self.indicators[s]

    def has_indicator(self, s: int, i: int) -> bool:
        return s in self.indicators and 1 <= i <= len(self.indicators[s])


@dataclass(frozen=True)
class NormalizedWeightTable:
    """Per-disease weights divided by that disease's total positive weight."""

    entries: dict[tuple[int, int, int], Fraction]
    totals: dict[int, Fraction]  # disease -> total positive weight
    disease_indices: tuple[int, ...]
    indicator_slots: dict[int, int]  # symptom -> number of defined slots
    kb_version: int


def _violation_sort_key(v: Violation) -> tuple:
    return (*v.location, v.code)


def validate(kb: KnowledgeBase) -> list[Violation]:
    """Check every structural invariant; returns all violations, never raises."""
    out: list[Violation] = []

    out.extend(_validate_catalog(kb.diseases, "disease"))
    out.extend(_validate_catalog(kb.symptoms, "symptom"))

    for s, labels in sorted(kb.indicators.items()):
        if s not in kb.symptoms:
            out.append(Violation("unknown_symptom", (0, s, 0),
                                 f"indicator row for unknown symptom index {s}"))
            continue
        if not MIN_INDICATORS <= len(labels) <= MAX_INDICATORS:
            out.append(Violation("indicator_count", (0, s, 0),
                                 f"symptom {s} has {len(labels)} indicators, "
                                 f"expected {MIN_INDICATORS}..{MAX_INDICATORS}"))
        for i, label in enumerate(labels, start=1):
            if not label.strip():
                out.append(Violation("empty_indicator_label", (0, s, i),
                                     f"symptom {s} indicator {i} has an empty label"))
    for s in kb.symptoms:
        if s not in kb.indicators:
            out.append(Violation("missing_indicators", (0, s, 0),
                                 f"symptom {s} has no indicator row"))

    positive_seen: set[int] = set()
    for (d, s, i), w in sorted(kb.weights.items()):
        if d not in kb.diseases:
            out.append(Violation("unknown_disease", (d, s, i),
                                 f"weight ({d},{s},{i}) references unknown disease index {d}"))
        if s not in kb.symptoms:
            out.append(Violation("unknown_symptom", (d, s, i),
                                 f"weight ({d},{s},{i}) references unknown symptom index {s}"))
        elif not kb.has_indicator(s, i):
            out.append(Violation("undefined_indicator", (d, s, i),
                                 f"weight ({d},{s},{i}) references undefined indicator "
                                 f"slot {i} of symptom {s}"))
        if w == 0:
            out.append(Violation("zero_weight", (d, s, i),
                                 f"weight ({d},{s},{i}) stores 0; omit the entry instead"))
        elif w > 0:
            positive_seen.add(d)
    for d in sorted(kb.diseases):
        if d not in positive_seen:
            out.append(Violation("no_positive_weight", (d, 0, 0),
                                 f"no positive weight for disease {d}"))

    out.sort(key=_violation_sort_key)
    return out


def _validate_catalog(entries: dict[int, str], kind: str) -> list[Violation]:
    out: list[Violation] = []
    loc = (lambda idx: (idx, 0, 0)) if kind == "disease" else (lambda idx: (0, idx, 0))
    if not entries:
        out.append(Violation("empty_catalog", (0, 0, 0), f"{kind} catalog is empty"))
        return out
    indices = sorted(entries)
    if indices != list(range(1, len(indices) + 1)):
        out.append(Violation("noncontiguous_index", loc(indices[0]),
                             f"{kind} indices are not contiguous from 1: {indices}"))
    seen: dict[str, int] = {}
    for idx in indices:
        name = entries[idx]
        if not name.strip():
            out.append(Violation("empty_name", loc(idx), f"{kind} {idx} has an empty name"))
            continue
        if name in seen:
            out.append(Violation("duplicate_name", loc(idx),
                                 f"{kind} name {name!r} duplicates index {seen[name]}"))
        else:
            seen[name] = idx
    return out


def total_positive_weight(kb: KnowledgeBase, d: int) -> Fraction:
    """Sum of the strictly positive weights of disease d (negatives contribute 0)."""
    if d not in kb.diseases:
        raise UnknownDiseaseError(d)
    return sum((w for (dd, _, _), w in kb.weights.items() if dd == d and w > 0),
               Fraction(0))


def normalize(kb: KnowledgeBase) -> NormalizedWeightTable:
    """Divide every weight by its disease's total positive weight.

    Refuses a knowledge base that does not validate cleanly.
    """
    violations = validate(kb)
    if violations:
        raise KBValidationError(violations)
    totals = {d: total_positive_weight(kb, d) for d in kb.diseases}
    entries = {(d, s, i): w / totals[d] for (d, s, i), w in kb.weights.items()}
    return NormalizedWeightTable(
        entries=entries,
        totals=totals,
        disease_indices=tuple(sorted(kb.diseases)),
        indicator_slots={s: len(labels) for s, labels in kb.indicators.items()},
        kb_version=kb.version,
    )


def set_weight(kb: KnowledgeBase, d: int, s: int, i: int, w) -> KnowledgeBase:
    """Return a new snapshot with weight (d,s,i) upserted; w=0 deletes the entry.

    The edit is atomic: if the resulting knowledge base would not validate,
    the edit is rejected and the input snapshot stays usable as-is.
    """
    if d not in kb.diseases:
        raise InvalidReferenceError(f"unknown disease index {d}")
    if s not in kb.symptoms:
        raise InvalidReferenceError(f"unknown symptom index {s}")
    if not kb.has_indicator(s, i):
        raise InvalidReferenceError(f"undefined indicator slot {i} of symptom {s}")
    w = Fraction(w)
    weights = dict(kb.weights)
    if w == 0:
        weights.pop((d, s, i), None)
    else:
        weights[(d, s, i)] = w
    edited = KnowledgeBase(
        diseases=kb.diseases,
        symptoms=kb.symptoms,
        indicators=kb.indicators,
        weights=weights,
        version=kb.version + 1,
    )
    violations = validate(edited)
    if violations:
        raise KBValidationError(violations)
    return edited


def data_equal(a: KnowledgeBase, b: KnowledgeBase) -> bool:
    """Equality of catalog and weight content, ignoring the snapshot version."""
    return (a.diseases == b.diseases and a.symptoms == b.symptoms
            and a.indicators == b.indicators and a.weights == b.weights)


def load_knowledge_base(text: str) -> KnowledgeBase:
    """Parse a knowledge-base document and validate it.

    Raises KBParseError (with line number) on malformed lines and
    KBValidationError listing every violation when the data is inconsistent.
    """
    diseases: dict[int, str] = {}
    symptoms: dict[int, str] = {}
    indicators: dict[int, tuple[str, ...]] = {}
    weights: dict[tuple[int, int, int], Fraction] = {}
    duplicates: list[Violation] = []

    section = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if line not in SECTION_HEADERS:
                raise KBParseError(line_no, f"unknown section header {line!r}")
            section = line
            continue
        if section is None:
            raise KBParseError(line_no, "content before the first section header")
        if section == "[diseases]":
            idx, name = _parse_catalog_line(line_no, line)
            if idx in diseases:
                duplicates.append(Violation("duplicate_entry", (idx, 0, 0),
                                            f"line {line_no}: duplicate disease index {idx}"))
            diseases[idx] = name
        elif section == "[symptoms]":
            idx, name = _parse_catalog_line(line_no, line)
            if idx in symptoms:
                duplicates.append(Violation("duplicate_entry", (0, idx, 0),
                                            f"line {line_no}: duplicate symptom index {idx}"))
            symptoms[idx] = name
        elif section == "[indicators]":
            parts = [p.strip() for p in line.split("|")]
            if len(parts) < 2:
                raise KBParseError(line_no, "indicator line needs <symptom>|<label>|...")
            idx = _parse_index(line_no, parts[0])
            if idx in indicators:
                duplicates.append(Violation("duplicate_entry", (0, idx, 0),
                                            f"line {line_no}: duplicate indicator row for "
                                            f"symptom {idx}"))
            indicators[idx] = tuple(parts[1:])
        else:  # [weights]
            parts = line.split(" ")
            if len(parts) != 4:
                raise KBParseError(line_no, "weight line needs '<d> <s> <i> <w>'")
            d = _parse_index(line_no, parts[0])
            s = _parse_index(line_no, parts[1])
            i = _parse_index(line_no, parts[2])
            try:
                w = Fraction(parts[3])
            except (ValueError, ZeroDivisionError):
                raise KBParseError(line_no, f"bad weight value {parts[3]!r}") from None
            if (d, s, i) in weights:
                duplicates.append(Violation("duplicate_entry", (d, s, i),
                                            f"line {line_no}: duplicate weight entry "
                                            f"({d},{s},{i})"))
            weights[(d, s, i)] = w

    for idx in symptoms:
        indicators.setdefault(idx, DEFAULT_INDICATOR_LABELS)

    kb = KnowledgeBase(diseases=diseases, symptoms=symptoms,
                       indicators=indicators, weights=weights)
    violations = sorted(duplicates + validate(kb), key=_violation_sort_key)
    if violations:
        raise KBValidationError(violations)
    return kb


def _parse_catalog_line(line_no: int, line: str) -> tuple[int, str]:
    idx_str, sep, name = line.partition("|")
    if not sep or not name.strip():
        raise KBParseError(line_no, "catalog line needs '<index>|<name>'")
    return _parse_index(line_no, idx_str.strip()), name.strip()


def _parse_index(line_no: int, token: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise KBParseError(line_no, f"expected an integer index, got {token!r}") from None
    if value < 1:
        raise KBParseError(line_no, f"indices start at 1, got {value}")
    return value


def export_knowledge_base(kb: KnowledgeBase) -> str:
    """Serialize to the text format; load_knowledge_base round-trips the content."""
    violations = validate(kb)
    if violations:
        raise KBValidationError(violations)
    lines = ["[diseases]"]
    lines += [f"{idx}|{kb.diseases[idx]}" for idx in sorted(kb.diseases)]
    lines += ["", "[symptoms]"]
    lines += [f"{idx}|{kb.symptoms[idx]}" for idx in sorted(kb.symptoms)]
    lines += ["", "[indicators]"]
    for idx in sorted(kb.indicators):
        labels = kb.indicators[idx]
        if labels != DEFAULT_INDICATOR_LABELS:
            lines.append(f"{idx}|" + "|".join(labels))
    lines += ["", "[weights]"]
    lines += [f"{d} {s} {i} {kb.weights[(d, s, i)]}"
              for (d, s, i) in sorted(kb.weights)]
    return "\n".join(lines) + "\n"


def load_kb_file(path) -> KnowledgeBase:
    with open(path, "r", encoding="utf-8") as fh:
        return load_knowledge_base(fh.read())


def default_kb_text() -> str:
    return resources.files("diagnet").joinpath("data/default.kbtxt").read_text("utf-8")


def default_kb() -> KnowledgeBase:
    """The knowledge base shipped with the package (15 diseases, 46 symptoms)."""
    return load_knowledge_base(default_kb_text())
