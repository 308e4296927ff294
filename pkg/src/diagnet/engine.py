"""Scoring engine: agreement, likelihood, deviation statistics, diagnosis selection.

All scoring is an inner product of normalized weights with a binary response
matrix, carried out in exact rational arithmetic. Floats appear only in the
deviation statistics (square root) and in serialized payloads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .kb import KnowledgeBase, NormalizedWeightTable, normalize

# Deviation statistics use the sample standard deviation (N-1 denominator).
# The calibration tests against the shipped knowledge base pin this choice;
# see tests/test_acceptance.py.
VARIANCE_DDOF = 1

# Likelihood is undefined when the total excitation is at or below this bound.
LIKELIHOOD_EPSILON = Fraction(1, 10**9)

# Below this sigma the agreement distribution is treated as degenerate.
SIGMA_EPSILON = 1e-12

RELIABILITY_OUTSTANDING = "outstanding"  # delta >= 2
RELIABILITY_MODERATE = "moderate"        # 1 <= delta < 2
RELIABILITY_WEAK = "weak"                # delta < 1
RELIABILITY_UNDEFINED = "undefined"      # sigma degenerate


class EngineError(Exception):
    """Base class for scoring failures."""


class CatalogMismatchError(EngineError):
    """Responses reference a symptom or indicator slot the catalogs do not define."""


class NoSignalError(EngineError):
    """No disease received positive excitation; there is nothing to select."""

    def __init__(self):
        super().__init__("no signal: no disease received positive excitation")


class ResponseParseError(EngineError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class ResponseMatrix:
    """Binary response matrix as the set of confirmed (symptom, indicator) pairs."""

    confirmed: frozenset[tuple[int, int]]

    @classmethod
    def from_pairs(cls, pairs) -> "ResponseMatrix":
        return cls(confirmed=frozenset((int(s), int(i)) for s, i in pairs))

    @classmethod
    def from_answers(cls, answers: dict[int, int]) -> "ResponseMatrix":
        """One confirmed indicator per symptom, e.g. questionnaire answers."""
        return cls.from_pairs(answers.items())

    def __len__(self) -> int:
        return len(self.confirmed)


def parse_response_text(text: str) -> ResponseMatrix:
    """Parse a response file: one '<s> <i>' pair per line, '#' comments."""
    pairs = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ResponseParseError(line_no, "expected '<symptom> <indicator>'")
        try:
            s, i = int(parts[0]), int(parts[1])
        except ValueError:
            raise ResponseParseError(
                line_no, f"expected two integers, got {line!r}") from None
        if s < 1 or i < 1:
            raise ResponseParseError(line_no, "indices start at 1")
        pairs.add((s, i))
    return ResponseMatrix(confirmed=frozenset(pairs))


def load_response_file(path) -> ResponseMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_response_text(fh.read())


@dataclass(frozen=True)
class DiagnosisStats:
    """Mean, spread and per-disease relative deviation of the agreement vector."""

    mean: Fraction
    sigma: float
    deltas: dict[int, float] | None  # None when sigma is degenerate

    def to_payload(self) -> dict:
        return {
            "mean": float(self.mean),
            "sigma": self.sigma,
            "deltas": None if self.deltas is None
            else {str(d): v for d, v in self.deltas.items()},
        }


@dataclass(frozen=True)
class DiagnosisResult:
    agreement: dict[int, Fraction]
    likelihood: dict[int, Fraction] | None  # None when total excitation is not positive
    stats: DiagnosisStats
    selected: int
    selected_name: str
    reliability: str
    kb_version: int
    disease_names: dict[int, str]

    def to_payload(self) -> dict:
        return {
            "selected": self.selected,
            "selected_name": self.selected_name,
            "reliability": self.reliability,
            "kb_version": self.kb_version,
            "diseases": [
                {
                    "d": d,
                    "name": self.disease_names[d],
                    "agreement": float(self.agreement[d]),
                    "likelihood": None if self.likelihood is None
                    else float(self.likelihood[d]),
                    "delta": None if self.stats.deltas is None
                    else self.stats.deltas[d],
                }
                for d in sorted(self.agreement)
            ],
            "stats": self.stats.to_payload(),
        }


@dataclass(frozen=True)
class ChartBundle:
    """Bar series plus reference levels for the agreement/likelihood diagram."""

    bars: list[tuple[int, str, float, float | None]]  # (d, name, A %, L % or None)
    reference: tuple[float, float, float] | None  # (mean, mean+sigma, mean+2sigma) in %

    def to_payload(self) -> dict:
        payload = {
            "bars": [
                {
                    "d": d,
                    "name": name,
                    "agreement_pct": round(a, 1),
                    "likelihood_pct": None if l is None else round(l, 1),
                }
                for d, name, a, l in self.bars
            ],
            "reference": None,
        }
        if self.reference is not None:
            mean, plus_1, plus_2 = self.reference
            payload["reference"] = {
                "mean_pct": round(mean, 1),
                "mean_plus_sigma_pct": round(plus_1, 1),
                "mean_plus_2sigma_pct": round(plus_2, 1),
            }
        return payload


def check_responses(table: NormalizedWeightTable, responses: ResponseMatrix) -> None:
    """Verify every confirmed pair references a defined indicator slot."""
    for s, i in sorted(responses.confirmed):
        slots = table.indicator_slots.get(s)
        if slots is None:
            raise CatalogMismatchError(f"response ({s},{i}) references unknown symptom {s}")
        if not 1 <= i <= slots:
            raise CatalogMismatchError(
                f"response ({s},{i}) references undefined indicator slot {i} "
                f"of symptom {s} ({slots} defined)")


def agreement(table: NormalizedWeightTable,
              responses: ResponseMatrix) -> dict[int, Fraction]:
    """Excitation of every disease: sum of normalized weights at confirmed pairs."""
    check_responses(table, responses)
    values = {d: Fraction(0) for d in table.disease_indices}
    for (d, s, i), w in table.entries.items():
        if (s, i) in responses.confirmed:
            values[d] += w
    return values


def likelihood(agreement_values: dict[int, Fraction]) -> dict[int, Fraction] | None:
    """Share of total excitation per disease; None when the total is not positive."""
    total = sum(agreement_values.values(), Fraction(0))
    if total <= LIKELIHOOD_EPSILON:
        return None
    return {d: a / total for d, a in agreement_values.items()}


def stats(agreement_values: dict[int, Fraction]) -> DiagnosisStats:
    n = len(agreement_values)
    mean = sum(agreement_values.values(), Fraction(0)) / n
    denom = n - VARIANCE_DDOF
    if denom <= 0:
        sigma = 0.0
    else:
        variance = sum(((a - mean) ** 2 for a in agreement_values.values()),
                       Fraction(0)) / denom
        sigma = math.sqrt(variance)
    if sigma > SIGMA_EPSILON:
        deltas = {d: float(a - mean) / sigma for d, a in agreement_values.items()}
    else:
        deltas = None
    return DiagnosisStats(mean=mean, sigma=sigma, deltas=deltas)


def _reliability(delta: float | None) -> str:
    if delta is None:
        return RELIABILITY_UNDEFINED
    if delta >= 2:
        return RELIABILITY_OUTSTANDING
    if delta >= 1:
        return RELIABILITY_MODERATE
    return RELIABILITY_WEAK


def diagnose(kb: KnowledgeBase, responses: ResponseMatrix) -> DiagnosisResult:
    """Score the responses and select the most excited disease.

    Ties at the maximum go to the lowest disease index. Raises NoSignalError
    when no disease has positive excitation (e.g. an empty response matrix).
    """
    table = normalize(kb)
    values = agreement(table, responses)
    if not any(a > 0 for a in values.values()):
        raise NoSignalError()
    best = max(values.values())
    selected = min(d for d, a in values.items() if a == best)
    result_stats = stats(values)
    delta = None if result_stats.deltas is None else result_stats.deltas[selected]
    return DiagnosisResult(
        agreement=values,
        likelihood=likelihood(values),
        stats=result_stats,
        selected=selected,
        selected_name=kb.diseases[selected],
        reliability=_reliability(delta),
        kb_version=kb.version,
        disease_names=dict(kb.diseases),
    )


def chart_data(result: DiagnosisResult) -> ChartBundle:
    """Bar series (percent) and the mean / mean+sigma / mean+2sigma reference levels."""
    bars = []
    for d in sorted(result.agreement):
        a_pct = float(result.agreement[d]) * 100.0
        l_pct = None if result.likelihood is None else float(result.likelihood[d]) * 100.0
        bars.append((d, result.disease_names[d], a_pct, l_pct))
    if result.stats.sigma > SIGMA_EPSILON:
        mean = float(result.stats.mean) * 100.0
        sigma = result.stats.sigma * 100.0
        reference = (mean, mean + sigma, mean + 2 * sigma)
    else:
        reference = None
    return ChartBundle(bars=bars, reference=reference)
